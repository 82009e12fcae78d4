#include "mcmcq/samplers.hpp"

#include <cmath>
#include <numbers>

#include "mcmcq/distributions.hpp"
#include "mcmcq/error.hpp"

namespace mcmcq {

double gamma_sample(double shape, double rate, Rng& rng) {
  if (!(shape > 0.0) || !(rate > 0.0)) {
    throw InvalidInput("gamma sampling requires positive shape and rate");
  }
  if (shape < 1.0) {
    const double boost = std::pow(rng.uniform(), 1.0 / shape);
    return boost * gamma_sample(shape + 1.0, rate, rng);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double z, v;
    do {
      z = rng.normal();
      v = 1.0 + c * z;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double z2 = z * z;
    if (u < 1.0 - 0.0331 * z2 * z2) return d * v / rate;
    if (std::log(u) < 0.5 * z2 + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
}

double student_t_sample(double df, Rng& rng) {
  const double z = rng.normal();
  const double g = gamma_sample(0.5 * df, 0.5 * df, rng);
  return z / std::sqrt(g);
}

double rw_acceptance_probability(double x, double y, double df) noexcept {
  const double log_ratio =
      0.5 * (df + 1.0) * (std::log(df + x * x) - std::log(df + y * y));
  return log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
}

RwStep metropolis_rw_step(double x, double df, double sigma, Rng& rng) {
  const double y = x + sigma * rng.normal();
  const double log_ratio =
      0.5 * (df + 1.0) * (std::log(df + x * x) - std::log(df + y * y));
  const bool accept = log_ratio >= 0.0 || std::log(rng.uniform()) < log_ratio;
  return RwStep{accept ? y : x, accept, y};
}

ChainRun run_metropolis_rw(double df, double sigma, std::size_t n, Rng& rng,
                           double x0) {
  if (!(df > 0.0)) throw InvalidInput("t target needs positive degrees of freedom");
  if (!(sigma > 0.0)) throw InvalidInput("proposal scale must be positive");
  if (n == 0) throw InvalidInput("chain length must be positive");
  ChainRun run;
  run.values.reserve(n);
  double x = x0;
  run.values.push_back(x);
  while (run.values.size() < n) {
    const RwStep step = metropolis_rw_step(x, df, sigma, rng);
    ++run.steps;
    run.accepted += step.accepted;
    x = step.next;
    run.values.push_back(x);
  }
  return run;
}

namespace {

const StudentT& target_t4() {
  static const StudentT dist(4.0);
  return dist;
}

const StudentT& proposal_t3() {
  static const StudentT dist(3.0);
  return dist;
}

double conditional_y(double x, Rng& rng) {
  return gamma_sample(2.5, 2.0 + 0.5 * x * x, rng);
}

}  // namespace

double linchpin_acceptance_probability(double x, double x_prop) noexcept {
  const double log_ratio = (target_t4().log_pdf(x_prop) - target_t4().log_pdf(x)) +
                           (proposal_t3().log_pdf(x) - proposal_t3().log_pdf(x_prop));
  return log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
}

LinchpinState linchpin_step(const LinchpinState& state, Rng& rng) {
  const double proposal = student_t_sample(3.0, rng);
  const double alpha = linchpin_acceptance_probability(state.x, proposal);
  const bool accept = alpha >= 1.0 || rng.uniform() < alpha;
  LinchpinState next;
  next.x = accept ? proposal : state.x;
  next.y = conditional_y(next.x, rng);
  return next;
}

LinchpinState linchpin_initial_state(LinchpinInit init, Rng& rng) {
  LinchpinState state;
  state.x = init == LinchpinInit::stationary ? student_t_sample(4.0, rng) : 0.0;
  state.y = conditional_y(state.x, rng);
  return state;
}

ChainRun run_linchpin(std::size_t n, Rng& rng, LinchpinInit init) {
  if (n == 0) throw InvalidInput("chain length must be positive");
  ChainRun run;
  run.values.reserve(n);
  LinchpinState state = linchpin_initial_state(init, rng);
  run.values.push_back(state.x);
  while (run.values.size() < n) {
    const LinchpinState next = linchpin_step(state, rng);
    ++run.steps;
    run.accepted += (next.x != state.x);
    state = next;
    run.values.push_back(state.x);
  }
  return run;
}

double linchpin_minorization_constant() noexcept {
  return std::sqrt(9375.0) / (32.0 * std::numbers::pi);
}

}  // namespace mcmcq
