#pragma once

#include <cstddef>
#include <vector>

#include "mcmcq/rng.hpp"

namespace mcmcq {

/// Gamma(shape, rate) draw. Marsaglia-Tsang squeeze for shape >= 1, with
/// the U^(1/shape) boost below 1. Throws InvalidInput unless shape, rate > 0.
double gamma_sample(double shape, double rate, Rng& rng);

/// Student t(df) draw as Z / sqrt(G), G ~ Gamma(df/2, rate df/2).
double student_t_sample(double df, Rng& rng);

struct RwStep {
  double next;
  bool accepted;
  double proposal;
};

/// Metropolis acceptance probability for a t(df) target, moving x -> y:
/// min{1, ((df + x^2) / (df + y^2))^((df + 1) / 2)}.
double rw_acceptance_probability(double x, double y, double df) noexcept;

/// One Normal-proposal random-walk Metropolis step on a t(df) target.
RwStep metropolis_rw_step(double x, double df, double sigma, Rng& rng);

struct ChainRun {
  std::vector<double> values;
  std::size_t steps = 0;
  std::size_t accepted = 0;

  double acceptance_rate() const noexcept {
    return steps == 0 ? 0.0 : static_cast<double>(accepted) / steps;
  }
};

/// n states of the random walk started at x0 (the start state is the first
/// value). Throws InvalidInput for df <= 0, sigma <= 0 or n == 0.
ChainRun run_metropolis_rw(double df, double sigma, std::size_t n, Rng& rng,
                           double x0 = 0.0);

/// State of the two-block sampler whose joint target has t(4) x-marginal
/// and Gamma(5/2, 2 + x^2/2) conditional for y.
struct LinchpinState {
  double x = 0.0;
  double y = 1.0;
};

enum class LinchpinInit {
  fixed,       // x = 0, y drawn from the x = 0 conditional
  stationary,  // x ~ t(4), y from its conditional
};

/// Acceptance probability of the t(3) independence proposal x -> x_prop for
/// the t(4) marginal: min{1, f4(x') q3(x) / (f4(x) q3(x'))}.
double linchpin_acceptance_probability(double x, double x_prop) noexcept;

/// Independence Metropolis update of x with a t(3) proposal, then an exact
/// draw y ~ Gamma(5/2, 2 + x^2/2) at the updated x.
LinchpinState linchpin_step(const LinchpinState& state, Rng& rng);

LinchpinState linchpin_initial_state(LinchpinInit init, Rng& rng);

/// x-values of n states of the linchpin sampler, starting from the initial
/// state.
ChainRun run_linchpin(std::size_t n, Rng& rng,
                      LinchpinInit init = LinchpinInit::fixed);

/// Minorization constant of the linchpin kernel, sqrt(9375) / (32 pi).
double linchpin_minorization_constant() noexcept;

}  // namespace mcmcq
