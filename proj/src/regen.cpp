#include "mcmcq/regen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mcmcq/distributions.hpp"
#include "mcmcq/error.hpp"
#include "mcmcq/samplers.hpp"

namespace mcmcq {

RegenTrace::RegenTrace(std::vector<double> values,
                       std::vector<std::uint8_t> flags)
    : trace_(std::move(values)), flags_(std::move(flags)) {
  if (flags_.size() != trace_.size()) {
    throw InvalidInput("regeneration flags and values differ in length");
  }
  boundaries_.push_back(0);
  for (std::size_t i = 0; i < flags_.size(); ++i) {
    if (flags_[i] > 1) {
      throw InvalidInput("regeneration flag at index " + std::to_string(i) +
                         " is not 0 or 1");
    }
    if (flags_[i] == 1) boundaries_.push_back(i + 1);
  }
  if (flags_.back() != 1) {
    throw InvalidInput("regenerative trace must end at a regeneration");
  }
}

std::vector<std::size_t> RegenTrace::tour_lengths() const {
  std::vector<std::size_t> lengths(tour_count());
  for (std::size_t t = 0; t < lengths.size(); ++t) {
    lengths[t] = boundaries_[t + 1] - boundaries_[t];
  }
  return lengths;
}

std::vector<std::size_t> tour_indicator_sums(const RegenTrace& trace, double y) {
  const auto values = trace.values();
  const auto bounds = trace.boundaries();
  std::vector<std::size_t> sums(trace.tour_count(), 0);
  for (std::size_t t = 0; t < sums.size(); ++t) {
    for (std::size_t i = bounds[t]; i < bounds[t + 1]; ++i) {
      sums[t] += (values[i] <= y);
    }
  }
  return sums;
}

double rs_cdf_at(const RegenTrace& trace, double y) {
  const auto sums = tour_indicator_sums(trace, y);
  std::size_t total = 0;
  for (auto s : sums) total += s;
  return static_cast<double>(total) / static_cast<double>(trace.size());
}

std::vector<std::int64_t> scaled_ratio_residuals(const RegenTrace& trace,
                                                 double y) {
  const auto sums = tour_indicator_sums(trace, y);
  const auto lengths = trace.tour_lengths();
  std::int64_t total_s = 0;
  for (auto s : sums) total_s += static_cast<std::int64_t>(s);
  const auto tau = static_cast<std::int64_t>(trace.size());
  std::vector<std::int64_t> scaled(sums.size());
  for (std::size_t t = 0; t < sums.size(); ++t) {
    scaled[t] = static_cast<std::int64_t>(sums[t]) * tau -
                total_s * static_cast<std::int64_t>(lengths[t]);
  }
  return scaled;
}

double rs_gamma_hat(const RegenTrace& trace, double y) {
  const std::size_t tours = trace.tour_count();
  if (tours < 2) throw InvalidInput("regenerative variance needs at least 2 tours");
  const double inv_tau = 1.0 / static_cast<double>(trace.size());
  double ss = 0.0;
  for (const std::int64_t scaled : scaled_ratio_residuals(trace, y)) {
    const double residual = static_cast<double>(scaled) * inv_tau;
    ss += residual * residual;
  }
  // 1 / (R Nbar^2) = R / tau^2.
  return ss * static_cast<double>(tours) * inv_tau * inv_tau;
}

QuantileEstimate rs_quantile_ci(const RegenTrace& trace,
                                const QuantileSpec& spec, double confidence,
                                const KdeConfig& kde) {
  const std::size_t tours = trace.tour_count();
  if (tours < 3) throw InvalidInput("regenerative interval needs at least 3 tours");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw InvalidInput("confidence level must lie strictly inside (0, 1)");
  }
  const double t_mult =
      t_quantile(static_cast<double>(tours - 1), 0.5 + 0.5 * confidence);

  QuantileEstimate est;
  est.method = Method::rs;
  est.confidence = confidence;
  est.multiplier = t_mult;
  est.sample_size = trace.size();
  est.tours = tours;
  est.point = empirical_quantile(trace.trace(), spec);

  const double gamma = rs_gamma_hat(trace, est.point);
  if (gamma > 0.0) {
    const double h = resolve_bandwidth(trace.trace(), kde);
    const double f = kde_at(trace.values(), est.point, h);
    if (!(f > 0.0)) {
      throw DegenerateData("density estimate at the quantile is zero");
    }
    est.bandwidth = h;
    est.density = f;
    est.avar = gamma / (f * f);
  }
  est.mcse = std::sqrt(est.avar / static_cast<double>(tours));
  est.ci_low = est.point - t_mult * est.mcse;
  est.ci_high = est.point + t_mult * est.mcse;
  return est;
}

RwRegenParams RwRegenParams::defaults(double df, double sigma) {
  if (!(df > 2.0) || !std::isfinite(df)) {
    throw InvalidParameter("regeneration defaults need degrees of freedom > 2");
  }
  RwRegenParams p;
  p.df = df;
  p.sigma = sigma;
  p.center = 0.0;
  p.half_width = 2.0 * std::sqrt(df / (df - 2.0));
  const double upper_quartile = t_quantile(df, 0.75);
  p.threshold_c = df + upper_quartile * upper_quartile;
  p.validate();
  return p;
}

void RwRegenParams::validate() const {
  if (!(df > 2.0)) throw InvalidParameter("degrees of freedom must exceed 2");
  if (!(sigma > 0.0)) throw InvalidParameter("proposal scale must be positive");
  if (!(half_width > 0.0)) throw InvalidParameter("small-set half width must be positive");
  if (!(threshold_c > df)) throw InvalidParameter("threshold c must exceed the degrees of freedom");
  if (!std::isfinite(center)) throw InvalidParameter("small-set center must be finite");
}

double regen_prob_accepted(double x, double y, const RwRegenParams& p) {
  const double dy = y - p.center;
  if (std::abs(dy) > p.half_width) return 0.0;
  const double dx = x - p.center;
  const double proposal_factor =
      std::exp(-(dx * dy + p.half_width * std::abs(dx)) / (p.sigma * p.sigma));
  const double ax = p.df + x * x;
  const double ay = p.df + y * y;
  const double c = p.threshold_c;
  const double base = std::min(ax, c) / std::min(ax, ay) * (ay / std::max(ay, c));
  const double target_factor = std::pow(base, 0.5 * (p.df + 1.0));
  return proposal_factor * target_factor;
}

RegenRun simulate_regenerative_rw(const RwRegenParams& params,
                                  std::size_t tours, Rng& rng) {
  params.validate();
  if (tours < 1) throw InvalidInput("need at least one tour");
  std::vector<double> values;
  std::vector<std::uint8_t> flags;
  std::size_t steps = 0, accepted = 0, discarded = 0, regenerations = 0;
  bool started = false;
  double x = 0.0;
  while (true) {
    const RwStep step = metropolis_rw_step(x, params.df, params.sigma, rng);
    bool regenerated = false;
    if (step.accepted) {
      const double r = regen_prob_accepted(x, step.next, params);
      regenerated = r > 0.0 && rng.uniform() < r;
    }
    if (started) {
      values.push_back(x);
      flags.push_back(regenerated ? 1 : 0);
      ++steps;
      accepted += step.accepted;
    } else {
      ++discarded;
    }
    if (regenerated) {
      if (!started) {
        started = true;
      } else if (++regenerations == tours) {
        break;
      }
    }
    x = step.next;
  }
  return RegenRun{RegenTrace(std::move(values), std::move(flags)), steps,
                  accepted, discarded};
}

RegenTrace run_regenerative_rw(double df, double sigma, std::size_t tours,
                               std::uint64_t seed) {
  Rng rng(seed);
  return simulate_regenerative_rw(RwRegenParams::defaults(df, sigma), tours, rng)
      .trace;
}

}  // namespace mcmcq
