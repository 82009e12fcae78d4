#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mcmcq/kde.hpp"
#include "mcmcq/rng.hpp"
#include "mcmcq/trace.hpp"

namespace mcmcq {

/// Chain output cut at regeneration times. flags[i] = 1 when the transition
/// out of state i regenerated, so a new tour starts at i + 1. The trace ends
/// at its R-th regeneration: the last flag is 1.
class RegenTrace {
 public:
  /// Throws InvalidInput if lengths differ, a flag is not 0/1 or the last
  /// flag is 0.
  RegenTrace(std::vector<double> values, std::vector<std::uint8_t> flags);

  const ScalarTrace& trace() const noexcept { return trace_; }
  std::span<const double> values() const noexcept { return trace_.values(); }
  std::span<const std::uint8_t> flags() const noexcept { return flags_; }
  std::size_t size() const noexcept { return trace_.size(); }

  /// R, the number of complete tours.
  std::size_t tour_count() const noexcept { return boundaries_.size() - 1; }
  /// tau_0 = 0 < tau_1 < ... < tau_R = size().
  std::span<const std::size_t> boundaries() const noexcept { return boundaries_; }
  /// N_t = tau_t - tau_{t-1}, t = 1..R.
  std::vector<std::size_t> tour_lengths() const;

  bool operator==(const RegenTrace&) const = default;

 private:
  ScalarTrace trace_;
  std::vector<std::uint8_t> flags_;
  std::vector<std::size_t> boundaries_;
};

/// S_t(y) = number of values <= y in tour t, t = 1..R.
std::vector<std::size_t> tour_indicator_sums(const RegenTrace& trace, double y);

/// Ratio estimator sum_t S_t(y) / sum_t N_t of F_V(y).
double rs_cdf_at(const RegenTrace& trace, double y);

/// tau_R (S_t(y) - F_R(y) N_t) per tour. Integer valued, sums to exactly 0.
std::vector<std::int64_t> scaled_ratio_residuals(const RegenTrace& trace,
                                                 double y);

/// Gamma-hat_R(y) = 1 / (R Nbar^2) * sum_t (S_t(y) - F_R(y) N_t)^2 with
/// Nbar = tau_R / R. Throws InvalidInput when R < 2.
double rs_gamma_hat(const RegenTrace& trace, double y);

/// Quantile estimate with a regenerative MCSE and a Student t(R - 1)
/// interval: avar = Gamma-hat_R(point) / f^2. Throws InvalidInput when R < 3.
QuantileEstimate rs_quantile_ci(const RegenTrace& trace,
                                const QuantileSpec& spec, double confidence,
                                const KdeConfig& kde = {});

/// Retrospective regeneration settings for the Normal random walk on t(v):
/// small set D = [center - half_width, center + half_width], threshold c on
/// the v + x^2 scale.
struct RwRegenParams {
  double df = 0.0;
  double sigma = 0.0;
  double center = 0.0;
  double half_width = 0.0;
  double threshold_c = 0.0;

  /// center 0, half_width 2 sqrt(v / (v - 2)), c = v + Q_{t(v)}(0.75)^2.
  /// Throws InvalidParameter for v <= 2 or sigma <= 0.
  static RwRegenParams defaults(double df, double sigma);

  /// Throws InvalidParameter if any invariant fails.
  void validate() const;
};

/// Probability that the accepted move x -> y regenerates:
///   I_D(y) exp{-[(x - c0)(y - c0) + d |x - c0|] / sigma^2}
///     * [min(v + x^2, c) / min(v + x^2, v + y^2)
///        * (v + y^2) / max(v + y^2, c)]^((v + 1) / 2)
double regen_prob_accepted(double x, double y, const RwRegenParams& params);

struct RegenRun {
  RegenTrace trace;
  std::size_t steps = 0;      // transitions out of retained states
  std::size_t accepted = 0;   // accepted among those
  std::size_t discarded = 0;  // states before the first regeneration

  double acceptance_rate() const noexcept {
    return steps == 0 ? 0.0 : static_cast<double>(accepted) / steps;
  }
};

/// Random walk on t(v) from x = 0 with retrospective regeneration flags.
/// Output before the first regeneration is discarded and the run stops at
/// the R-th regeneration after it. Requires R >= 1.
RegenRun simulate_regenerative_rw(const RwRegenParams& params,
                                  std::size_t tours, Rng& rng);

/// Convenience wrapper with default regeneration parameters and a seeded
/// generator.
RegenTrace run_regenerative_rw(double df, double sigma, std::size_t tours,
                               std::uint64_t seed);

}  // namespace mcmcq
