#pragma once

#include <optional>
#include <span>

#include "mcmcq/trace.hpp"

namespace mcmcq {

/// Bandwidth selection for the Gaussian kernel. An empty `bandwidth` means
/// the automatic rule (Silverman).
struct KdeConfig {
  std::optional<double> bandwidth;

  static KdeConfig automatic() { return {}; }
  static KdeConfig fixed(double h);
};

/// Silverman's rule: 0.9 * min(sd, IQR / 1.34) * n^(-1/5). If the IQR is
/// zero the sample standard deviation is used alone. Throws DegenerateData
/// when the resulting bandwidth is not positive.
double silverman_bandwidth(std::span<const double> values);

/// Explicit bandwidth if set, Silverman's rule otherwise.
double resolve_bandwidth(const ScalarTrace& trace, const KdeConfig& config);

/// Gaussian-kernel density estimate at x with a fixed bandwidth h > 0.
double kde_at(std::span<const double> values, double x, double h);

/// Gaussian-kernel density estimate at x: (1/(n h)) sum_i phi((x - Y_i)/h).
double kde_at(const ScalarTrace& trace, double x, const KdeConfig& config);

}  // namespace mcmcq
