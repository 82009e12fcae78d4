#include "mcmcq/kde.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mcmcq/error.hpp"

namespace mcmcq {

KdeConfig KdeConfig::fixed(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw InvalidInput("kernel bandwidth must be positive and finite");
  }
  return KdeConfig{h};
}

double silverman_bandwidth(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw DegenerateData("automatic bandwidth needs at least two values");

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));

  const double iqr = order_statistic(values, quantile_rank(n, 0.75)) -
                     order_statistic(values, quantile_rank(n, 0.25));
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  const double h = 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
  if (!(h > 0.0)) {
    throw DegenerateData("automatic bandwidth is zero (trace has no spread)");
  }
  return h;
}

double resolve_bandwidth(const ScalarTrace& trace, const KdeConfig& config) {
  if (config.bandwidth) {
    if (!(*config.bandwidth > 0.0)) {
      throw DegenerateData("kernel bandwidth must be positive");
    }
    return *config.bandwidth;
  }
  return silverman_bandwidth(trace.values());
}

double kde_at(std::span<const double> values, double x, double h) {
  if (values.empty()) throw InvalidInput("density estimate of an empty trace");
  if (!(h > 0.0)) throw DegenerateData("kernel bandwidth must be positive");
  const double inv_h = 1.0 / h;
  double sum = 0.0;
  for (double y : values) {
    const double u = (x - y) * inv_h;
    sum += std::exp(-0.5 * u * u);
  }
  const double norm = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;
  return norm * sum * inv_h / static_cast<double>(values.size());
}

double kde_at(const ScalarTrace& trace, double x, const KdeConfig& config) {
  return kde_at(trace.values(), x, resolve_bandwidth(trace, config));
}

}  // namespace mcmcq
