#include "mcmcq/batch_means.hpp"

#include <cmath>
#include <string>

#include "mcmcq/distributions.hpp"
#include "mcmcq/error.hpp"

namespace mcmcq {

BatchLayout default_batch_layout(std::size_t n) {
  const auto b = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  if (b == 0) throw InvalidLayout("trace too short for batch means");
  // Guard against sqrt rounding for perfect squares near 2^52.
  std::size_t size = b;
  while ((size + 1) * (size + 1) <= n) ++size;
  while (size * size > n) --size;
  return BatchLayout{n / size, size};
}

void validate(const BatchLayout& layout, std::size_t n) {
  if (layout.batch_count < 2) {
    throw InvalidLayout("batch means needs at least two batches");
  }
  if (layout.batch_size < 1) throw InvalidLayout("batch size must be positive");
  if (layout.used_length() > n) {
    throw InvalidLayout("layout uses " + std::to_string(layout.used_length()) +
                        " values but the trace has " + std::to_string(n));
  }
}

std::vector<double> indicator_batch_means(std::span<const double> values,
                                          double threshold,
                                          const BatchLayout& layout) {
  validate(layout, values.size());
  std::vector<double> means(layout.batch_count);
  const double inv_b = 1.0 / static_cast<double>(layout.batch_size);
  for (std::size_t k = 0; k < layout.batch_count; ++k) {
    const auto batch = values.subspan(k * layout.batch_size, layout.batch_size);
    std::size_t hits = 0;
    for (double y : batch) hits += (y <= threshold);
    means[k] = static_cast<double>(hits) * inv_b;
  }
  return means;
}

double bm_sigma2(const ScalarTrace& trace, double threshold,
                 const BatchLayout& layout) {
  const auto means = indicator_batch_means(trace.values(), threshold, layout);
  double overall = 0.0;
  for (double u : means) overall += u;
  overall /= static_cast<double>(means.size());
  double ss = 0.0;
  for (double u : means) ss += (u - overall) * (u - overall);
  return static_cast<double>(layout.batch_size) /
         static_cast<double>(layout.batch_count - 1) * ss;
}

double normal_multiplier(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw InvalidInput("confidence level must lie strictly inside (0, 1)");
  }
  return normal_quantile(0.5 + 0.5 * confidence);
}

QuantileEstimate bm_quantile_ci(const ScalarTrace& trace,
                                const QuantileSpec& spec, double confidence,
                                const KdeConfig& kde) {
  if (trace.size() < 4) throw InvalidInput("batch means needs at least 4 values");
  const double z = normal_multiplier(confidence);
  const BatchLayout layout = default_batch_layout(trace.size());

  QuantileEstimate est;
  est.method = Method::bm;
  est.confidence = confidence;
  est.multiplier = z;
  est.sample_size = trace.size();
  est.batches = layout;
  est.point = empirical_quantile(trace, spec);

  const double sigma2 = bm_sigma2(trace, est.point, layout);
  if (sigma2 > 0.0) {
    const double h = resolve_bandwidth(trace, kde);
    const double f = kde_at(trace.values(), est.point, h);
    if (!(f > 0.0)) {
      throw DegenerateData("density estimate at the quantile is zero");
    }
    est.bandwidth = h;
    est.density = f;
    est.avar = sigma2 / (f * f);
  }
  est.mcse = std::sqrt(est.avar / static_cast<double>(trace.size()));
  est.ci_low = est.point - z * est.mcse;
  est.ci_high = est.point + z * est.mcse;
  return est;
}

}  // namespace mcmcq
