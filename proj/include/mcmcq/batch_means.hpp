#pragma once

#include <cstddef>
#include <span>

#include "mcmcq/kde.hpp"
#include "mcmcq/trace.hpp"

namespace mcmcq {

/// b_n = floor(sqrt(n)), a_n = floor(n / b_n). The last n - a_n b_n values
/// are not used.
BatchLayout default_batch_layout(std::size_t n);

/// Throws InvalidLayout unless a_n >= 2, b_n >= 1 and a_n b_n <= n.
void validate(const BatchLayout& layout, std::size_t n);

/// Batch means of the indicators I(Y_i <= threshold) over the used prefix.
std::vector<double> indicator_batch_means(std::span<const double> values,
                                          double threshold,
                                          const BatchLayout& layout);

/// Batch-means estimate of sigma^2(threshold), the asymptotic variance of the
/// empirical CDF at `threshold`:
///   b_n / (a_n - 1) * sum_k (U_k - F)^2
/// with U_k the indicator batch means and F their mean over the used prefix.
double bm_sigma2(const ScalarTrace& trace, double threshold,
                 const BatchLayout& layout);

/// Quantile estimate with a batch-means MCSE and a Normal-multiplier
/// interval. avar = bm_sigma2 / f^2 with f the kernel density estimate at the
/// point estimate; a zero bm_sigma2 gives avar 0 without a density estimate.
QuantileEstimate bm_quantile_ci(const ScalarTrace& trace,
                                const QuantileSpec& spec, double confidence,
                                const KdeConfig& kde = {});

/// Two-sided Normal multiplier z_{alpha/2} for the given confidence level.
double normal_multiplier(double confidence);

}  // namespace mcmcq
