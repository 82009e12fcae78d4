#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace mcmcq {

/// Real-valued functional evaluations Y_i = g(X_i) of a single chain run.
/// Nonempty, all values finite, immutable after construction.
class ScalarTrace {
 public:
  /// Throws InvalidInput on an empty sequence or a non-finite value.
  explicit ScalarTrace(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  bool operator==(const ScalarTrace&) const = default;

 private:
  std::vector<double> values_;
};

/// Probability level of the quantile under study, strictly inside (0, 1).
class QuantileSpec {
 public:
  explicit QuantileSpec(double q);
  double q() const noexcept { return q_; }

 private:
  double q_;
};

enum class Method { bm, sbm, rs };

std::string_view to_string(Method m) noexcept;
/// Accepts "BM", "SBM", "RS" (case-insensitive). Throws InvalidInput.
Method parse_method(std::string_view text);

struct BatchLayout {
  std::size_t batch_count = 0;  // a_n
  std::size_t batch_size = 0;   // b_n
  std::size_t used_length() const noexcept { return batch_count * batch_size; }
};

struct SubsampleLayout {
  std::size_t block_length = 0;  // b
  std::size_t block_count(std::size_t n) const noexcept {
    return n - block_length + 1;
  }
};

/// Point estimate, Monte Carlo standard error and confidence interval for
/// one quantile. `mcse = sqrt(avar / denominator)` where the denominator is
/// the sample size for BM/SBM and the tour count for RS. The optional fields
/// record how the estimate was produced.
struct QuantileEstimate {
  double point = 0.0;
  Method method = Method::bm;
  double avar = 0.0;
  double mcse = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double confidence = 0.95;
  double multiplier = 0.0;

  std::size_t sample_size = 0;
  std::optional<double> bandwidth;
  std::optional<double> density;
  std::optional<BatchLayout> batches;
  std::optional<SubsampleLayout> subsample;
  std::optional<std::size_t> tours;

  double half_width() const noexcept { return 0.5 * (ci_high - ci_low); }
  bool contains(double x) const noexcept { return ci_low <= x && x <= ci_high; }
};

/// Rank j with j - 1 < n q <= j, clamped to [1, n]. When n q is integral up
/// to a few ulps (q = 0.07, n = 100), j = n q.
std::size_t quantile_rank(std::size_t n, double q);

/// Value of rank j (1-based) in ascending order. Expected O(n) selection.
double order_statistic(const ScalarTrace& trace, std::size_t j);
double order_statistic(std::span<const double> values, std::size_t j);

/// The order statistic Y_{n(j)} with j from quantile_rank.
double empirical_quantile(const ScalarTrace& trace, const QuantileSpec& spec);

/// Fraction of values <= y.
double ecdf(const ScalarTrace& trace, double y);
double ecdf(std::span<const double> values, double y);

}  // namespace mcmcq
