#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <utility>
#include <vector>

#include "mcmcq/order_statistic_tree.hpp"
#include "mcmcq/trace.hpp"

namespace mcmcq {

/// Multiset of the most recent `capacity` values with rank selection.
/// Entries are keyed by (value, insertion sequence) so tied values stay
/// distinguishable; `push` evicts the oldest entry once the window is full.
class SlidingQuantileWindow {
 public:
  explicit SlidingQuantileWindow(std::size_t capacity);

  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t size() const noexcept { return tree_.size(); }

  /// Appends a value, evicting the oldest entry if the window is full.
  void push(double value);

  /// Inserts a value without eviction. Throws InvalidInput when full.
  void insert(double value);
  /// Removes one occurrence of `value` (the oldest among equal values).
  /// Returns false if no such value is present.
  bool erase(double value);

  /// Value of rank j (1-based) among the current contents.
  double select(std::size_t j) const;

 private:
  using Entry = std::pair<double, std::uint64_t>;

  std::size_t capacity_;
  std::uint64_t next_seq_ = 0;
  std::deque<Entry> arrival_;
  OrderStatisticTree<Entry> tree_;
};

/// b = floor(sqrt(n)).
SubsampleLayout default_subsample_layout(std::size_t n);

/// Throws InvalidLayout unless 2 <= b < n.
void validate(const SubsampleLayout& layout, std::size_t n);

/// Quantile estimates over the n - b + 1 overlapping blocks
/// {Y_{i-1}, ..., Y_{i+b-2}}, each the rank-j order statistic with
/// j - 1 < b q <= j. O(n log b).
std::vector<double> block_quantiles(const ScalarTrace& trace,
                                    const QuantileSpec& spec,
                                    const SubsampleLayout& layout);

/// Subsampling estimate of gamma^2(xi_q):
///   b / (n - b + 1) * sum_i (xi*_i - mean(xi*))^2.
double sbm_gamma2(const ScalarTrace& trace, const QuantileSpec& spec,
                  const SubsampleLayout& layout);

/// Same as above from precomputed block quantiles.
double sbm_gamma2(std::span<const double> block_estimates,
                  std::size_t block_length);

/// Quantile estimate with a subsampling MCSE and a Normal-multiplier
/// interval. Needs no density estimate.
QuantileEstimate sbm_quantile_ci(const ScalarTrace& trace,
                                 const QuantileSpec& spec, double confidence);

}  // namespace mcmcq
