#include "mcmcq/subsampling.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mcmcq/batch_means.hpp"
#include "mcmcq/error.hpp"

namespace mcmcq {

SlidingQuantileWindow::SlidingQuantileWindow(std::size_t capacity)
    : capacity_(capacity), tree_(capacity) {
  if (capacity == 0) throw InvalidInput("window capacity must be positive");
}

void SlidingQuantileWindow::push(double value) {
  if (arrival_.size() == capacity_) {
    tree_.erase(arrival_.front());
    arrival_.pop_front();
  }
  const Entry entry{value, next_seq_++};
  tree_.insert(entry);
  arrival_.push_back(entry);
}

void SlidingQuantileWindow::insert(double value) {
  if (arrival_.size() == capacity_) throw InvalidInput("window is full");
  const Entry entry{value, next_seq_++};
  tree_.insert(entry);
  arrival_.push_back(entry);
}

bool SlidingQuantileWindow::erase(double value) {
  // The first key not below (value, 0) is the oldest entry equal to value.
  const std::size_t pos = tree_.rank(Entry{value, 0});
  if (pos >= tree_.size()) return false;
  const Entry found = tree_.nth(pos);
  if (found.first != value) return false;
  tree_.erase(found);
  for (auto it = arrival_.begin(); it != arrival_.end(); ++it) {
    if (*it == found) {
      arrival_.erase(it);
      break;
    }
  }
  return true;
}

double SlidingQuantileWindow::select(std::size_t j) const {
  if (j < 1 || j > tree_.size()) {
    throw InvalidInput("rank " + std::to_string(j) + " outside [1, " +
                       std::to_string(tree_.size()) + "]");
  }
  return tree_.nth(j - 1).first;
}

SubsampleLayout default_subsample_layout(std::size_t n) {
  return SubsampleLayout{default_batch_layout(n).batch_size};
}

void validate(const SubsampleLayout& layout, std::size_t n) {
  if (layout.block_length < 2 || layout.block_length >= n) {
    throw InvalidLayout("block length " + std::to_string(layout.block_length) +
                        " must satisfy 2 <= b < n = " + std::to_string(n));
  }
}

std::vector<double> block_quantiles(const ScalarTrace& trace,
                                    const QuantileSpec& spec,
                                    const SubsampleLayout& layout) {
  const std::size_t n = trace.size();
  validate(layout, n);
  const std::size_t b = layout.block_length;
  const std::size_t j = quantile_rank(b, spec.q());

  SlidingQuantileWindow window(b);
  std::vector<double> out;
  out.reserve(n - b + 1);
  for (std::size_t i = 0; i < n; ++i) {
    window.push(trace[i]);
    if (i + 1 >= b) out.push_back(window.select(j));
  }
  return out;
}

double sbm_gamma2(std::span<const double> block_estimates,
                  std::size_t block_length) {
  if (block_estimates.empty()) throw InvalidLayout("no subsample blocks");
  const double count = static_cast<double>(block_estimates.size());
  // Shifted by the first estimate: exact zero for constant input.
  const double shift = block_estimates.front();
  double mean = 0.0;
  for (double x : block_estimates) mean += x - shift;
  mean /= count;
  double ss = 0.0;
  for (double x : block_estimates) {
    const double d = (x - shift) - mean;
    ss += d * d;
  }
  return static_cast<double>(block_length) / count * ss;
}

double sbm_gamma2(const ScalarTrace& trace, const QuantileSpec& spec,
                  const SubsampleLayout& layout) {
  return sbm_gamma2(block_quantiles(trace, spec, layout), layout.block_length);
}

QuantileEstimate sbm_quantile_ci(const ScalarTrace& trace,
                                 const QuantileSpec& spec, double confidence) {
  if (trace.size() < 9) throw InvalidInput("subsampling needs at least 9 values");
  const double z = normal_multiplier(confidence);
  const SubsampleLayout layout = default_subsample_layout(trace.size());

  QuantileEstimate est;
  est.method = Method::sbm;
  est.confidence = confidence;
  est.multiplier = z;
  est.sample_size = trace.size();
  est.subsample = layout;
  est.point = empirical_quantile(trace, spec);
  est.avar = sbm_gamma2(trace, spec, layout);
  est.mcse = std::sqrt(est.avar / static_cast<double>(trace.size()));
  est.ci_low = est.point - z * est.mcse;
  est.ci_high = est.point + z * est.mcse;
  return est;
}

}  // namespace mcmcq
