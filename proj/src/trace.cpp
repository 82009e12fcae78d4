#include "mcmcq/trace.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "mcmcq/error.hpp"

namespace mcmcq {

ScalarTrace::ScalarTrace(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty()) throw InvalidInput("trace must contain at least one value");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw InvalidInput("trace value at index " + std::to_string(i) +
                         " is not finite");
    }
  }
}

QuantileSpec::QuantileSpec(double q) : q_(q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw InvalidInput("quantile level must lie strictly inside (0, 1)");
  }
}

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::bm: return "BM";
    case Method::sbm: return "SBM";
    case Method::rs: return "RS";
  }
  return "?";
}

Method parse_method(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  if (upper == "BM") return Method::bm;
  if (upper == "SBM") return Method::sbm;
  if (upper == "RS") return Method::rs;
  throw InvalidInput("unknown method '" + std::string(text) + "'");
}

std::size_t quantile_rank(std::size_t n, double q) {
  if (n == 0) throw InvalidInput("quantile rank of an empty sample");
  if (!(q > 0.0 && q < 1.0)) {
    throw InvalidInput("quantile level must lie strictly inside (0, 1)");
  }
  const double nq = static_cast<double>(n) * q;
  const double nearest = std::nearbyint(nq);
  const double slack = 4.0 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, nq);
  const double j = std::abs(nq - nearest) <= slack ? nearest : std::ceil(nq);
  return std::clamp<std::size_t>(static_cast<std::size_t>(j), 1, n);
}

double order_statistic(std::span<const double> values, std::size_t j) {
  if (values.empty()) throw InvalidInput("order statistic of an empty trace");
  if (j < 1 || j > values.size()) {
    throw InvalidInput("rank " + std::to_string(j) + " outside [1, " +
                       std::to_string(values.size()) + "]");
  }
  std::vector<double> scratch(values.begin(), values.end());
  auto nth = scratch.begin() + static_cast<std::ptrdiff_t>(j - 1);
  std::nth_element(scratch.begin(), nth, scratch.end());
  return *nth;
}

double order_statistic(const ScalarTrace& trace, std::size_t j) {
  return order_statistic(trace.values(), j);
}

double empirical_quantile(const ScalarTrace& trace, const QuantileSpec& spec) {
  return order_statistic(trace, quantile_rank(trace.size(), spec.q()));
}

double ecdf(std::span<const double> values, double y) {
  if (values.empty()) throw InvalidInput("ecdf of an empty trace");
  const auto hits = std::count_if(values.begin(), values.end(),
                                  [y](double v) { return v <= y; });
  return static_cast<double>(hits) / static_cast<double>(values.size());
}

double ecdf(const ScalarTrace& trace, double y) {
  return ecdf(trace.values(), y);
}

}  // namespace mcmcq
