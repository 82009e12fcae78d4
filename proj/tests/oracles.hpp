#pragma once

// Reference implementations used only by the tests. Each one follows the
// textbook formula directly and shares no code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace oracle {

inline std::size_t rank(std::size_t n, double q) {
  const double nq = static_cast<double>(n) * q;
  auto j = static_cast<std::size_t>(std::ceil(nq - 1e-12));
  return std::clamp<std::size_t>(j, 1, n);
}

inline double sorted_quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  return v[rank(v.size(), q) - 1];
}

inline std::vector<double> naive_block_quantiles(const std::vector<double>& v,
                                                 std::size_t b, double q) {
  std::vector<double> out;
  for (std::size_t i = 0; i + b <= v.size(); ++i) {
    out.push_back(sorted_quantile({v.begin() + i, v.begin() + i + b}, q));
  }
  return out;
}

inline double bm_sigma2(const std::vector<double>& v, double y, std::size_t a,
                        std::size_t b) {
  std::vector<double> u(a, 0.0);
  for (std::size_t k = 0; k < a; ++k) {
    for (std::size_t i = k * b; i < (k + 1) * b; ++i) u[k] += v[i] <= y ? 1.0 : 0.0;
    u[k] /= static_cast<double>(b);
  }
  double fbar = 0.0;
  for (double x : u) fbar += x;
  fbar /= static_cast<double>(a);
  double ss = 0.0;
  for (double x : u) ss += (x - fbar) * (x - fbar);
  return static_cast<double>(b) / static_cast<double>(a - 1) * ss;
}

inline double sbm_gamma2(const std::vector<double>& v, std::size_t b, double q) {
  const auto xi = naive_block_quantiles(v, b, q);
  double mean = 0.0;
  for (double x : xi) mean += x;
  mean /= static_cast<double>(xi.size());
  double ss = 0.0;
  for (double x : xi) ss += (x - mean) * (x - mean);
  return static_cast<double>(b) / static_cast<double>(v.size() - b + 1) * ss;
}

inline double rs_gamma(const std::vector<double>& v, const std::vector<std::uint8_t>& flags,
                       double y) {
  std::vector<double> s, len;
  double cs = 0.0, cn = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    cs += v[i] <= y ? 1.0 : 0.0;
    cn += 1.0;
    if (flags[i]) {
      s.push_back(cs);
      len.push_back(cn);
      cs = cn = 0.0;
    }
  }
  const auto r = static_cast<double>(s.size());
  double ssum = 0.0, nsum = 0.0;
  for (std::size_t t = 0; t < s.size(); ++t) {
    ssum += s[t];
    nsum += len[t];
  }
  const double fhat = ssum / nsum;
  const double nbar = nsum / r;
  double acc = 0.0;
  for (std::size_t t = 0; t < s.size(); ++t) {
    const double e = s[t] - fhat * len[t];
    acc += e * e;
  }
  return acc / (r * nbar * nbar);
}

// Regeneration probability as s'(x) nu'(y) / (k(x, y) alpha(x, y)) with
// k the Normal proposal density, alpha the Metropolis acceptance probability
// and s', nu' the two factors of the minorization, all evaluated from
// densities rather than from the simplified closed form.
inline double regen_probability(double x, double y, double v, double sigma, double center,
                                double d, double c) {
  if (std::abs(y - center) > d) return 0.0;
  const boost::math::normal_distribution<double> proposal(0.0, sigma);
  const boost::math::students_t_distribution<double> target(v);
  const double k = boost::math::pdf(proposal, y - x);
  const double alpha = std::min(1.0, boost::math::pdf(target, y) / boost::math::pdf(target, x));
  const double dx = x - center;
  const double s_q = std::exp(-(dx * dx + 2.0 * d * std::abs(dx)) / (2.0 * sigma * sigma));
  const double nu_q = boost::math::pdf(proposal, y - center);
  // Unnormalized target at the threshold: pi(t) with v + t^2 = c.
  const double pi_c = boost::math::pdf(target, std::sqrt(c - v));
  const double s_alpha = std::min(1.0, pi_c / boost::math::pdf(target, x));
  const double nu_alpha = std::min(1.0, boost::math::pdf(target, y) / pi_c);
  return s_q * s_alpha * nu_q * nu_alpha / (k * alpha);
}

inline double t_cdf(double v, double x) {
  return boost::math::cdf(boost::math::students_t_distribution<double>(v), x);
}

inline double t_quantile(double v, double p) {
  return boost::math::quantile(boost::math::students_t_distribution<double>(v), p);
}

// Closed-form t(4) distribution function.
inline double t4_cdf(double x) {
  return 0.5 + x * (x * x + 6.0) / (2.0 * std::pow(x * x + 4.0, 1.5));
}

inline std::vector<double> random_walk(std::size_t n, std::uint64_t seed, double rho = 0.5) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> z;
  std::vector<double> v(n);
  double x = 0.0;
  for (auto& e : v) {
    x = rho * x + z(gen);
    e = x;
  }
  return v;
}

}  // namespace oracle
