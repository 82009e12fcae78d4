#include "mcmcq/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "mcmcq/error.hpp"

namespace mcmcq {
namespace {

struct BetaSplit {
  double lower;  // I_x(a, b)
  double upper;  // 1 - I_x(a, b), computed without cancellation
};

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int max_iter = 10000;
  constexpr double eps = 1e-16;
  constexpr double tiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) return h;
  }
  throw InvalidInput("incomplete beta continued fraction did not converge");
}

// Takes y = 1 - x explicitly.
BetaSplit incomplete_beta_split(double a, double b, double x, double y) {
  if (x <= 0.0) return {0.0, 1.0};
  if (y <= 0.0) return {1.0, 0.0};
  const double log_front = a * std::log(x) + b * std::log(y) -
                           (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    const double lower = front * beta_continued_fraction(a, b, x) / a;
    return {lower, 1.0 - lower};
  }
  const double upper = front * beta_continued_fraction(b, a, y) / b;
  return {1.0 - upper, upper};
}

// P(T > x) for x >= 0.
double t_upper_tail(double df, double x) {
  if (std::isinf(x)) return 0.0;
  const double x2 = x * x;
  const double denom = df + x2;
  return 0.5 * incomplete_beta_split(0.5 * df, 0.5, df / denom, x2 / denom).lower;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw InvalidInput("incomplete beta requires positive shape parameters");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw InvalidInput("incomplete beta argument must lie in [0, 1]");
  }
  return incomplete_beta_split(a, b, x, 1.0 - x).lower;
}

double normal_pdf(double x) noexcept {
  return std::exp(-0.5 * x * x) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
}

double normal_cdf(double x) noexcept {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidInput("normal quantile requires p in (0, 1)");
  }
  // Acklam's rational approximation, then two Halley steps.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00, 2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  for (int i = 0; i < 2; ++i) {
    const double e = normal_cdf(x) - p;
    const double u = e / normal_pdf(x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

StudentT::StudentT(double df) : df_(df) {
  if (!(df > 0.0) || !std::isfinite(df)) {
    throw InvalidInput("Student t degrees of freedom must be positive and finite");
  }
  log_norm_ = std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
              0.5 * std::log(df * std::numbers::pi);
}

double StudentT::log_pdf(double x) const noexcept {
  return log_norm_ - 0.5 * (df_ + 1.0) * std::log1p(x * x / df_);
}

double StudentT::pdf(double x) const noexcept { return std::exp(log_pdf(x)); }

double StudentT::cdf(double x) const noexcept {
  if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  const double tail = t_upper_tail(df_, std::abs(x));
  return x < 0.0 ? tail : 1.0 - tail;
}

double StudentT::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidInput("Student t quantile requires p in (0, 1)");
  }
  if (p == 0.5) return 0.0;
  const double target = p < 0.5 ? p : 1.0 - p;
  // Bracket the root of tail(x) = target on x > 0, then safeguarded Newton.
  double lo = 0.0;
  double hi = 1.0;
  while (t_upper_tail(df_, hi) > target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) break;
  }
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 500; ++iter) {
    const double f = t_upper_tail(df_, x) - target;
    if (f > 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    double next = x + f / pdf(x);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-15 * std::abs(next) || hi - lo <= 1e-15 * hi) {
      x = next;
      break;
    }
    x = next;
  }
  return p < 0.5 ? -x : x;
}

double t_pdf(double df, double x) { return StudentT(df).pdf(x); }
double t_cdf(double df, double x) { return StudentT(df).cdf(x); }
double t_quantile(double df, double p) { return StudentT(df).quantile(p); }

}  // namespace mcmcq
