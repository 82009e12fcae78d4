#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "mcmcq/batch_means.hpp"
#include "mcmcq/bounds.hpp"
#include "mcmcq/distributions.hpp"
#include "mcmcq/error.hpp"
#include "mcmcq/rng.hpp"
#include "mcmcq/samplers.hpp"
#include "mcmcq/trace.hpp"

using namespace mcmcq;

namespace {

constexpr double kLambda = 0.9631319438460935;

// Monte Carlo standard error of the ECDF at y from batch means.
double ecdf_mcse(const std::vector<double>& v, double y) {
  const ScalarTrace t(v);
  return std::sqrt(bm_sigma2(t, y, default_batch_layout(v.size())) /
                   static_cast<double>(v.size()));
}

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

double direct_polynomial(double n, double a, double g, double m, double epim) {
  return 8.0 * std::exp(-a * g * g / 8.0) +
         22.0 * a * std::sqrt(1.0 + 4.0 / g) * std::pow(std::floor(n / (2.0 * a)), -m) * epim;
}

double direct_uniform(double n, double a, double g, double lambda, double n0) {
  return 8.0 * std::exp(-a * g * g / 8.0) +
         22.0 * a * std::sqrt(1.0 + 4.0 / g) *
             std::pow(1.0 - lambda, std::floor(n / (2.0 * a * n0)));
}

double direct_improved(double n, double g, double lambda, double n0) {
  const double inner = n * g - 2.0 * n0 / lambda;
  return 2.0 * std::exp(-lambda * lambda * inner * inner / (2.0 * n * n0 * n0));
}

double example_gamma() {
  return gamma_eps(TargetCdf::student_t(4.0, 0.5), 0.5, 0.1, 0.99999);
}

}  // namespace

// ---- samplers ----

TEST_CASE("random-walk acceptance probability") {
  CHECK(rw_acceptance_probability(0.0, 1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(rw_acceptance_probability(2.0, -1.0, 5.0) == 1.0);
  CHECK(rw_acceptance_probability(1.0, 3.0, 5.0) < 1.0);
}

TEST_CASE("random-walk step keeps or moves to the proposal") {
  Rng rng(8);
  double x = 0.0;
  int accepted = 0;
  for (int i = 0; i < 5000; ++i) {
    const RwStep s = metropolis_rw_step(x, 3.0, 5.5, rng);
    CHECK(s.next == (s.accepted ? s.proposal : x));
    accepted += s.accepted;
    x = s.next;
  }
  CHECK(accepted > 0);
  CHECK(accepted < 5000);
  CHECK_THROWS_AS(run_metropolis_rw(3.0, 0.0, 10, rng), InvalidInput);
  CHECK_THROWS_AS(run_metropolis_rw(3.0, 1.0, 0, rng), InvalidInput);
}

TEST_CASE("random-walk acceptance rates over 1e6 steps") {
  Rng a(1), b(2);
  const ChainRun t3 = run_metropolis_rw(3.0, 5.5, 1000000, a);
  const ChainRun t30 = run_metropolis_rw(30.0, 2.5, 1000000, b);
  CHECK(std::abs(t3.acceptance_rate() - 0.25) < 0.05);
  CHECK(std::abs(t30.acceptance_rate() - 0.40) < 0.05);
}

TEST_CASE("random-walk marginal matches t(v) at the deciles") {
  Rng rng(3);
  const ChainRun run = run_metropolis_rw(30.0, 2.5, 1000000, rng);
  for (int k = 1; k <= 9; ++k) {
    const double y = oracle::t_quantile(30.0, k / 10.0);
    CHECK(std::abs(ecdf(run.values, y) - k / 10.0) < 3.0 * ecdf_mcse(run.values, y));
  }
}

TEST_CASE("linchpin acceptance and minorization constant") {
  for (double x : {-3.0, 0.0, 0.4, 7.0}) CHECK(linchpin_acceptance_probability(x, x) == 1.0);
  CHECK(linchpin_minorization_constant() == doctest::Approx(kLambda).epsilon(1e-15));
  const boost::math::students_t_distribution<double> t3(3.0), t4(4.0);
  double inf = std::numeric_limits<double>::infinity();
  for (double x = -200.0; x <= 200.0; x += 0.001) {
    inf = std::min(inf, boost::math::pdf(t3, x) / boost::math::pdf(t4, x));
  }
  CHECK(inf >= kLambda - 1e-12);
  CHECK(inf <= kLambda + 1e-6);
}

TEST_CASE("linchpin marginal is t(4)") {
  Rng rng(4);
  const ChainRun run = run_linchpin(1000000, rng);
  CHECK(run.values.size() == 1000000);
  CHECK(run.values.front() == 0.0);
  CHECK(std::abs(ecdf(run.values, 0.0) - 0.5) < 3.0 * ecdf_mcse(run.values, 0.0));
  for (int k = 1; k <= 9; ++k) {
    const double y = oracle::t_quantile(4.0, k / 10.0);
    CHECK(std::abs(ecdf(run.values, y) - k / 10.0) < 3.0 * ecdf_mcse(run.values, y));
  }
  Rng s(5);
  const LinchpinState init = linchpin_initial_state(LinchpinInit::stationary, s);
  CHECK(init.y > 0.0);
  Rng f(5);
  CHECK(linchpin_initial_state(LinchpinInit::fixed, f).x == 0.0);
}

TEST_CASE("linchpin steps keep y positive") {
  Rng rng(6);
  LinchpinState s = linchpin_initial_state(LinchpinInit::fixed, rng);
  for (int i = 0; i < 10000; ++i) {
    s = linchpin_step(s, rng);
    CHECK(s.y > 0.0);
  }
}

TEST_CASE("gamma sampler") {
  Rng rng(7);
  const int n = 1000000;
  double s = 0.0;
  bool positive = true;
  for (int i = 0; i < n; ++i) {
    const double g = gamma_sample(2.5, 2.0, rng);
    positive = positive && g > 0.0;
    s += g;
  }
  CHECK(positive);
  // Var = shape / rate^2 = 0.625.
  CHECK(std::abs(s / n - 1.25) < 3.0 * std::sqrt(0.625 / n));

  double small = 0.0;
  for (int i = 0; i < 200000; ++i) small += gamma_sample(0.4, 1.0, rng);
  CHECK(std::abs(small / 200000 - 0.4) < 4.0 * std::sqrt(0.4 / 200000));

  CHECK_THROWS_AS(gamma_sample(2.5, 0.0, rng), InvalidInput);
  CHECK_THROWS_AS(gamma_sample(2.5, -1.0, rng), InvalidInput);
  CHECK_THROWS_AS(gamma_sample(0.0, 1.0, rng), InvalidInput);
}

TEST_CASE("gamma sampler is a scale family") {
  Rng a(10), b(11);
  const std::size_t n = 50000;
  const double r = 3.7;
  std::vector<double> x(n), y(n);
  for (auto& e : x) e = gamma_sample(2.5, r, a);
  for (auto& e : y) e = gamma_sample(2.5, 1.0, b) / r;
  // 1% critical value of the two-sample KS statistic.
  CHECK(ks_statistic(x, y) < 1.63 * std::sqrt(2.0 / n));
}

TEST_CASE("student t draws") {
  Rng rng(12);
  std::vector<double> v(200000);
  for (auto& x : v) x = student_t_sample(4.0, rng);
  for (double p : {0.1, 0.5, 0.9}) {
    const double y = oracle::t_quantile(4.0, p);
    CHECK(std::abs(ecdf(v, y) - p) < 4.0 * std::sqrt(p * (1 - p) / v.size()));
  }
}

// ---- bounds ----

TEST_CASE("gamma_eps examples") {
  CHECK(std::abs(example_gamma() - 0.037422) < 5e-7);
  CHECK(example_gamma() == doctest::Approx(0.037421705309478075).epsilon(1e-12));

  const TargetCdf uniform{[](double x) { return std::clamp(x, 0.0, 1.0); }, 0.5};
  CHECK(gamma_eps(uniform, 0.5, 0.1, 0.5) == doctest::Approx(0.05).epsilon(1e-14));

  const TargetCdf t6 = TargetCdf::student_t(6.0, 0.5);
  CHECK(gamma_eps(t6, 0.5, 0.3, 1.0 - 1e-13) ==
        doctest::Approx(t_cdf(6.0, 0.3) - 0.5).epsilon(1e-11));

  const TargetCdf step{[](double x) { return x < 0.0 ? 0.25 : (x < 1.0 ? 0.5 : 0.75); }, 0.0};
  CHECK_THROWS_AS(gamma_eps(step, 0.5, 0.5, 0.9), InvalidInput);
  CHECK_THROWS_AS(gamma_eps(t6, 0.5, 0.0, 0.5), InvalidInput);
  CHECK_THROWS_AS(gamma_eps(t6, 0.5, 0.1, 1.0), InvalidInput);
}

TEST_CASE("polynomial bound") {
  const PolynomialErgodicity p{2.0, 1.0};
  CHECK(bound_polynomial(100, 5, 0.1, p) == doctest::Approx(14.993592586163292).epsilon(1e-14));
  CHECK(bound_polynomial(100, 5, 0.1, p) ==
        doctest::Approx(8.0 * std::exp(-0.00625) + 110.0 * std::sqrt(41.0) * 1e-2));
  for (double n : {50.0, 1e3, 1e5, 1e8}) {
    for (double a : {1.0, 7.0, 20.0}) {
      for (double g : {0.01, 0.2, 1.5}) {
        const PolynomialErgodicity q{1.5, 2.5};
        CHECK(bound_polynomial(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(a), g,
                               q) ==
              doctest::Approx(direct_polynomial(n, a, g, 1.5, 2.5)).epsilon(1e-14));
      }
    }
  }
  CHECK_THROWS_AS(bound_polynomial(100, 0, 0.1, p), InvalidInput);
  CHECK_THROWS_AS(bound_polynomial(100, 51, 0.1, p), InvalidInput);
  CHECK_THROWS_AS(bound_polynomial(100, 5, 0.1, PolynomialErgodicity{0.0, 1.0}), InvalidInput);
}

TEST_CASE("uniform bound") {
  const UniformErgodicity u{kLambda, 1};
  const double g = example_gamma();
  const double b = bound_uniform(400000, 25000, g, u);
  CHECK(std::abs(b - 0.101) < 0.001);
  CHECK(b == doctest::Approx(0.10060385627698508).epsilon(1e-13));
  CHECK(bound_uniform(1000, 20, 0.3, UniformErgodicity{1.0, 3}) ==
        doctest::Approx(8.0 * std::exp(-20.0 * 0.09 / 8.0)).epsilon(1e-15));
  for (double n : {100.0, 5e3, 1e6}) {
    for (double a : {1.0, 10.0, 40.0}) {
      CHECK(bound_uniform(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(a), 0.05,
                          UniformErgodicity{0.3, 2}) ==
            doctest::Approx(direct_uniform(n, a, 0.05, 0.3, 2.0)).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(bound_uniform(100, 5, 0.1, UniformErgodicity{0.0, 1}), InvalidInput);
  CHECK_THROWS_AS(bound_uniform(100, 5, 0.1, UniformErgodicity{0.5, 0}), InvalidInput);
}

TEST_CASE("improved uniform bound") {
  const UniformErgodicity u{kLambda, 1};
  const double g = example_gamma();
  const double b = bound_uniform_improved(4700, g, u);
  CHECK(std::abs(b - 0.101) < 0.001);
  CHECK(b == doctest::Approx(0.10147817225686226).epsilon(1e-13));
  for (double n : {60.0, 500.0, 1e4, 1e7}) {
    CHECK(bound_uniform_improved(static_cast<std::uint64_t>(n), g, u) ==
          doctest::Approx(direct_improved(n, g, kLambda, 1.0)).epsilon(1e-14));
  }
  const double threshold = improved_bound_threshold(g, u);
  CHECK(threshold == doctest::Approx(2.0 / (kLambda * g)).epsilon(1e-15));
  try {
    bound_uniform_improved(55, g, u);
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(e.threshold() == doctest::Approx(threshold));
  }
}

TEST_CASE("property: bound monotonicity and nonnegativity") {
  const UniformErgodicity u{kLambda, 1};
  const double g = example_gamma();
  double prev = 2.0;
  for (std::uint64_t n = 56; n < 200000; n += 97) {
    const double b = bound_uniform_improved(n, g, u);
    CHECK(b >= 0.0);
    if (n > 2 * static_cast<std::uint64_t>(improved_bound_threshold(g, u))) CHECK(b < prev);
    prev = b;
  }
  for (double g1 = 0.01; g1 < 2.0; g1 *= 1.3) {
    const double g2 = g1 * 1.3;
    CHECK(bound_polynomial(1000, 10, g2, {2.0, 1.0}) < bound_polynomial(1000, 10, g1, {2.0, 1.0}));
    CHECK(bound_uniform(1000, 10, g2, {0.2, 1}) < bound_uniform(1000, 10, g1, {0.2, 1}));
  }
}

TEST_CASE("property: the improved bound is no larger than the uniform bound") {
  const double g = example_gamma();
  const BoundSpec uniform{BoundKind::uniform, g, UniformErgodicity{kLambda, 1}};
  for (double n = 1e3; n <= 1e6; n *= 1.5) {
    const auto ni = static_cast<std::uint64_t>(n);
    CHECK(evaluate_bound(uniform, ni) >= bound_uniform_improved(ni, g, {kLambda, 1}));
  }
}

TEST_CASE("a grid") {
  CHECK(a_grid(20) == std::vector<std::uint64_t>{10, 5, 2, 1});
  CHECK(a_grid(1).empty());
  CHECK(default_a(400000) == 25000);
  CHECK(default_a(5) == 1);
  CHECK(is_vacuous(1.2));
  CHECK(!is_vacuous(0.3));
}

TEST_CASE("bound kind names") {
  for (auto k : {BoundKind::polynomial, BoundKind::uniform, BoundKind::uniform_improved}) {
    CHECK(parse_bound_kind(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_bound_kind("geometric"), InvalidInput);
}

TEST_CASE("minimal sample size for the improved bound") {
  const double g = example_gamma();
  const BoundSpec spec{BoundKind::uniform_improved, g, UniformErgodicity{kLambda, 1}};
  const auto r = min_sample_size(spec, 0.101);
  // Exact inversion; 4700 is the smallest n for target 0.1015.
  CHECK(r.n == 4708);
  CHECK(r.bound <= 0.101);
  CHECK(evaluate_bound(spec, r.n - 1) > 0.101);
  CHECK(min_sample_size(spec, 0.1015).n == 4700);

  const double threshold = improved_bound_threshold(g, {kLambda, 1});
  CHECK(min_sample_size(spec, 2.0).n == static_cast<std::uint64_t>(std::floor(threshold)) + 1);
  CHECK(min_sample_size(spec, 5.0).n == static_cast<std::uint64_t>(std::floor(threshold)) + 1);
}

TEST_CASE("minimal sample size for a-dependent bounds") {
  const double g = example_gamma();
  const BoundSpec spec{BoundKind::uniform, g, UniformErgodicity{kLambda, 1}};
  const auto r = min_sample_size(spec, 0.101);
  CHECK(r.bound <= 0.101);
  CHECK(evaluate_bound(spec, r.n - 1) > 0.101);
  CHECK(r.n <= 400000);

  const BoundSpec poly{BoundKind::polynomial, 0.2, PolynomialErgodicity{3.0, 1.0}};
  const auto p = min_sample_size(poly, 0.5);
  CHECK(p.bound <= 0.5);
  CHECK(evaluate_bound(poly, p.n - 1) > 0.5);
}

TEST_CASE("unattainable targets") {
  const BoundSpec tiny{BoundKind::uniform, 1e-12, UniformErgodicity{0.5, 1}};
  CHECK_THROWS_AS(min_sample_size(tiny, 0.5), Unattainable);
  const BoundSpec far{BoundKind::uniform_improved, 1e-30, UniformErgodicity{0.5, 1}};
  CHECK_THROWS_AS(min_sample_size(far, 0.5), Unattainable);
  const BoundSpec ok{BoundKind::uniform_improved, 0.1, UniformErgodicity{0.5, 1}};
  CHECK_THROWS_AS(min_sample_size(ok, 0.0), InvalidInput);
}
