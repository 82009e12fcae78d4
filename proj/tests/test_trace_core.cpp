#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "mcmcq/distributions.hpp"
#include "mcmcq/error.hpp"
#include "mcmcq/kde.hpp"
#include "mcmcq/rng.hpp"
#include "mcmcq/samplers.hpp"
#include "mcmcq/trace.hpp"

using namespace mcmcq;

TEST_CASE("ScalarTrace rejects empty and non-finite input") {
  CHECK_THROWS_AS(ScalarTrace({}), InvalidInput);
  CHECK_THROWS_AS(ScalarTrace({1.0, std::numeric_limits<double>::quiet_NaN()}), InvalidInput);
  CHECK_THROWS_AS(ScalarTrace({std::numeric_limits<double>::infinity()}), InvalidInput);
  const ScalarTrace t({1.0, 2.0});
  CHECK(t.size() == 2);
}

TEST_CASE("QuantileSpec requires q strictly inside (0, 1)") {
  CHECK_THROWS_AS(QuantileSpec(0.0), InvalidInput);
  CHECK_THROWS_AS(QuantileSpec(1.0), InvalidInput);
  CHECK_THROWS_AS(QuantileSpec(-0.2), InvalidInput);
  CHECK(QuantileSpec(0.3).q() == 0.3);
}

TEST_CASE("method names round-trip") {
  for (Method m : {Method::bm, Method::sbm, Method::rs}) CHECK(parse_method(to_string(m)) == m);
  CHECK(parse_method("sbm") == Method::sbm);
  CHECK_THROWS_AS(parse_method("xyz"), InvalidInput);
}

TEST_CASE("quantile rank follows j - 1 < nq <= j") {
  CHECK(quantile_rank(3, 0.5) == 2);
  CHECK(quantile_rank(4, 0.5) == 2);
  CHECK(quantile_rank(100, 0.07) == 7);
  CHECK(quantile_rank(100, 0.071) == 8);
  CHECK(quantile_rank(10, 0.001) == 1);
  CHECK(quantile_rank(10, 0.999) == 10);
}

TEST_CASE("empirical quantile examples") {
  CHECK(empirical_quantile(ScalarTrace({3, 1, 2}), QuantileSpec(0.5)) == 2.0);
  const ScalarTrace constant(std::vector<double>(100, 7.5));
  for (double q : {0.01, 0.5, 0.99}) CHECK(empirical_quantile(constant, QuantileSpec(q)) == 7.5);
}

TEST_CASE("empirical 0.95 quantile of stationary t(4) draws") {
  Rng rng(42);
  std::vector<double> v(10000);
  for (auto& x : v) x = student_t_sample(4.0, rng);
  const double est = empirical_quantile(ScalarTrace(v), QuantileSpec(0.95));
  const double truth = oracle::t_quantile(4.0, 0.95);
  // SE of the sample quantile: sqrt(q(1-q)/n) / f(xi).
  const double f = boost::math::pdf(boost::math::students_t_distribution<double>(4.0), truth);
  const double se = std::sqrt(0.95 * 0.05 / 1e4) / f;
  CHECK(std::abs(est - truth) < 4.0 * se);
}

TEST_CASE("ecdf examples") {
  const ScalarTrace t({1, 2, 3});
  CHECK(ecdf(t, 2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(ecdf(t, 3.0) == 1.0);
  CHECK(ecdf(t, 0.5) == 0.0);
}

TEST_CASE("order statistic examples and range errors") {
  const ScalarTrace t({5, 1, 9});
  CHECK(order_statistic(t, 1) == 1.0);
  CHECK(order_statistic(t, 3) == 9.0);
  CHECK_THROWS_AS(order_statistic(t, 0), InvalidInput);
  CHECK_THROWS_AS(order_statistic(t, 4), InvalidInput);

  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-5, 5);
  std::vector<double> v(1000);
  for (auto& x : v) x = u(gen);
  auto sorted = v;
  std::sort(sorted.begin(), sorted.end());
  const ScalarTrace big(v);
  for (std::size_t j = 1; j <= 1000; j += 37) CHECK(order_statistic(big, j) == sorted[j - 1]);
}

TEST_CASE("property: quantile equals order statistic at the rank rule and Galois property") {
  std::mt19937_64 gen(11);
  for (int rep = 0; rep < 20; ++rep) {
    std::uniform_int_distribution<int> len(1, 300);
    const auto n = static_cast<std::size_t>(len(gen));
    std::vector<double> v(n);
    // Coarse rounding produces ties.
    std::normal_distribution<double> z;
    for (auto& x : v) x = std::round(z(gen) * 4.0) / 4.0;
    const ScalarTrace t(v);
    for (int k = 1; k <= 99; ++k) {
      const double q = k / 100.0;
      const double xi = empirical_quantile(t, QuantileSpec(q));
      CHECK(xi == oracle::sorted_quantile(v, q));
      CHECK(ecdf(t, xi) >= q - 1e-15);
      const double below = std::nextafter(xi, -std::numeric_limits<double>::infinity());
      CHECK(ecdf(t, below) < q);
    }
  }
}

TEST_CASE("property: point estimate is equivariant under increasing maps") {
  const auto v = oracle::random_walk(501, 5);
  std::vector<double> w(v.size());
  std::transform(v.begin(), v.end(), w.begin(), [](double x) { return std::exp(x); });
  for (double q : {0.1, 0.5, 0.93}) {
    CHECK(empirical_quantile(ScalarTrace(w), QuantileSpec(q)) ==
          std::exp(empirical_quantile(ScalarTrace(v), QuantileSpec(q))));
  }
}

TEST_CASE("property: consistency of the quantile estimator") {
  // Median over 21 replications of |xi_hat - xi| shrinks from n = 1e3 to n = 1e5.
  const double truth = oracle::t_quantile(30.0, 0.75);
  std::vector<double> small, large;
  for (std::uint64_t r = 0; r < 21; ++r) {
    Rng rng = Rng::stream(77, r);
    const auto run = run_metropolis_rw(30.0, 2.5, 100000, rng);
    std::vector<double> head(run.values.begin(), run.values.begin() + 1000);
    small.push_back(std::abs(empirical_quantile(ScalarTrace(head), QuantileSpec(0.75)) - truth));
    large.push_back(
        std::abs(empirical_quantile(ScalarTrace(run.values), QuantileSpec(0.75)) - truth));
  }
  std::nth_element(small.begin(), small.begin() + 10, small.end());
  std::nth_element(large.begin(), large.begin() + 10, large.end());
  CHECK(large[10] < small[10]);
}

TEST_CASE("incomplete beta and Student t agree with Boost") {
  for (double v : {1.0, 2.5, 3.0, 4.0, 6.0, 30.0, 200.0}) {
    const StudentT t(v);
    for (double x = -40.0; x <= 40.0; x += 0.73) {
      CHECK(t.cdf(x) == doctest::Approx(oracle::t_cdf(v, x)).epsilon(1e-12));
    }
    CHECK(t.cdf(0.0) == 0.5);
  }
  CHECK(incomplete_beta(2.0, 3.0, 0.0) == 0.0);
  CHECK(incomplete_beta(2.0, 3.0, 1.0) == 1.0);
  CHECK(incomplete_beta(2.0, 3.0, 0.4) ==
        doctest::Approx(boost::math::ibeta(2.0, 3.0, 0.4)).epsilon(1e-14));
}

TEST_CASE("t(4) distribution function matches the closed form") {
  for (double x = -20.0; x <= 20.0; x += 0.05) {
    CHECK(t_cdf(4.0, x) == doctest::Approx(oracle::t4_cdf(x)).epsilon(1e-13));
  }
  CHECK(t_cdf(4.0, 0.1) - 0.5 == doctest::Approx(0.0374224).epsilon(1e-5));
}

TEST_CASE("t quantile: reference values and inverse of the cdf") {
  CHECK(t_quantile(4.0, 0.95) == doctest::Approx(2.13185).epsilon(1e-5));
  for (double v : {3.0, 4.0, 6.0, 30.0}) {
    for (double p = 0.001; p < 1.0; p += 0.0173) {
      CHECK(t_quantile(v, p) == doctest::Approx(oracle::t_quantile(v, p)).epsilon(1e-10));
    }
    for (double x = -8.0; x <= 8.0; x += 0.25) {
      CHECK(t_quantile(v, t_cdf(v, x)) == doctest::Approx(x).epsilon(1e-9).scale(1.0));
    }
  }
  CHECK_THROWS_AS(t_quantile(4.0, 0.0), InvalidInput);
  CHECK_THROWS_AS(t_quantile(4.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(StudentT(0.0), InvalidInput);
}

TEST_CASE("t density integrates to one over [-50, 50]") {
  for (double v : {3.0, 4.0, 6.0, 30.0}) {
    // Composite Simpson with 200000 panels, minus the exact tail mass.
    const int m = 200000;
    const double a = -50.0, b = 50.0, h = (b - a) / m;
    double s = t_pdf(v, a) + t_pdf(v, b);
    for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * t_pdf(v, a + i * h);
    const double integral = s * h / 3.0;
    const double inside = oracle::t_cdf(v, 50.0) - oracle::t_cdf(v, -50.0);
    CHECK(integral == doctest::Approx(inside).epsilon(1e-9));
    CHECK(std::abs(integral - 1.0) < 1e-6 + (1.0 - inside));
  }
}

TEST_CASE("normal quantile") {
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-14));
  const boost::math::normal_distribution<double> nd;
  for (double p = 1e-6; p < 1.0; p += 0.0371) {
    CHECK(normal_quantile(p) == doctest::Approx(boost::math::quantile(nd, p)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(normal_quantile(1.0), InvalidInput);
}

TEST_CASE("kde examples") {
  CHECK(kde_at(ScalarTrace({0.0}), 0.0, KdeConfig::fixed(1.0)) ==
        doctest::Approx(0.3989423).epsilon(1e-7));
  const double a = 1.7;
  for (double h : {0.1, 1.0, 3.0}) {
    CHECK(kde_at(ScalarTrace({-a, a}), 0.0, KdeConfig::fixed(h)) ==
          kde_at(ScalarTrace({a, -a}), 0.0, KdeConfig::fixed(h)));
  }
  Rng rng(9);
  std::vector<double> z(100000);
  for (auto& x : z) x = rng.normal();
  CHECK(std::abs(kde_at(ScalarTrace(z), 0.0, KdeConfig::automatic()) - 0.3989) < 0.01);
}

TEST_CASE("kde errors on degenerate bandwidth") {
  const ScalarTrace constant(std::vector<double>(50, 2.0));
  CHECK_THROWS_AS(kde_at(constant, 2.0, KdeConfig::automatic()), DegenerateData);
  CHECK_THROWS_AS(KdeConfig::fixed(0.0), InvalidInput);
  CHECK_THROWS_AS(KdeConfig::fixed(-1.0), InvalidInput);
  CHECK_THROWS_AS(silverman_bandwidth(std::vector<double>{1.0}), DegenerateData);
}

TEST_CASE("silverman bandwidth uses sd when the IQR vanishes") {
  std::vector<double> v(20, 0.0);
  v[0] = 10.0;
  double mean = 0.5, ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / 19.0);
  CHECK(silverman_bandwidth(v) == doctest::Approx(0.9 * sd * std::pow(20.0, -0.2)));
}

TEST_CASE("property: kde scaling and permutation invariance") {
  const auto v = oracle::random_walk(400, 21);
  const double c = 3.25, h = 0.4, x = 0.3;
  std::vector<double> scaled(v.size());
  std::transform(v.begin(), v.end(), scaled.begin(), [&](double y) { return c * y; });
  CHECK(kde_at(scaled, c * x, c * h) == doctest::Approx(kde_at(v, x, h) / c).epsilon(1e-12));
  auto shuffled = v;
  std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937_64(4));
  CHECK(kde_at(shuffled, x, h) == doctest::Approx(kde_at(v, x, h)).epsilon(1e-13));
  for (double t = -10; t < 10; t += 0.5) CHECK(kde_at(v, t, h) >= 0.0);
}

TEST_CASE("rng streams are deterministic and distinct") {
  Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) CHECK(a() == b());
  std::set<std::uint64_t> firsts;
  for (std::uint64_t i = 0; i < 1000; ++i) firsts.insert(Rng::stream(7, i)());
  CHECK(firsts.size() == 1000);
  CHECK(derive_seed(7, 0) != derive_seed(8, 0));
  Rng u(5);
  for (int i = 0; i < 10000; ++i) {
    const double x = u.uniform();
    CHECK((x > 0.0 && x < 1.0));
  }
}

TEST_CASE("rng normal draws have unit variance") {
  Rng rng(31);
  double s = 0.0, ss = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s += z;
    ss += z * z;
  }
  CHECK(std::abs(s / n) < 4.0 / std::sqrt(n));
  CHECK(std::abs(ss / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
}
