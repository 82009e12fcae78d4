#include "mcmcq/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mcmcq/distributions.hpp"
#include "mcmcq/error.hpp"

namespace mcmcq {
namespace {

void check_a(std::uint64_t n, std::uint64_t a) {
  if (a < 1 || a > n / 2) {
    throw InvalidInput("a = " + std::to_string(a) + " must lie in [1, n/2] for n = " +
                       std::to_string(n));
  }
}

void check_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InvalidInput("gamma must be positive and finite");
  }
}

double exponential_term(std::uint64_t a, double gamma) {
  return 8.0 * std::exp(-static_cast<double>(a) * gamma * gamma / 8.0);
}

double mixing_prefactor(std::uint64_t a, double gamma) {
  return 22.0 * static_cast<double>(a) * std::sqrt(1.0 + 4.0 / gamma);
}

}  // namespace

void validate(const ErgodicityProfile& profile) {
  if (const auto* poly = std::get_if<PolynomialErgodicity>(&profile)) {
    if (!(poly->order > 0.0)) throw InvalidInput("polynomial order m must be positive");
    if (!(poly->moment > 0.0)) throw InvalidInput("E_pi M must be positive");
    return;
  }
  const auto& unif = std::get<UniformErgodicity>(profile);
  if (!(unif.lambda > 0.0 && unif.lambda <= 1.0)) {
    throw InvalidInput("lambda must lie in (0, 1]");
  }
  if (unif.n0 < 1) throw InvalidInput("n0 must be at least 1");
}

TargetCdf TargetCdf::student_t(double df, double q) {
  const StudentT dist(df);
  return TargetCdf{[dist](double x) { return dist.cdf(x); }, dist.quantile(q)};
}

double gamma_eps(const TargetCdf& target, double q, double eps, double delta) {
  if (!(q > 0.0 && q < 1.0)) throw InvalidInput("q must lie in (0, 1)");
  if (!(eps > 0.0)) throw InvalidInput("epsilon must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("delta must lie in (0, 1)");
  const double upper = target.cdf(target.quantile + eps) - q;
  const double lower = delta * (q - target.cdf(target.quantile - eps));
  const double gamma = std::min(upper, lower);
  if (!(gamma > 0.0)) {
    throw InvalidInput("gamma(delta, eps) is not positive; eps is too small for "
                       "a flat region of the distribution function");
  }
  return gamma;
}

double bound_polynomial(std::uint64_t n, std::uint64_t a, double gamma,
                        const PolynomialErgodicity& profile) {
  check_a(n, a);
  check_gamma(gamma);
  validate(profile);
  const auto lag = static_cast<double>(n / (2 * a));
  const double psi = std::pow(lag, -profile.order);
  return exponential_term(a, gamma) +
         mixing_prefactor(a, gamma) * psi * profile.moment;
}

double bound_uniform(std::uint64_t n, std::uint64_t a, double gamma,
                     const UniformErgodicity& profile) {
  check_a(n, a);
  check_gamma(gamma);
  validate(profile);
  const auto exponent = static_cast<double>(n / (2 * a * profile.n0));
  const double tv = std::pow(1.0 - profile.lambda, exponent);
  return exponential_term(a, gamma) + mixing_prefactor(a, gamma) * tv;
}

double improved_bound_threshold(double gamma, const UniformErgodicity& profile) {
  check_gamma(gamma);
  validate(profile);
  return 2.0 * static_cast<double>(profile.n0) / (profile.lambda * gamma);
}

double bound_uniform_improved(std::uint64_t n, double gamma,
                              const UniformErgodicity& profile) {
  const double threshold = improved_bound_threshold(gamma, profile);
  const auto nd = static_cast<double>(n);
  if (!(nd > threshold)) {
    throw DomainError("n must exceed 2 n0 / (lambda gamma) = " +
                          std::to_string(threshold),
                      threshold);
  }
  const double n0 = static_cast<double>(profile.n0);
  const double gap = nd * gamma - 2.0 * n0 / profile.lambda;
  const double lambda2 = profile.lambda * profile.lambda;
  return 2.0 * std::exp(-lambda2 * gap * gap / (2.0 * nd * n0 * n0));
}

std::vector<std::uint64_t> a_grid(std::uint64_t n) {
  std::vector<std::uint64_t> grid;
  for (std::uint64_t a = n / 2; a >= 1; a /= 2) grid.push_back(a);
  return grid;
}

std::uint64_t default_a(std::uint64_t n) { return std::max<std::uint64_t>(1, n / 16); }

std::string_view to_string(BoundKind kind) noexcept {
  switch (kind) {
    case BoundKind::polynomial: return "polynomial";
    case BoundKind::uniform: return "uniform";
    case BoundKind::uniform_improved: return "improved";
  }
  return "?";
}

BoundKind parse_bound_kind(std::string_view text) {
  if (text == "polynomial") return BoundKind::polynomial;
  if (text == "uniform") return BoundKind::uniform;
  if (text == "improved" || text == "uniform-improved") return BoundKind::uniform_improved;
  throw InvalidInput("unknown bound kind '" + std::string(text) + "'");
}

double evaluate_bound(const BoundSpec& spec, std::uint64_t n) {
  if (spec.kind == BoundKind::uniform_improved) {
    const auto* unif = std::get_if<UniformErgodicity>(&spec.profile);
    if (!unif) throw InvalidInput("improved bound needs a uniform ergodicity profile");
    return bound_uniform_improved(n, spec.gamma, *unif);
  }
  if (n < 2) throw DomainError("a-dependent bounds need n >= 2", 1.0);
  double best = std::numeric_limits<double>::infinity();
  for (const std::uint64_t a : a_grid(n)) {
    double value;
    if (spec.kind == BoundKind::polynomial) {
      const auto* poly = std::get_if<PolynomialErgodicity>(&spec.profile);
      if (!poly) throw InvalidInput("polynomial bound needs a polynomial profile");
      value = bound_polynomial(n, a, spec.gamma, *poly);
    } else {
      const auto* unif = std::get_if<UniformErgodicity>(&spec.profile);
      if (!unif) throw InvalidInput("uniform bound needs a uniform ergodicity profile");
      value = bound_uniform(n, a, spec.gamma, *unif);
    }
    best = std::min(best, value);
  }
  return best;
}

SampleSizeResult min_sample_size(const BoundSpec& spec, double target) {
  if (!(target > 0.0)) throw InvalidInput("target probability must be positive");
  check_gamma(spec.gamma);
  validate(spec.profile);

  const auto meets = [&](std::uint64_t n) {
    try {
      return evaluate_bound(spec, n) <= target;
    } catch (const DomainError&) {
      return false;
    }
  };

  std::uint64_t start = 2;
  if (spec.kind == BoundKind::uniform_improved) {
    const double threshold =
        improved_bound_threshold(spec.gamma, std::get<UniformErgodicity>(spec.profile));
    if (threshold >= 0x1.0p62) throw Unattainable("validity threshold exceeds 2^62");
    start = static_cast<std::uint64_t>(std::floor(threshold)) + 1;
  }
  if (meets(start)) return {start, evaluate_bound(spec, start)};

  constexpr std::uint64_t limit = std::uint64_t{1} << 62;
  std::uint64_t lo = start;
  std::uint64_t hi = start;
  while (true) {
    if (hi >= limit) {
      throw Unattainable("no sample size up to 2^62 meets the target");
    }
    lo = hi;
    hi = std::min(limit, hi * 2);
    if (meets(hi)) break;
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (meets(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {hi, evaluate_bound(spec, hi)};
}

}  // namespace mcmcq
