#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <variant>
#include <vector>

namespace mcmcq {

/// Total-variation rate psi(n) = n^(-m), scaled by E_pi M.
struct PolynomialErgodicity {
  double order = 0.0;   // m > 0
  double moment = 0.0;  // E_pi M > 0
};

/// Minorization P^{n0}(x, .) >= lambda phi(.), giving
/// ||P^n(x, .) - pi|| <= (1 - lambda)^floor(n / n0).
struct UniformErgodicity {
  double lambda = 0.0;     // in (0, 1]
  std::uint64_t n0 = 1;    // >= 1
};

using ErgodicityProfile = std::variant<PolynomialErgodicity, UniformErgodicity>;

/// Throws InvalidInput if the profile's parameters are out of range.
void validate(const ErgodicityProfile& profile);

/// Distribution function of the functional together with the quantile under
/// study.
struct TargetCdf {
  std::function<double(double)> cdf;
  double quantile = 0.0;

  /// t(df) distribution and its q-quantile.
  static TargetCdf student_t(double df, double q);
};

/// gamma(delta, eps) = min{F(xi + eps) - q, delta (q - F(xi - eps))}.
/// Throws InvalidInput unless the result is positive.
double gamma_eps(const TargetCdf& target, double q, double eps, double delta);

/// 8 exp(-a gamma^2 / 8) + 22 a (1 + 4/gamma)^(1/2) psi(floor(n / 2a)) E_pi M.
/// Requires 1 <= a <= n/2.
double bound_polynomial(std::uint64_t n, std::uint64_t a, double gamma,
                        const PolynomialErgodicity& profile);

/// 8 exp(-a gamma^2 / 8) + 22 a (1 + 4/gamma)^(1/2)
///   (1 - lambda)^floor(n / (2 a n0)). Requires 1 <= a <= n/2.
double bound_uniform(std::uint64_t n, std::uint64_t a, double gamma,
                     const UniformErgodicity& profile);

/// Smallest real n the improved uniform bound accepts is strictly above
/// 2 n0 / (lambda gamma).
double improved_bound_threshold(double gamma, const UniformErgodicity& profile);

/// 2 exp(-lambda^2 (n gamma - 2 n0 / lambda)^2 / (2 n n0^2)).
/// Throws DomainError (carrying the threshold) for n <= 2 n0 / (lambda gamma).
double bound_uniform_improved(std::uint64_t n, double gamma,
                              const UniformErgodicity& profile);

/// {floor(n/2), floor(n/4), ..., 1}.
std::vector<std::uint64_t> a_grid(std::uint64_t n);

/// a = floor(n / 16), at least 1.
std::uint64_t default_a(std::uint64_t n);

/// True when a probability bound carries no information (> 1).
inline bool is_vacuous(double bound) noexcept { return bound > 1.0; }

enum class BoundKind { polynomial, uniform, uniform_improved };

std::string_view to_string(BoundKind kind) noexcept;
BoundKind parse_bound_kind(std::string_view text);

/// Everything but n needed to evaluate a bound.
struct BoundSpec {
  BoundKind kind = BoundKind::uniform_improved;
  double gamma = 0.0;
  ErgodicityProfile profile = UniformErgodicity{};
};

/// Bound at n. For the two a-dependent kinds, the minimum over a_grid(n).
/// Throws DomainError when n is outside the bound's domain.
double evaluate_bound(const BoundSpec& spec, std::uint64_t n);

struct SampleSizeResult {
  std::uint64_t n = 0;
  double bound = 0.0;
};

/// Smallest n with evaluate_bound(spec, n) <= target, by exponential
/// bracketing and bisection. Throws Unattainable if no n <= 2^62 works.
SampleSizeResult min_sample_size(const BoundSpec& spec, double target);

}  // namespace mcmcq
