#pragma once

namespace mcmcq {

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

double normal_pdf(double x) noexcept;
double normal_cdf(double x) noexcept;
/// Inverse standard Normal CDF. Throws InvalidInput for p outside (0, 1).
double normal_quantile(double p);

/// Student's t distribution with `df` degrees of freedom (df > 0).
class StudentT {
 public:
  explicit StudentT(double df);

  double df() const noexcept { return df_; }
  double pdf(double x) const noexcept;
  double log_pdf(double x) const noexcept;
  double cdf(double x) const noexcept;
  /// Throws InvalidInput for p outside (0, 1).
  double quantile(double p) const;

 private:
  double df_;
  double log_norm_;
};

double t_pdf(double df, double x);
double t_cdf(double df, double x);
double t_quantile(double df, double p);

}  // namespace mcmcq
