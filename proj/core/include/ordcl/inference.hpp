#pragma once

#include <vector>

#include "ordcl/estimation.hpp"

namespace ordcl {

struct WaldRow {
  double estimate = 0.0;
  double se = 0.0;
  double z = 0.0;
  double p_value = 1.0;  // two-sided normal tail
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  bool contains(double value) const { return lower <= value && value <= upper; }
};

struct TestResult {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
};

/// Rows of linear contrasts over the full parameter vector.
class ContrastMatrix {
 public:
  ContrastMatrix() = default;
  /// Throws Error when L does not have full row rank.
  explicit ContrastMatrix(Matrix L);

  /// Contrasts written over a subset of parameters, zero-padded to width d.
  static ContrastMatrix over(const std::vector<int>& columns, const Matrix& block, int d);

  /// The q-1 contrasts beta_s - beta_q of the category-specific slopes of
  /// covariate column `column`; testing them is a test of proportionality.
  static ContrastMatrix proportionality(const FitResult& fit, int column);

  const Matrix& matrix() const { return L_; }
  int rows() const { return static_cast<int>(L_.rows()); }

 private:
  Matrix L_;
};

/// Upper tail of chi-square with df degrees of freedom.
double chi2_upper_tail(double statistic, int df);

/// Standard normal quantile.
double normal_quantile(double p);

std::vector<WaldRow> wald_z(const FitResult& fit);

/// estimate -+ z_{(1+level)/2} se. Parameters that are not finite in an ML
/// or BC fit get (-inf, inf).
std::vector<Interval> wald_ci(const FitResult& fit, double level);

/// W = (L delta)^T (L F^{-1} L^T)^{-1} (L delta) on rows(L) degrees of freedom.
TestResult wald_contrast_test(const FitResult& fit, const ContrastMatrix& L);

/// Places restricted estimates into the larger parameter space:
/// out[t] = restricted[source[t]].
ParamVector embed(const ParamVector& restricted, const std::vector<int>& source);

/// Index map that embeds a fit with a common slope for `column` into the
/// design where that column has category-specific slopes.
std::vector<int> proportional_embedding(const FitResult& restricted, const FitResult& large,
                                        int column);

/// U*(d)^T F^{-1}(d) U*(d) at the embedded restricted estimate d.
/// Throws SingularInformationError when F(d) cannot be inverted.
TestResult adjusted_score_test(const Model& large, const OrdinalData& data,
                               const ParamVector& delta_restricted, int df);

/// log{(R_s + 1/2) / (m - R_s + 1/2)} for the cumulative counts R_s.
Vector empirical_logit(const Vector& counts);

/// Difference of empirical logits of two binomial rows.
double gen_emp_logit_2xk_binary(double y11, double m1, double y21, double m2);

}  // namespace ordcl
