#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ordcl/model.hpp"

namespace ordcl {

/// Stopping rules and boundary diagnostics for the fitting routines.
struct FitControl {
  double grad_tol = 1e-10;  // on max |U_t| (ML) or max |U*_t| (RB)
  int max_iter = 100;
  int max_halvings = 20;
  double divergence_se_threshold = 200.0;
  double divergence_est_threshold = 100.0;
  /// Extra Fisher scoring steps taken past convergence when some standard
  /// error exceeds divergence_se_threshold; parameters that keep drifting by
  /// more than divergence_drift_threshold are labelled infinite.
  int second_pass_iterations = 10;
  double divergence_drift_threshold = 1.0;
};

enum class Method { ml, rb, bc };

std::string to_string(Method method);

enum class BoundaryFlag { finite, diverging, tied_cutpoint, minus_infinity, plus_infinity };

std::string to_string(BoundaryFlag flag);

struct FitResult {
  Method method = Method::ml;
  LinkFamily link = kLogit;
  std::vector<std::string> names;
  std::vector<ParamRole> roles;

  ParamVector estimates;
  Matrix vcov;  // inverse Fisher information at the estimates
  double loglik = 0.0;
  int iterations = 0;
  bool converged = false;
  /// max |U| (or |U*|) at the final estimates, in the fitted parameterisation.
  double max_abs_score = 0.0;
  std::vector<double> trace;  // max |U| per iteration
  std::vector<BoundaryFlag> flags;
  /// Movement of each parameter during the second diagnostic pass, when run.
  std::optional<Vector> second_pass_drift;
  /// n x k fitted category probabilities.
  Matrix fitted;

  Vector standard_errors() const;
  bool on_boundary() const;
  bool is_finite(int t) const { return flags.empty() || flags[t] == BoundaryFlag::finite; }
};

/// c (n x (k+1), zero first and last columns) and a_rs = c_rs - c_r,s-1 (n x k).
struct AdjustmentTerms {
  Matrix c;
  Matrix a;
};

/// Multinomial log-likelihood sum_r sum_s y_rs log pi_rs.
double log_likelihood(const Model& model, const OrdinalData& data, const ParamVector& delta);

/// U_t = sum_r sum_s g_rs (y_rs / pi_rs - y_r,s+1 / pi_r,s+1) z_rst.
Vector score(const Model& model, const OrdinalData& data, const ParamVector& delta);

/// Expected information sum_r Z_r^T D_r Sigma_r^{-1} D_r^T Z_r.
Matrix fisher_info(const Model& model, const OrdinalData& data, const ParamVector& delta);

/// c_rs = m_r g'_rs v_rss / 2 with v_rss the diagonal of Z_r F^{-1} Z_r^T.
AdjustmentTerms adjustment_terms(const Model& model, const OrdinalData& data,
                                 const ParamVector& delta);

/// The bias-reducing adjustment A(delta) alone.
Vector score_adjustment(const Model& model, const OrdinalData& data,
                        const ParamVector& delta);

/// U*(delta) = U(delta) + A(delta).
Vector adjusted_score(const Model& model, const OrdinalData& data, const ParamVector& delta);

/// Non-negative pseudo-counts whose ordinary score equals U*(delta).
///
/// Row r gets y_rs + a_rs + lambda_r pi_rs. The shift leaves every score
/// kernel unchanged since lambda pi_s / pi_s - lambda pi_s+1 / pi_s+1 = 0.
/// lambda_r is max(1, max_s -a_rs / pi_rs), the smallest shift of at least
/// one that keeps every pseudo-count non-negative; for cumulative logits it
/// adds exactly 1/2 to the two end categories. Rows with a_r = 0 are not
/// shifted.
Matrix adjusted_counts(const Model& model, const OrdinalData& data, const ParamVector& delta);

/// b(delta) = -F^{-1}(delta) A(delta).
Vector first_order_bias(const Model& model, const OrdinalData& data, const ParamVector& delta);

/// Finite, order-respecting start: pooled 1/2-smoothed cumulative
/// proportions mapped through G^{-1}, projected onto the design.
ParamVector starting_values(const Model& model, const OrdinalData& data);

/// Fits on the given design as-is (no category merging).
FitResult fit_ml(const Model& model, const OrdinalData& data, const FitControl& control = {});
FitResult fit_rb(const Model& model, const OrdinalData& data, const FitControl& control = {});
FitResult fit_bc(const Model& model, const OrdinalData& data, const FitControl& control = {});

/// delta_ML - b(delta_ML) from an existing ML fit on the same model and data.
/// Throws UndefinedEstimatorError when the ML fit is on the boundary.
FitResult bias_correct(const FitResult& ml, const Model& model, const OrdinalData& data,
                       const FitControl& control = {});

/// Fits from a model specification. For proportional specifications, empty
/// categories are merged before fitting (all of them for ML and BC, interior
/// runs only for RB) and the result is reported in the original category
/// layout with tied or infinite cutpoints.
FitResult fit_ml(const ModelSpec& spec, const OrdinalData& data, const FitControl& control = {});
FitResult fit_rb(const ModelSpec& spec, const OrdinalData& data, const FitControl& control = {});
FitResult fit_bc(const ModelSpec& spec, const OrdinalData& data, const FitControl& control = {});

/// Plain ML after adding `constant` to every count. Kept to show why
/// constant adjustments are not recommended: the estimate depends on how
/// the data are grouped.
FitResult fit_constant_adjusted(const ModelSpec& spec, const OrdinalData& data, double constant,
                                const FitControl& control = {});

/// delta(i+1) = delta(i) + F^{-1} U - b, all evaluated at delta(i). Starting
/// from the ML estimate, one step gives the bias-corrected estimate.
ParamVector iterate_bias_correction(const Model& model, const OrdinalData& data,
                                    ParamVector start, int iterations);

/// Per-parameter boundary classification of a fit.
std::vector<BoundaryFlag> detect_boundary(const FitResult& fit, const OrdinalData& data,
                                          const FitControl& control = {});

}  // namespace ordcl
