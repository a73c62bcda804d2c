#pragma once

#include "ordcl/estimation.hpp"

namespace ordcl::detail {

/// Everything that depends on delta only through the linear predictors.
struct Evaluation {
  Probabilities p;
  Matrix g;       // n x q, g(eta_rs)
  Matrix gprime;  // n x q, g'(eta_rs)
};

Evaluation evaluate(const Model& model, const ParamVector& delta);

double log_likelihood(const Evaluation& ev, const Matrix& counts);

/// sum_r Z_r^T k_r with k_rs = g_rs (w_rs / pi_rs - w_r,s+1 / pi_r,s+1).
Vector score_kernel(const Model& model, const Evaluation& ev, const Matrix& weights);

Matrix fisher_info(const Model& model, const Evaluation& ev, const Vector& totals);

AdjustmentTerms adjustment_terms(const Model& model, const Evaluation& ev,
                                 const Vector& totals, const Matrix& fisher_inverse);

/// y + a + lambda pi, row by row.
Matrix adjusted_counts(const Evaluation& ev, const Matrix& counts, const AdjustmentTerms& terms);

}  // namespace ordcl::detail
