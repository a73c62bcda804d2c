#include "evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ordcl/errors.hpp"

namespace ordcl::detail {

Evaluation evaluate(const Model& model, const ParamVector& delta) {
  Evaluation ev;
  ev.p = probabilities(model, delta);
  const Eigen::Index n = ev.p.eta.rows();
  const Eigen::Index q = ev.p.eta.cols();
  ev.g.resize(n, q);
  ev.gprime.resize(n, q);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index s = 0; s < q; ++s) {
      ev.g(r, s) = density(model.link, ev.p.eta(r, s));
      ev.gprime(r, s) = density_deriv(model.link, ev.p.eta(r, s));
    }
  }
  return ev;
}

double log_likelihood(const Evaluation& ev, const Matrix& counts) {
  double total = 0.0;
  for (Eigen::Index r = 0; r < counts.rows(); ++r) {
    for (Eigen::Index s = 0; s < counts.cols(); ++s) {
      if (counts(r, s) != 0.0) total += counts(r, s) * std::log(ev.p.pi(r, s));
    }
  }
  return total;
}

Vector score_kernel(const Model& model, const Evaluation& ev, const Matrix& weights) {
  const auto& design = model.design;
  const int q = design.q();
  Vector u = Vector::Zero(design.d());
  Vector kernel(q);
  for (int r = 0; r < design.n(); ++r) {
    for (int s = 0; s < q; ++s) {
      kernel[s] = ev.g(r, s) *
                  (weights(r, s) / ev.p.pi(r, s) - weights(r, s + 1) / ev.p.pi(r, s + 1));
    }
    u.noalias() += design.blocks[r].transpose() * kernel;
  }
  return u;
}

Matrix fisher_info(const Model& model, const Evaluation& ev, const Vector& totals) {
  const auto& design = model.design;
  const int q = design.q();
  Matrix f = Matrix::Zero(design.d(), design.d());
  Matrix w(q, q);
  for (int r = 0; r < design.n(); ++r) {
    const double m = totals[r];
    if (m == 0.0) continue;
    // D_r Sigma_r^{-1} D_r^T is tridiagonal in the cumulative parameterisation.
    w.setZero();
    for (int s = 0; s < q; ++s) {
      const double gs = ev.g(r, s);
      w(s, s) = m * gs * gs * (1.0 / ev.p.pi(r, s) + 1.0 / ev.p.pi(r, s + 1));
      if (s + 1 < q) {
        const double off = -m * gs * ev.g(r, s + 1) / ev.p.pi(r, s + 1);
        w(s, s + 1) = off;
        w(s + 1, s) = off;
      }
    }
    if (!w.allFinite()) {
      throw NumericalError("multinomial variance is singular at row " + std::to_string(r + 1),
                           r);
    }
    const Matrix& z = design.blocks[r];
    f.noalias() += z.transpose() * w * z;
  }
  return 0.5 * (f + f.transpose());
}

AdjustmentTerms adjustment_terms(const Model& model, const Evaluation& ev,
                                 const Vector& totals, const Matrix& fisher_inverse) {
  const auto& design = model.design;
  const int n = design.n();
  const int q = design.q();
  AdjustmentTerms terms;
  terms.c = Matrix::Zero(n, q + 2);  // c_r0 .. c_rk
  terms.a.resize(n, q + 1);
  for (int r = 0; r < n; ++r) {
    const Matrix& z = design.blocks[r];
    for (int s = 0; s < q; ++s) {
      const double v = z.row(s) * fisher_inverse * z.row(s).transpose();
      terms.c(r, s + 1) = 0.5 * totals[r] * ev.gprime(r, s) * v;
    }
    for (int s = 0; s <= q; ++s) terms.a(r, s) = terms.c(r, s + 1) - terms.c(r, s);
  }
  return terms;
}

Matrix adjusted_counts(const Evaluation& ev, const Matrix& counts, const AdjustmentTerms& terms) {
  Matrix out = counts + terms.a;
  for (Eigen::Index r = 0; r < counts.rows(); ++r) {
    // Rows without any adjustment are left as observed.
    if (terms.a.row(r).cwiseAbs().maxCoeff() == 0.0) continue;
    double lambda = 1.0;
    for (Eigen::Index s = 0; s < counts.cols(); ++s) {
      lambda = std::max(lambda, -terms.a(r, s) / ev.p.pi(r, s));
    }
    out.row(r) += lambda * ev.p.pi.row(r);
    // Round-off can leave the binding entry a hair below zero.
    out.row(r) = out.row(r).cwiseMax(0.0);
  }
  return out;
}

}  // namespace ordcl::detail
