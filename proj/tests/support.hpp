#pragma once

// Independent reference implementations used as test oracles. Nothing here
// calls into the library's likelihood code: links, probabilities, scores,
// information and adjustments are recomputed from first principles.

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ordcl/estimation.hpp"
#include "ordcl/model.hpp"

namespace oracle {

using ordcl::Matrix;
using ordcl::Vector;

inline double normal_cdf_series(double x) {
  // Taylor series of erf, summed in long double; accurate for |x| < 6.
  const long double z = static_cast<long double>(x) / std::numbers::sqrt2_v<long double>;
  long double term = z;
  long double sum = z;
  for (int n = 1; n < 200; ++n) {
    term *= -z * z / n;
    const long double add = term / (2 * n + 1);
    sum += add;
    if (std::fabs(add) < 1e-22L) break;
  }
  const long double erf = 2.0L / std::sqrt(std::numbers::pi_v<long double>) * sum;
  return static_cast<double>(0.5L * (1.0L + erf));
}

inline double G(ordcl::LinkKind k, double e) {
  switch (k) {
    case ordcl::LinkKind::logit: return 1.0 / (1.0 + std::exp(-e));
    case ordcl::LinkKind::probit: return normal_cdf_series(e);
    case ordcl::LinkKind::cloglog: return 1.0 - std::exp(-std::exp(e));
  }
  return 0.0;
}

inline double g(ordcl::LinkKind k, double e) {
  switch (k) {
    case ordcl::LinkKind::logit: {
      const double p = G(k, e);
      return p * (1.0 - p);
    }
    case ordcl::LinkKind::probit: return std::exp(-0.5 * e * e) / std::sqrt(2.0 * std::numbers::pi);
    case ordcl::LinkKind::cloglog: return std::exp(e - std::exp(e));
  }
  return 0.0;
}

inline double gp(ordcl::LinkKind k, double e) {
  switch (k) {
    case ordcl::LinkKind::logit: {
      const double p = G(k, e);
      return p * (1.0 - p) * (1.0 - 2.0 * p);
    }
    case ordcl::LinkKind::probit: return -e * g(k, e);
    case ordcl::LinkKind::cloglog: return g(k, e) * (1.0 - std::exp(e));
  }
  return 0.0;
}

// Per-row quantities of a cumulative link model, from Z_r and delta.
struct Row {
  Vector eta, gamma, dens, dens1;  // length q
  Vector pi;                        // length k
  Matrix dpi;                       // k x d: gradient of pi_s wrt delta
  std::vector<Matrix> d2pi;         // k of d x d
  Matrix jac;                       // k x q: d pi_s / d eta_u
  std::vector<Matrix> hess_eta;     // k of q x q: d2 pi_s / d eta d eta
};

inline Row row(ordcl::LinkKind link, const Matrix& Z, const Vector& delta) {
  const int q = static_cast<int>(Z.rows());
  const int k = q + 1;
  const int d = static_cast<int>(Z.cols());
  Row r;
  r.eta = Z * delta;
  r.gamma.resize(q);
  r.dens.resize(q);
  r.dens1.resize(q);
  for (int s = 0; s < q; ++s) {
    r.gamma[s] = G(link, r.eta[s]);
    r.dens[s] = g(link, r.eta[s]);
    r.dens1[s] = gp(link, r.eta[s]);
  }
  r.pi.resize(k);
  r.dpi = Matrix::Zero(k, d);
  r.d2pi.assign(k, Matrix::Zero(d, d));
  r.jac = Matrix::Zero(k, q);
  r.hess_eta.assign(k, Matrix::Zero(q, q));
  for (int s = 0; s < k; ++s) {
    const double upper = s < q ? r.gamma[s] : 1.0;
    const double lower = s > 0 ? r.gamma[s - 1] : 0.0;
    r.pi[s] = upper - lower;
    if (s < q) {
      r.dpi.row(s) += r.dens[s] * Z.row(s);
      r.d2pi[s] += r.dens1[s] * Z.row(s).transpose() * Z.row(s);
      r.jac(s, s) += r.dens[s];
      r.hess_eta[s](s, s) += r.dens1[s];
    }
    if (s > 0) {
      r.dpi.row(s) -= r.dens[s - 1] * Z.row(s - 1);
      r.d2pi[s] -= r.dens1[s - 1] * Z.row(s - 1).transpose() * Z.row(s - 1);
      r.jac(s, s - 1) -= r.dens[s - 1];
      r.hess_eta[s](s - 1, s - 1) -= r.dens1[s - 1];
    }
  }
  return r;
}

inline double loglik(ordcl::LinkKind link, const std::vector<Matrix>& Z, const Matrix& y,
                     const Vector& delta) {
  double out = 0.0;
  for (std::size_t i = 0; i < Z.size(); ++i) {
    const Row r = row(link, Z[i], delta);
    for (int s = 0; s < y.cols(); ++s) {
      if (y(i, s) > 0) out += y(i, s) * std::log(r.pi[s]);
    }
  }
  return out;
}

inline Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x,
                          double h = 1e-5) {
  Vector out(x.size());
  for (Eigen::Index t = 0; t < x.size(); ++t) {
    Vector a = x, b = x;
    a[t] += h;
    b[t] -= h;
    out[t] = (f(a) - f(b)) / (2.0 * h);
  }
  return out;
}

// All compositions of m into k non-negative parts.
inline std::vector<std::vector<int>> compositions(int m, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> c(k, 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == k - 1) {
      c[pos] = left;
      out.push_back(c);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      c[pos] = v;
      rec(pos + 1, left - v);
    }
  };
  rec(0, m);
  return out;
}

inline double multinomial_pmf(const std::vector<int>& y, const Vector& pi) {
  int m = 0;
  double logp = 0.0;
  for (std::size_t s = 0; s < y.size(); ++s) {
    m += y[s];
    logp -= std::lgamma(y[s] + 1.0);
    if (y[s] > 0) logp += y[s] * std::log(pi[static_cast<Eigen::Index>(s)]);
  }
  return std::exp(logp + std::lgamma(m + 1.0));
}

// Score and Hessian of one row's log-likelihood for counts y.
inline void row_derivatives(const Row& r, const std::vector<int>& y, Vector& U, Matrix& H) {
  const Eigen::Index d = r.dpi.cols();
  U = Vector::Zero(d);
  H = Matrix::Zero(d, d);
  for (std::size_t s = 0; s < y.size(); ++s) {
    if (y[s] == 0) continue;
    const auto S = static_cast<Eigen::Index>(s);
    const Vector grad = r.dpi.row(S).transpose() / r.pi[S];
    U += y[s] * grad;
    H += y[s] * (r.d2pi[s] / r.pi[S] - grad * grad.transpose());
  }
}

// Expected information as the probability-weighted average of minus the
// Hessian over every outcome of every row.
inline Matrix fisher_by_enumeration(ordcl::LinkKind link, const std::vector<Matrix>& Z,
                                    const std::vector<int>& m, const Vector& delta) {
  const Eigen::Index d = delta.size();
  Matrix F = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < Z.size(); ++i) {
    const Row r = row(link, Z[i], delta);
    for (const auto& y : compositions(m[i], static_cast<int>(r.pi.size()))) {
      Vector U;
      Matrix H;
      row_derivatives(r, y, U, H);
      F -= multinomial_pmf(y, r.pi) * H;
    }
  }
  return F;
}

// A_t = 1/2 sum_r m_r sum_s tr[V_r {(D_r Sigma_r^-1)_s (x) 1_q} d2pi_r/deta2] z_rst,
// written out with explicit Hessian blocks of pi_r (first q categories).
inline Vector adjustment_by_trace(ordcl::LinkKind link, const std::vector<Matrix>& Z,
                                  const std::vector<int>& m, const Vector& delta) {
  const Matrix Finv = fisher_by_enumeration(link, Z, m, delta).inverse();
  const Eigen::Index d = delta.size();
  Vector A = Vector::Zero(d);
  for (std::size_t i = 0; i < Z.size(); ++i) {
    const Row r = row(link, Z[i], delta);
    const Eigen::Index q = Z[i].rows();
    const double mr = m[i];
    const Matrix V = Z[i] * Finv * Z[i].transpose();
    // D_r^T = m_r d pi_r / d eta_r^T restricted to the first q categories.
    const Matrix Dt = mr * r.jac.topRows(q);
    Matrix Sigma(q, q);
    for (Eigen::Index s = 0; s < q; ++s) {
      for (Eigen::Index u = 0; u < q; ++u) {
        Sigma(s, u) = s == u ? mr * r.pi[s] * (1 - r.pi[s]) : -mr * r.pi[s] * r.pi[u];
      }
    }
    const Matrix DSinv = Dt.transpose() * Sigma.inverse();
    // Stacked q^2 x q Hessian blocks.
    Matrix stacked(q * q, q);
    for (Eigen::Index u = 0; u < q; ++u) stacked.block(u * q, 0, q, q) = r.hess_eta[u];
    for (Eigen::Index s = 0; s < q; ++s) {
      Matrix kron = Matrix::Zero(q, q * q);
      for (Eigen::Index u = 0; u < q; ++u) {
        kron.block(0, u * q, q, q) = DSinv(s, u) * Matrix::Identity(q, q);
      }
      const double tr = (V * kron * stacked).trace();
      A += 0.5 * mr * tr * Z[i].row(s).transpose();
    }
  }
  return A;
}

// Firth's general form A_t = 1/2 tr{F^-1 (P_t + Q_t)} with P_t = E[U U^T U_t]
// and Q_t = E[H U_t], expectations by enumeration (rows are independent and
// have zero-mean scores, so only within-row moments survive).
inline Vector adjustment_by_moments(ordcl::LinkKind link, const std::vector<Matrix>& Z,
                                    const std::vector<int>& m, const Vector& delta) {
  const Eigen::Index d = delta.size();
  const Matrix Finv = fisher_by_enumeration(link, Z, m, delta).inverse();
  std::vector<Matrix> PQ(static_cast<std::size_t>(d), Matrix::Zero(d, d));
  for (std::size_t i = 0; i < Z.size(); ++i) {
    const Row r = row(link, Z[i], delta);
    for (const auto& y : compositions(m[i], static_cast<int>(r.pi.size()))) {
      Vector U;
      Matrix H;
      row_derivatives(r, y, U, H);
      const double p = multinomial_pmf(y, r.pi);
      for (Eigen::Index t = 0; t < d; ++t) {
        PQ[static_cast<std::size_t>(t)] += p * U[t] * (U * U.transpose() + H);
      }
    }
  }
  Vector A(d);
  for (Eigen::Index t = 0; t < d; ++t) A[t] = 0.5 * (Finv * PQ[static_cast<std::size_t>(t)]).trace();
  return A;
}

// Firth-penalised logistic regression with success counts y out of m: the
// modified score sum_r (y_r + h_r (1/2 - mu_r) - m_r mu_r) x_r = 0, solved by
// Newton steps with the unmodified information.
inline Vector firth_logistic(const Matrix& X, const Vector& y, const Vector& m, Vector beta) {
  for (int it = 0; it < 200; ++it) {
    const Vector eta = X * beta;
    Vector mu(eta.size()), w(eta.size());
    for (Eigen::Index r = 0; r < eta.size(); ++r) {
      mu[r] = 1.0 / (1.0 + std::exp(-eta[r]));
      w[r] = m[r] * mu[r] * (1.0 - mu[r]);
    }
    const Matrix F = X.transpose() * w.asDiagonal() * X;
    const Matrix Finv = F.inverse();
    Vector U = Vector::Zero(beta.size());
    for (Eigen::Index r = 0; r < eta.size(); ++r) {
      const double h = w[r] * X.row(r) * Finv * X.row(r).transpose();
      U += (y[r] + h * (0.5 - mu[r]) - m[r] * mu[r]) * X.row(r).transpose();
    }
    if (U.cwiseAbs().maxCoeff() < 1e-13) break;
    beta += Finv * U;
  }
  return beta;
}

}  // namespace oracle

namespace testdata {

using ordcl::Matrix;
using ordcl::OrdinalData;

// Wine bitterness ratings: temperature (cold/warm) and contact (no/yes).
inline OrdinalData wine() {
  Matrix x(4, 2);
  x << 0, 0, 0, 1, 1, 0, 1, 1;
  Matrix y(4, 5);
  y << 4, 9, 5, 0, 0, 1, 7, 8, 2, 0, 0, 5, 8, 3, 2, 0, 1, 5, 7, 5;
  return OrdinalData(x, y, {"temp", "contact"});
}

inline ordcl::ModelSpec wine_spec() {
  ordcl::ModelSpec spec;
  spec.proportional_cols = {1};
  spec.partial_cols = {0};
  return spec;
}

inline OrdinalData artificial_left() {
  Matrix x(3, 1);
  x << -0.5, 0.5, 0.5;
  Matrix y(3, 4);
  y << 8, 6, 1, 0, 10, 0, 1, 0, 8, 1, 0, 0;
  return OrdinalData(x, y, {"x"});
}

inline OrdinalData artificial_right() {
  Matrix x(2, 1);
  x << -0.5, 0.5;
  Matrix y(2, 4);
  y << 8, 6, 1, 0, 18, 1, 1, 0;
  return OrdinalData(x, y, {"x"});
}

inline ordcl::ModelSpec proportional(int columns, ordcl::LinkFamily link = ordcl::kLogit) {
  ordcl::ModelSpec spec;
  spec.link = link;
  for (int j = 0; j < columns; ++j) spec.proportional_cols.push_back(j);
  return spec;
}

// Random grouped data with strictly positive counts in every category total.
inline OrdinalData random_data(std::mt19937_64& rng, int n, int k, int p, int m_lo, int m_hi) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> total(m_lo, m_hi);
  for (;;) {
    Matrix x(n, p);
    for (int r = 0; r < n; ++r) {
      for (int j = 0; j < p; ++j) x(r, j) = normal(rng);
    }
    Matrix y = Matrix::Zero(n, k);
    for (int r = 0; r < n; ++r) {
      const int m = total(rng);
      std::uniform_int_distribution<int> cat(0, k - 1);
      for (int i = 0; i < m; ++i) y(r, cat(rng)) += 1.0;
    }
    if ((y.colwise().sum().array() > 0).all()) return OrdinalData(x, y);
  }
}

}  // namespace testdata
