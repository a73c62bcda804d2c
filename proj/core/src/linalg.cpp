#include "linalg.hpp"

#include <cmath>
#include <string>

#include "ordcl/errors.hpp"

namespace ordcl::detail {
namespace {

struct Factorization {
  Eigen::VectorXd scale;
  Eigen::LDLT<Eigen::MatrixXd> ldlt;
};

Factorization factorize(const Eigen::MatrixXd& a, const char* what) {
  const Eigen::Index d = a.rows();
  if (a.cols() != d) throw NumericalError(std::string(what) + " is not square");
  Factorization f;
  f.scale.resize(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double diag = a(i, i);
    if (!(diag > 0.0) || !std::isfinite(diag)) {
      throw NumericalError(std::string(what) + " is singular (zero diagonal entry " +
                           std::to_string(i + 1) + ")");
    }
    f.scale[i] = 1.0 / std::sqrt(diag);
  }
  const Eigen::MatrixXd scaled = f.scale.asDiagonal() * a * f.scale.asDiagonal();
  f.ldlt.compute(scaled);
  if (f.ldlt.info() != Eigen::Success) {
    throw NumericalError(std::string(what) + " could not be factorised");
  }
  const Eigen::VectorXd pivots = f.ldlt.vectorD();
  const double largest = pivots.maxCoeff();
  if (!(pivots.minCoeff() > kSingularPivot * largest)) {
    throw NumericalError(std::string(what) + " is singular or not positive definite");
  }
  return f;
}

}  // namespace

Eigen::MatrixXd invert_spd(const Eigen::MatrixXd& a, const char* what) {
  const Factorization f = factorize(a, what);
  const Eigen::Index d = a.rows();
  Eigen::MatrixXd inverse = f.ldlt.solve(Eigen::MatrixXd::Identity(d, d));
  inverse = f.scale.asDiagonal() * inverse * f.scale.asDiagonal();
  return 0.5 * (inverse + inverse.transpose());
}

Eigen::VectorXd solve_spd(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                          const char* what) {
  const Factorization f = factorize(a, what);
  return f.scale.asDiagonal() * f.ldlt.solve(f.scale.asDiagonal() * b);
}

}  // namespace ordcl::detail
