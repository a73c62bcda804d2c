#pragma once

#include <Eigen/Dense>

namespace ordcl::detail {

/// Relative pivot below which a (diagonally equilibrated) information matrix
/// is treated as singular.
inline constexpr double kSingularPivot = 1e-14;

/// Inverse of a symmetric positive definite matrix via an equilibrated,
/// pivoted LDL^T factorisation. Throws NumericalError when a scaled pivot is
/// non-positive or below kSingularPivot relative to the largest one.
Eigen::MatrixXd invert_spd(const Eigen::MatrixXd& a, const char* what);

/// Same factorisation, used to solve a x = b.
Eigen::VectorXd solve_spd(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                          const char* what);

}  // namespace ordcl::detail
