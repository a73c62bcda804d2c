#include "ordcl/inference.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "evaluation.hpp"
#include "linalg.hpp"
#include "ordcl/errors.hpp"

namespace ordcl {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ContrastMatrix::ContrastMatrix(Matrix L) : L_(std::move(L)) {
  if (L_.rows() == 0) throw Error("contrast matrix has no rows");
  if (L_.rows() > L_.cols() || Eigen::FullPivLU<Matrix>(L_).rank() != L_.rows()) {
    throw Error("contrast matrix must have full row rank");
  }
}

ContrastMatrix ContrastMatrix::over(const std::vector<int>& columns, const Matrix& block, int d) {
  if (block.cols() != static_cast<Eigen::Index>(columns.size())) {
    throw Error("contrast block width does not match its column list");
  }
  Matrix L = Matrix::Zero(block.rows(), d);
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] < 0 || columns[j] >= d) throw Error("contrast column out of range");
    L.col(columns[j]) = block.col(static_cast<Eigen::Index>(j));
  }
  return ContrastMatrix(std::move(L));
}

ContrastMatrix ContrastMatrix::proportionality(const FitResult& fit, int column) {
  std::vector<int> cols;
  for (std::size_t t = 0; t < fit.roles.size(); ++t) {
    if (fit.roles[t].kind == ParamKind::partial_slope && fit.roles[t].column == column) {
      cols.push_back(static_cast<int>(t));
    }
  }
  if (cols.size() < 2) {
    throw Error("covariate " + std::to_string(column) + " has no category-specific slopes");
  }
  const int c = static_cast<int>(cols.size()) - 1;
  Matrix block = Matrix::Zero(c, c + 1);
  block.leftCols(c).setIdentity();
  block.col(c).setConstant(-1.0);
  return over(cols, block, static_cast<int>(fit.estimates.size()));
}

double chi2_upper_tail(double statistic, int df) {
  if (df <= 0) throw Error("chi-square tail needs positive degrees of freedom");
  if (!(statistic > 0.0)) return 1.0;
  if (std::isinf(statistic)) return 0.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * statistic);
}

double normal_quantile(double p) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

std::vector<WaldRow> wald_z(const FitResult& fit) {
  const Vector se = fit.standard_errors();
  std::vector<WaldRow> rows(fit.estimates.size());
  for (std::size_t t = 0; t < rows.size(); ++t) {
    WaldRow& row = rows[t];
    row.estimate = fit.estimates[t];
    row.se = se[t];
    row.z = row.estimate / row.se;
    row.p_value = std::isfinite(row.z) ? std::erfc(std::abs(row.z) / std::sqrt(2.0))
                                       : std::numeric_limits<double>::quiet_NaN();
  }
  return rows;
}

std::vector<Interval> wald_ci(const FitResult& fit, double level) {
  if (!(level > 0.0 && level < 1.0)) throw Error("confidence level must lie in (0, 1)");
  const double z = normal_quantile(0.5 + 0.5 * level);
  const Vector se = fit.standard_errors();
  std::vector<Interval> out(fit.estimates.size());
  for (std::size_t t = 0; t < out.size(); ++t) {
    const bool unbounded = fit.method != Method::rb && !fit.is_finite(static_cast<int>(t)) &&
                           fit.flags[t] != BoundaryFlag::tied_cutpoint;
    if (unbounded || !std::isfinite(fit.estimates[t])) {
      out[t] = {-kInf, kInf};
    } else {
      out[t] = {fit.estimates[t] - z * se[t], fit.estimates[t] + z * se[t]};
    }
  }
  return out;
}

TestResult wald_contrast_test(const FitResult& fit, const ContrastMatrix& L) {
  const Matrix& l = L.matrix();
  if (l.cols() != fit.estimates.size()) throw Error("contrast width does not match the fit");
  for (Eigen::Index t = 0; t < l.cols(); ++t) {
    if (l.col(t).cwiseAbs().maxCoeff() > 0.0 && !fit.is_finite(static_cast<int>(t))) {
      throw Error("contrast involves parameter " + fit.names[t] + " which is not finite");
    }
  }
  const Vector value = l * fit.estimates;
  const Matrix middle = l * fit.vcov * l.transpose();
  const Vector solved = detail::solve_spd(middle, value, "contrast covariance");
  TestResult result;
  result.statistic = value.dot(solved);
  result.df = L.rows();
  result.p_value = chi2_upper_tail(result.statistic, result.df);
  return result;
}

ParamVector embed(const ParamVector& restricted, const std::vector<int>& source) {
  ParamVector out(static_cast<Eigen::Index>(source.size()));
  for (std::size_t t = 0; t < source.size(); ++t) {
    if (source[t] < 0 || source[t] >= restricted.size()) {
      throw Error("embedding index out of range");
    }
    out[static_cast<Eigen::Index>(t)] = restricted[source[t]];
  }
  return out;
}

std::vector<int> proportional_embedding(const FitResult& restricted, const FitResult& large,
                                        int column) {
  auto find = [&](const ParamRole& want) {
    for (std::size_t i = 0; i < restricted.roles.size(); ++i) {
      const ParamRole& role = restricted.roles[i];
      if (role.kind == want.kind && role.category == want.category &&
          role.column == want.column) {
        return static_cast<int>(i);
      }
    }
    throw Error("restricted fit has no parameter matching the large model");
  };
  std::vector<int> source;
  for (const ParamRole& role : large.roles) {
    if (role.kind == ParamKind::partial_slope && role.column == column) {
      source.push_back(find({ParamKind::slope, -1, column}));
    } else {
      source.push_back(find(role));
    }
  }
  return source;
}

TestResult adjusted_score_test(const Model& large, const OrdinalData& data,
                               const ParamVector& delta_restricted, int df) {
  const detail::Evaluation ev = detail::evaluate(large, delta_restricted);
  const Vector totals = data.totals();
  const Matrix fisher = detail::fisher_info(large, ev, totals);
  Matrix finv;
  try {
    finv = detail::invert_spd(fisher, "Fisher information at the restricted estimate");
  } catch (const NumericalError& e) {
    throw SingularInformationError(e.what());
  }
  const AdjustmentTerms terms = detail::adjustment_terms(large, ev, totals, finv);
  const Vector ustar = detail::score_kernel(large, ev, data.y() + terms.a);
  TestResult result;
  result.statistic = ustar.dot(finv * ustar);
  result.df = df;
  result.p_value = chi2_upper_tail(result.statistic, df);
  return result;
}

Vector empirical_logit(const Vector& counts) {
  const double m = counts.sum();
  if (!(m >= 1.0)) throw Error("empirical logit needs a positive total");
  Vector out(counts.size() - 1);
  double cumulative = 0.0;
  for (Eigen::Index s = 0; s + 1 < counts.size(); ++s) {
    cumulative += counts[s];
    out[s] = std::log((cumulative + 0.5) / (m - cumulative + 0.5));
  }
  return out;
}

double gen_emp_logit_2xk_binary(double y11, double m1, double y21, double m2) {
  if (y11 < 0 || y11 > m1 || y21 < 0 || y21 > m2) {
    throw Error("binomial counts must lie between 0 and the row total");
  }
  return std::log((y11 + 0.5) / (m1 - y11 + 0.5)) - std::log((y21 + 0.5) / (m2 - y21 + 0.5));
}

}  // namespace ordcl
