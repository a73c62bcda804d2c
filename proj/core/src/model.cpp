#include "ordcl/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "ordcl/errors.hpp"

namespace ordcl {

OrdinalData::OrdinalData(Matrix covariates, Matrix counts,
                         std::vector<std::string> covariate_names)
    : x_(std::move(covariates)), y_(std::move(counts)), names_(std::move(covariate_names)) {
  if (y_.cols() < 2) {
    throw DegenerateDataError("ordinal data needs at least two categories");
  }
  if (x_.rows() != y_.rows()) {
    throw Error("covariate and count matrices have different row counts");
  }
  if (!x_.allFinite()) throw Error("covariates must be finite");
  if (!y_.allFinite() || (y_.array() < 0.0).any()) {
    throw Error("counts must be finite and non-negative");
  }
  if (y_.rows() == 0 || !(y_.rowwise().sum().array() > 0.0).any()) {
    throw DegenerateDataError("ordinal data has no observations");
  }
  if (names_.empty()) {
    for (int j = 0; j < x_.cols(); ++j) names_.push_back("x" + std::to_string(j + 1));
  } else if (static_cast<int>(names_.size()) != x_.cols()) {
    throw Error("covariate name count does not match covariate columns");
  }
}

OrdinalData OrdinalData::with_counts(Matrix counts) const {
  if (counts.rows() != y_.rows()) {
    throw Error("replacement counts have the wrong number of rows");
  }
  return OrdinalData(x_, std::move(counts), names_);
}

int ModelSpec::parameter_count(int k) const {
  const int q = k - 1;
  return q + static_cast<int>(proportional_cols.size()) +
         q * static_cast<int>(partial_cols.size());
}

Matrix DesignBlocks::stacked() const {
  Matrix z(n() * q(), d());
  for (int r = 0; r < n(); ++r) z.middleRows(r * q(), q()) = blocks[r];
  return z;
}

bool DesignBlocks::has_cutpoint_block() const {
  if (static_cast<int>(roles.size()) < q()) return false;
  for (int s = 0; s < q(); ++s) {
    if (roles[s].kind != ParamKind::cutpoint || roles[s].category != s) return false;
  }
  return true;
}

namespace {

void check_spec(const ModelSpec& spec, const OrdinalData& data) {
  std::set<int> seen;
  auto check = [&](int c) {
    if (c < 0 || c >= data.covariates()) {
      throw Error("model references covariate column " + std::to_string(c) +
                  " which does not exist");
    }
    if (!seen.insert(c).second) {
      throw Error("covariate column " + std::to_string(c) +
                  " listed more than once in the model");
    }
  };
  for (int c : spec.proportional_cols) check(c);
  for (int c : spec.partial_cols) check(c);
}

// Index of the first column that is a linear combination of the preceding
// ones, or -1 when the matrix has full column rank.
int first_dependent_column(const Matrix& z) {
  const double scale = std::max(1.0, z.cwiseAbs().maxCoeff());
  for (int j = 1; j <= z.cols(); ++j) {
    Eigen::ColPivHouseholderQR<Matrix> qr(z.leftCols(j));
    qr.setThreshold(1e-10 * scale / std::max(1.0, std::sqrt(double(z.rows()))));
    if (qr.rank() < j) return j - 1;
  }
  return -1;
}

}  // namespace

DesignBlocks build_design(const ModelSpec& spec, const OrdinalData& data) {
  check_spec(spec, data);
  const int q = data.categories() - 1;
  const int d = spec.parameter_count(data.categories());
  const auto& names = data.covariate_names();

  DesignBlocks design;
  for (int s = 0; s < q; ++s) {
    design.roles.push_back({ParamKind::cutpoint, s, -1});
    design.names.push_back("alpha" + std::to_string(s + 1));
  }
  for (int c : spec.proportional_cols) {
    design.roles.push_back({ParamKind::slope, -1, c});
    design.names.push_back(names[c]);
  }
  for (int c : spec.partial_cols) {
    for (int s = 0; s < q; ++s) {
      design.roles.push_back({ParamKind::partial_slope, s, c});
      design.names.push_back(names[c] + "[" + std::to_string(s + 1) + "]");
    }
  }

  design.blocks.reserve(data.rows());
  for (int r = 0; r < data.rows(); ++r) {
    Matrix z = Matrix::Zero(q, d);
    for (int t = 0; t < d; ++t) {
      const ParamRole& role = design.roles[t];
      switch (role.kind) {
        case ParamKind::cutpoint:
          z(role.category, t) = 1.0;
          break;
        case ParamKind::slope:
          z.col(t).setConstant(-data.x()(r, role.column));
          break;
        case ParamKind::partial_slope:
          z(role.category, t) = -data.x()(r, role.column);
          break;
        case ParamKind::custom:
          break;
      }
    }
    design.blocks.push_back(std::move(z));
  }

  const int dependent = first_dependent_column(design.stacked());
  if (dependent >= 0) {
    throw IdentifiabilityError("design is rank deficient: column '" +
                                   design.names[dependent] +
                                   "' is a linear combination of earlier columns",
                               dependent);
  }
  return design;
}

Model make_model(const ModelSpec& spec, const OrdinalData& data) {
  return Model{spec.link, build_design(spec, data)};
}

DesignBlocks reparameterize(const DesignBlocks& design, const Matrix& L) {
  if (L.rows() != design.d() || L.cols() != design.d()) {
    throw Error("reparameterization matrix has the wrong dimension");
  }
  Eigen::FullPivLU<Matrix> lu(L);
  if (!lu.isInvertible()) throw NumericalError("reparameterization matrix is singular");
  const Matrix inverse = lu.inverse();

  DesignBlocks out;
  out.blocks.reserve(design.n());
  for (const Matrix& z : design.blocks) out.blocks.push_back(z * inverse);
  for (int t = 0; t < design.d(); ++t) {
    out.roles.push_back({ParamKind::custom, -1, -1});
    out.names.push_back("phi" + std::to_string(t + 1));
  }
  return out;
}

Matrix linear_predictors(const DesignBlocks& design, const ParamVector& delta) {
  if (delta.size() != design.d()) {
    throw Error("parameter vector has length " + std::to_string(delta.size()) +
                ", design expects " + std::to_string(design.d()));
  }
  Matrix eta(design.n(), design.q());
  for (int r = 0; r < design.n(); ++r) eta.row(r) = (design.blocks[r] * delta).transpose();
  return eta;
}

Probabilities probabilities(const Model& model, const ParamVector& delta) {
  Probabilities p;
  p.eta = linear_predictors(model.design, delta);
  const int n = model.design.n();
  const int q = model.design.q();
  p.gamma.resize(n, q);
  p.pi.resize(n, q + 1);
  for (int r = 0; r < n; ++r) {
    double previous = 0.0;
    for (int s = 0; s < q; ++s) {
      const double eta = p.eta(r, s);
      if (!std::isfinite(eta)) {
        throw InvalidParameterError("non-finite linear predictor", r, s);
      }
      if (s > 0 && !(eta > p.eta(r, s - 1))) {
        std::ostringstream msg;
        msg << "linear predictors not increasing at row " << r + 1 << ", category "
            << s + 1;
        throw InvalidParameterError(msg.str(), r, s);
      }
      const double g = cdf(model.link, eta);
      p.gamma(r, s) = g;
      p.pi(r, s) = g - previous;
      previous = g;
    }
    p.pi(r, q) = 1.0 - previous;
    for (int s = 0; s <= q; ++s) {
      if (!(p.pi(r, s) > 0.0)) {
        std::ostringstream msg;
        msg << "category probability underflows at row " << r + 1 << ", category "
            << s + 1;
        throw InvalidParameterError(msg.str(), r, s);
      }
    }
  }
  return p;
}

OrdinalData aggregate(const OrdinalData& data) {
  std::vector<int> first_of;  // representative row for each output row
  std::vector<int> group(data.rows(), -1);
  for (int r = 0; r < data.rows(); ++r) {
    for (int g = 0; g < static_cast<int>(first_of.size()); ++g) {
      if (data.x().row(first_of[g]) == data.x().row(r)) {
        group[r] = g;
        break;
      }
    }
    if (group[r] < 0) {
      group[r] = static_cast<int>(first_of.size());
      first_of.push_back(r);
    }
  }
  const int n = static_cast<int>(first_of.size());
  Matrix x(n, data.covariates());
  Matrix y = Matrix::Zero(n, data.categories());
  for (int g = 0; g < n; ++g) x.row(g) = data.x().row(first_of[g]);
  for (int r = 0; r < data.rows(); ++r) y.row(group[r]) += data.y().row(r);
  return OrdinalData(std::move(x), std::move(y), data.covariate_names());
}

namespace {

CategoryMerge apply_mapping(const OrdinalData& data, std::vector<int> mapping,
                            std::vector<bool> empty) {
  const int k_new = mapping.back() + 1;
  Matrix y = Matrix::Zero(data.rows(), k_new);
  for (int s = 0; s < data.categories(); ++s) y.col(mapping[s]) += data.y().col(s);
  return CategoryMerge{data.with_counts(std::move(y)), std::move(mapping), std::move(empty)};
}

std::vector<bool> empty_categories(const OrdinalData& data) {
  const Vector totals = data.category_totals();
  std::vector<bool> empty(data.categories());
  for (int s = 0; s < data.categories(); ++s) empty[s] = !(totals[s] > 0.0);
  return empty;
}

}  // namespace

CategoryMerge merge_empty_categories(const OrdinalData& data) {
  const int k = data.categories();
  std::vector<bool> empty = empty_categories(data);
  const int observed = static_cast<int>(std::count(empty.begin(), empty.end(), false));
  if (observed < 2) {
    throw DegenerateDataError("fewer than two categories are observed");
  }
  // Observed categories are numbered in order; an empty category takes the
  // number of the next observed category to its right, or of the last
  // observed category when there is none.
  std::vector<int> mapping(k);
  int next = observed - 1;
  int rank = observed;
  for (int s = k - 1; s >= 0; --s) {
    if (!empty[s]) next = --rank;
    mapping[s] = next;
  }
  return apply_mapping(data, std::move(mapping), std::move(empty));
}

CategoryMerge merge_interior_empty_categories(const OrdinalData& data) {
  const int k = data.categories();
  std::vector<bool> empty = empty_categories(data);
  int first = 0;
  while (first < k && empty[first]) ++first;
  int last = k - 1;
  while (last >= 0 && empty[last]) --last;
  if (first > last) throw DegenerateDataError("no category is observed");

  const int observed = static_cast<int>(std::count(empty.begin(), empty.end(), false));
  const int offset = first > 0 ? 1 : 0;
  std::vector<int> mapping(k);
  int rank = observed;
  int next = 0;
  for (int s = last; s >= first; --s) {
    if (!empty[s]) next = --rank;
    mapping[s] = next + offset;
  }
  for (int s = 0; s < first; ++s) mapping[s] = 0;
  for (int s = last + 1; s < k; ++s) mapping[s] = observed + offset;
  if (mapping.back() + 1 < 2) {
    throw DegenerateDataError("fewer than two categories remain after merging");
  }
  return apply_mapping(data, std::move(mapping), std::move(empty));
}

int CategoryMerge::cutpoint_source(int b) const {
  const int left = mapping[b];
  const int right = mapping[b + 1];
  if (left != right) return left;
  const int group = left;
  const int last_group = new_categories() - 1;
  // Is there an observed old category in this group at or before b?
  bool observed_before = false;
  bool observed_in_group = false;
  for (int s = 0; s < old_categories(); ++s) {
    if (mapping[s] != group || empty[s]) continue;
    observed_in_group = true;
    if (s <= b) observed_before = true;
  }
  if (!observed_in_group) {
    // A kept run of empty end categories: tie to its single finite boundary.
    return group == 0 ? 0 : group - 1;
  }
  if (observed_before) return group == last_group ? kPlusInfinity : group;
  return group == 0 ? kMinusInfinity : group - 1;
}

Vector CategoryMerge::expand_cutpoints(const Vector& reduced) const {
  const int q_old = old_categories() - 1;
  Vector out(q_old);
  for (int b = 0; b < q_old; ++b) {
    const int source = cutpoint_source(b);
    if (source == kMinusInfinity) {
      out[b] = -std::numeric_limits<double>::infinity();
    } else if (source == kPlusInfinity) {
      out[b] = std::numeric_limits<double>::infinity();
    } else {
      out[b] = reduced[source];
    }
  }
  return out;
}

OrdinalData reverse_categories(const OrdinalData& data) {
  return data.with_counts(data.y().rowwise().reverse());
}

}  // namespace ordcl
