#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ordcl/links.hpp"

namespace ordcl {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// delta = (cutpoint parameters, regression parameters) in design-column order.
using ParamVector = Eigen::VectorXd;

/// n rows of (covariate vector, k category counts). Counts are stored as
/// non-negative reals so that adjusted pseudo-counts share the type.
class OrdinalData {
 public:
  OrdinalData() = default;
  OrdinalData(Matrix covariates, Matrix counts,
              std::vector<std::string> covariate_names = {});

  int rows() const { return static_cast<int>(y_.rows()); }
  int categories() const { return static_cast<int>(y_.cols()); }
  int covariates() const { return static_cast<int>(x_.cols()); }

  const Matrix& x() const { return x_; }
  const Matrix& y() const { return y_; }
  const std::vector<std::string>& covariate_names() const { return names_; }

  /// m_r for every row.
  Vector totals() const { return y_.rowwise().sum(); }
  /// Sum of counts over rows, per category.
  Vector category_totals() const { return y_.colwise().sum().transpose(); }

  /// Same covariates, replacement counts (validated).
  OrdinalData with_counts(Matrix counts) const;

 private:
  Matrix x_;
  Matrix y_;
  std::vector<std::string> names_;
};

/// Which covariate columns enter with a common slope and which with
/// category-specific slopes.
struct ModelSpec {
  LinkFamily link = kLogit;
  std::vector<int> proportional_cols;
  std::vector<int> partial_cols;

  bool is_proportional() const { return partial_cols.empty(); }
  int parameter_count(int k) const;
};

enum class ParamKind { cutpoint, slope, partial_slope, custom };

struct ParamRole {
  ParamKind kind = ParamKind::custom;
  int category = -1;  // cutpoint or partial-slope category index (0-based)
  int column = -1;    // covariate column for slopes
};

/// Per-row q x d model matrices Z_r. Columns: q cutpoint indicators, then
/// proportional covariates, then q expanded columns per partial covariate;
/// covariates enter with a negative sign.
struct DesignBlocks {
  std::vector<Matrix> blocks;
  std::vector<ParamRole> roles;
  std::vector<std::string> names;

  int n() const { return static_cast<int>(blocks.size()); }
  int q() const { return blocks.empty() ? 0 : static_cast<int>(blocks[0].rows()); }
  int d() const { return blocks.empty() ? 0 : static_cast<int>(blocks[0].cols()); }

  /// The nq x d matrix with row blocks Z_1..Z_n.
  Matrix stacked() const;
  /// True when the first q parameters are plain cutpoints (identity block).
  bool has_cutpoint_block() const;
};

/// Link plus design: everything needed to evaluate the likelihood.
struct Model {
  LinkFamily link = kLogit;
  DesignBlocks design;
};

/// Builds Z_r for every row and checks that the stacked design has full
/// column rank. Throws IdentifiabilityError naming a dependent column.
DesignBlocks build_design(const ModelSpec& spec, const OrdinalData& data);

Model make_model(const ModelSpec& spec, const OrdinalData& data);

/// Design for delta' = L delta: blocks Z_r L^{-1}.
DesignBlocks reparameterize(const DesignBlocks& design, const Matrix& L);

/// eta_rs = sum_t z_rst delta_t, as an n x q matrix.
Matrix linear_predictors(const DesignBlocks& design, const ParamVector& delta);

struct Probabilities {
  Matrix eta;    // n x q
  Matrix gamma;  // n x q cumulative probabilities
  Matrix pi;     // n x k category probabilities
};

/// Throws InvalidParameterError when eta_r is not strictly increasing or a
/// category probability is not positive.
Probabilities probabilities(const Model& model, const ParamVector& delta);

/// Rows with identical covariate vectors are summed; first-occurrence order.
OrdinalData aggregate(const OrdinalData& data);

/// Result of merging categories: `mapping[s]` is the new index of old
/// category s; `empty[s]` records whether old category s had zero total.
struct CategoryMerge {
  OrdinalData data;
  std::vector<int> mapping;
  std::vector<bool> empty;

  int old_categories() const { return static_cast<int>(mapping.size()); }
  int new_categories() const { return data.categories(); }
  bool is_identity() const { return old_categories() == new_categories(); }

  /// Where old cutpoint b comes from after the merge: the new cutpoint index,
  /// or -1 / -2 for -infinity / +infinity.
  int cutpoint_source(int b) const;

  /// Old-layout cutpoints from new-layout cutpoints; merged-away boundaries
  /// are tied to a neighbour or set to +-infinity.
  Vector expand_cutpoints(const Vector& reduced) const;
};

inline constexpr int kMinusInfinity = -1;
inline constexpr int kPlusInfinity = -2;

/// Every category with zero total count is merged into its right neighbour
/// (the last one into its left neighbour). Throws DegenerateDataError when
/// fewer than two categories are observed.
CategoryMerge merge_empty_categories(const OrdinalData& data);

/// Merges only empty runs strictly inside the scale into their right
/// neighbour; an empty run at either end is collapsed to a single empty
/// category and kept.
CategoryMerge merge_interior_empty_categories(const OrdinalData& data);

/// Reverses each row's count vector.
OrdinalData reverse_categories(const OrdinalData& data);

}  // namespace ordcl
