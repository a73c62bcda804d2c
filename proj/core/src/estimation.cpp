#include "ordcl/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "evaluation.hpp"
#include "linalg.hpp"
#include "ordcl/errors.hpp"

namespace ordcl {

std::string to_string(Method method) {
  switch (method) {
    case Method::ml:
      return "ML";
    case Method::rb:
      return "RB";
    case Method::bc:
      return "BC";
  }
  return "?";
}

std::string to_string(BoundaryFlag flag) {
  switch (flag) {
    case BoundaryFlag::finite:
      return "finite";
    case BoundaryFlag::diverging:
      return "diverging";
    case BoundaryFlag::tied_cutpoint:
      return "tied";
    case BoundaryFlag::minus_infinity:
      return "-inf";
    case BoundaryFlag::plus_infinity:
      return "+inf";
  }
  return "?";
}

Vector FitResult::standard_errors() const {
  Vector se(vcov.rows());
  for (Eigen::Index t = 0; t < vcov.rows(); ++t) {
    const double v = vcov(t, t);
    se[t] = v >= 0.0 ? std::sqrt(v) : std::numeric_limits<double>::quiet_NaN();
  }
  return se;
}

bool FitResult::on_boundary() const {
  return std::any_of(flags.begin(), flags.end(),
                     [](BoundaryFlag f) { return f != BoundaryFlag::finite; });
}

double log_likelihood(const Model& model, const OrdinalData& data, const ParamVector& delta) {
  return detail::log_likelihood(detail::evaluate(model, delta), data.y());
}

Vector score(const Model& model, const OrdinalData& data, const ParamVector& delta) {
  return detail::score_kernel(model, detail::evaluate(model, delta), data.y());
}

Matrix fisher_info(const Model& model, const OrdinalData& data, const ParamVector& delta) {
  return detail::fisher_info(model, detail::evaluate(model, delta), data.totals());
}

namespace {

struct AdjustmentState {
  detail::Evaluation ev;
  Matrix fisher;
  Matrix fisher_inverse;
  AdjustmentTerms terms;
};

AdjustmentState adjustment_state(const Model& model, const OrdinalData& data,
                                 const ParamVector& delta) {
  AdjustmentState st;
  st.ev = detail::evaluate(model, delta);
  const Vector totals = data.totals();
  st.fisher = detail::fisher_info(model, st.ev, totals);
  st.fisher_inverse = detail::invert_spd(st.fisher, "Fisher information");
  st.terms = detail::adjustment_terms(model, st.ev, totals, st.fisher_inverse);
  return st;
}

}  // namespace

AdjustmentTerms adjustment_terms(const Model& model, const OrdinalData& data,
                                 const ParamVector& delta) {
  return adjustment_state(model, data, delta).terms;
}

Vector score_adjustment(const Model& model, const OrdinalData& data, const ParamVector& delta) {
  const AdjustmentState st = adjustment_state(model, data, delta);
  return detail::score_kernel(model, st.ev, st.terms.a);
}

Vector adjusted_score(const Model& model, const OrdinalData& data, const ParamVector& delta) {
  const AdjustmentState st = adjustment_state(model, data, delta);
  return detail::score_kernel(model, st.ev, data.y() + st.terms.a);
}

Matrix adjusted_counts(const Model& model, const OrdinalData& data, const ParamVector& delta) {
  const AdjustmentState st = adjustment_state(model, data, delta);
  return detail::adjusted_counts(st.ev, data.y(), st.terms);
}

Vector first_order_bias(const Model& model, const OrdinalData& data, const ParamVector& delta) {
  const AdjustmentState st = adjustment_state(model, data, delta);
  return -st.fisher_inverse * detail::score_kernel(model, st.ev, st.terms.a);
}

ParamVector starting_values(const Model& model, const OrdinalData& data) {
  const auto& design = model.design;
  const int q = design.q();
  const Vector totals = data.category_totals();
  const double all = totals.sum();

  Vector target(q);
  double cumulative = 0.0;
  for (int s = 0; s < q; ++s) {
    cumulative += totals[s];
    target[s] = quantile(model.link, (cumulative + 0.5) / (all + 1.0));
    if (s > 0 && target[s] < target[s - 1] + 0.1) target[s] = target[s - 1] + 0.1;
  }

  if (design.has_cutpoint_block()) {
    ParamVector start = ParamVector::Zero(design.d());
    start.head(q) = target;
    return start;
  }
  const Matrix z = design.stacked();
  const Vector rhs = target.replicate(design.n(), 1);
  return z.colPivHouseholderQr().solve(rhs);
}

ParamVector iterate_bias_correction(const Model& model, const OrdinalData& data,
                                    ParamVector start, int iterations) {
  ParamVector delta = std::move(start);
  for (int i = 0; i < iterations; ++i) {
    const AdjustmentState st = adjustment_state(model, data, delta);
    const Vector u = detail::score_kernel(model, st.ev, data.y());
    const Vector a = detail::score_kernel(model, st.ev, st.terms.a);
    // Fisher scoring increment for ML, then subtract b = -F^{-1} A.
    delta += st.fisher_inverse * (u + a);
  }
  return delta;
}

std::vector<BoundaryFlag> detect_boundary(const FitResult& fit, const OrdinalData& data,
                                          const FitControl& control) {
  const int d = static_cast<int>(fit.estimates.size());
  std::vector<BoundaryFlag> flags(d, BoundaryFlag::finite);
  const Vector se = fit.standard_errors();

  for (int t = 0; t < d; ++t) {
    const double est = fit.estimates[t];
    if (std::isinf(est)) {
      flags[t] = est < 0 ? BoundaryFlag::minus_infinity : BoundaryFlag::plus_infinity;
      continue;
    }
    const bool wide = !(se[t] <= control.divergence_se_threshold);
    if (!wide) continue;
    const bool large = std::abs(est) > control.divergence_est_threshold;
    const bool drifting = fit.second_pass_drift &&
                          (*fit.second_pass_drift)[t] > control.divergence_drift_threshold;
    if (large || drifting) flags[t] = BoundaryFlag::diverging;
  }

  // Cutpoints of a design with a plain cutpoint block.
  std::vector<int> cut(data.categories() - 1, -1);
  int found = 0;
  for (int t = 0; t < d && t < static_cast<int>(fit.roles.size()); ++t) {
    const ParamRole& role = fit.roles[t];
    if (role.kind == ParamKind::cutpoint && role.category >= 0 &&
        role.category < static_cast<int>(cut.size())) {
      cut[role.category] = t;
      ++found;
    }
  }
  if (found != static_cast<int>(cut.size())) return flags;

  const int q = static_cast<int>(cut.size());
  if (fit.method != Method::rb) {
    const Vector totals = data.category_totals();
    std::vector<bool> empty(q + 1);
    for (int s = 0; s <= q; ++s) empty[s] = !(totals[s] > 0.0);
    for (int b = 0; b < q; ++b) {
      const bool below = std::all_of(empty.begin(), empty.begin() + b + 1, [](bool e) { return e; });
      const bool above = std::all_of(empty.begin() + b + 1, empty.end(), [](bool e) { return e; });
      BoundaryFlag& flag = flags[cut[b]];
      if (below) {
        flag = BoundaryFlag::minus_infinity;
      } else if (above) {
        flag = BoundaryFlag::plus_infinity;
      } else if ((empty[b] || empty[b + 1]) && flag == BoundaryFlag::finite) {
        flag = BoundaryFlag::tied_cutpoint;
      }
    }
  }
  for (int b = 0; b + 1 < q; ++b) {
    const double lo = fit.estimates[cut[b]];
    const double hi = fit.estimates[cut[b + 1]];
    if (std::isfinite(lo) && lo == hi) {
      for (int t : {cut[b], cut[b + 1]}) {
        if (flags[t] == BoundaryFlag::finite) flags[t] = BoundaryFlag::tied_cutpoint;
      }
    }
  }
  return flags;
}

}  // namespace ordcl
