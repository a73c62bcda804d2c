#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "evaluation.hpp"
#include "linalg.hpp"
#include "ordcl/errors.hpp"
#include "ordcl/estimation.hpp"

namespace ordcl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

struct Scoring {
  ParamVector delta;
  detail::Evaluation ev;
  double loglik = 0.0;
  double max_score = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

// Fisher scoring with step halving on a log-likelihood decrease or an
// infeasible step. With `until_converged` false it takes exactly
// `max_iter` steps (or fewer if the information turns singular) and never
// throws past the first evaluation.
Scoring fisher_scoring(const Model& model, const Matrix& counts, const Vector& totals,
                       ParamVector start, const FitControl& control, int max_iter,
                       bool until_converged) {
  Scoring st;
  st.delta = std::move(start);
  st.ev = detail::evaluate(model, st.delta);
  st.loglik = detail::log_likelihood(st.ev, counts);
  for (;;) {
    const Vector u = detail::score_kernel(model, st.ev, counts);
    st.max_score = max_abs(u);
    st.trace.push_back(st.max_score);
    if (until_converged && st.max_score < control.grad_tol) {
      st.converged = true;
      break;
    }
    if (st.iterations >= max_iter) break;

    Vector step;
    try {
      step = detail::solve_spd(detail::fisher_info(model, st.ev, totals), u, "Fisher information");
    } catch (const NumericalError&) {
      if (until_converged) throw;
      break;
    }

    bool accepted = false;
    double t = 1.0;
    const double slack = 1e-12 * (1.0 + std::abs(st.loglik));
    for (int h = 0; h <= control.max_halvings; ++h, t *= 0.5) {
      ParamVector candidate = st.delta + t * step;
      try {
        detail::Evaluation ev = detail::evaluate(model, candidate);
        const double l = detail::log_likelihood(ev, counts);
        if (std::isfinite(l) && l >= st.loglik - slack) {
          st.delta = std::move(candidate);
          st.ev = std::move(ev);
          st.loglik = l;
          accepted = true;
          break;
        }
      } catch (const InvalidParameterError&) {
      } catch (const DomainError&) {
      }
    }
    if (!accepted) break;
    ++st.iterations;
  }
  return st;
}

Matrix safe_inverse(const Matrix& f) {
  try {
    return detail::invert_spd(f, "Fisher information");
  } catch (const NumericalError&) {
    Matrix out = Matrix::Constant(f.rows(), f.cols(), kNaN);
    out.diagonal().setConstant(kInf);
    return out;
  }
}

FitResult base_result(Method method, const Model& model) {
  FitResult fit;
  fit.method = method;
  fit.link = model.link;
  fit.names = model.design.names;
  fit.roles = model.design.roles;
  return fit;
}

bool any_wide(const FitResult& fit, const FitControl& control) {
  const Vector se = fit.standard_errors();
  for (Eigen::Index t = 0; t < se.size(); ++t) {
    if (!(se[t] <= control.divergence_se_threshold)) return true;
  }
  return false;
}

void run_second_pass(FitResult& fit, const Model& model, const OrdinalData& data,
                     const FitControl& control) {
  if (!any_wide(fit, control) || control.second_pass_iterations <= 0) return;
  const Scoring extra = fisher_scoring(model, data.y(), data.totals(), fit.estimates, control,
                                       control.second_pass_iterations, false);
  fit.second_pass_drift = (extra.delta - fit.estimates).cwiseAbs();
}

NonConvergenceError non_convergence(const std::string& what, const std::vector<double>& trace) {
  return NonConvergenceError(what + " did not converge in the iteration budget", trace);
}

}  // namespace

FitResult fit_ml(const Model& model, const OrdinalData& data, const FitControl& control) {
  const Scoring st = fisher_scoring(model, data.y(), data.totals(),
                                    starting_values(model, data), control, control.max_iter,
                                    true);
  FitResult fit = base_result(Method::ml, model);
  fit.estimates = st.delta;
  fit.loglik = st.loglik;
  fit.iterations = st.iterations;
  fit.converged = st.converged;
  fit.max_abs_score = st.max_score;
  fit.trace = st.trace;
  fit.vcov = safe_inverse(detail::fisher_info(model, st.ev, data.totals()));
  fit.fitted = st.ev.p.pi;

  run_second_pass(fit, model, data, control);
  fit.flags = detect_boundary(fit, data, control);
  if (!fit.converged) {
    // Scoring stalled against the probability floor: the wide directions are
    // the ones running off to infinity.
    const Vector se = fit.standard_errors();
    for (Eigen::Index t = 0; t < se.size(); ++t) {
      if (fit.flags[t] == BoundaryFlag::finite && !(se[t] <= control.divergence_se_threshold)) {
        fit.flags[t] = BoundaryFlag::diverging;
      }
    }
  }
  if (!fit.converged && !fit.on_boundary()) throw non_convergence("ML fit", fit.trace);
  return fit;
}

FitResult fit_rb(const Model& model, const OrdinalData& data, const FitControl& control) {
  const Vector totals = data.totals();
  ParamVector delta = starting_values(model, data);
  FitResult fit = base_result(Method::rb, model);

  detail::Evaluation ev;
  Matrix fisher;
  bool converged = false;
  int outer = 0;
  for (;; ++outer) {
    ev = detail::evaluate(model, delta);
    fisher = detail::fisher_info(model, ev, totals);
    const Matrix finv = detail::invert_spd(fisher, "Fisher information");
    const AdjustmentTerms terms = detail::adjustment_terms(model, ev, totals, finv);
    const Vector ustar = detail::score_kernel(model, ev, data.y() + terms.a);
    const double size = max_abs(ustar);
    fit.trace.push_back(size);
    fit.max_abs_score = size;
    if (size < control.grad_tol) {
      converged = true;
      break;
    }
    if (outer >= control.max_iter) break;

    // ML on pseudo-counts whose ordinary score is U* at the current delta.
    const Matrix pseudo = detail::adjusted_counts(ev, data.y(), terms);
    ParamVector next = delta;
    try {
      const Scoring inner = fisher_scoring(model, pseudo, pseudo.rowwise().sum(), delta,
                                           control, control.max_iter, true);
      // A pseudo-count fit that ran off towards the boundary (possible when
      // a vanishes, e.g. at a symmetric start) is no use as the next iterate.
      const Matrix inv =
          detail::invert_spd(detail::fisher_info(model, inner.ev, totals), "Fisher information");
      const double widest = inv.diagonal().maxCoeff();
      const double limit = control.divergence_se_threshold * control.divergence_se_threshold;
      if (inner.converged && widest <= limit) next = inner.delta;
    } catch (const Error&) {
      next = delta;
    }
    if (next == delta) {
      // Quasi Fisher step on U*, halved until feasible.
      const Vector step = finv * ustar;
      double t = 1.0;
      bool moved = false;
      for (int h = 0; h <= control.max_halvings && !moved; ++h, t *= 0.5) {
        try {
          detail::evaluate(model, delta + t * step);
          next = delta + t * step;
          moved = true;
        } catch (const InvalidParameterError&) {
        }
      }
      if (!moved) break;
    }
    delta = std::move(next);
  }

  fit.estimates = delta;
  fit.iterations = outer;
  fit.converged = converged;
  fit.loglik = detail::log_likelihood(ev, data.y());
  fit.vcov = safe_inverse(fisher);
  fit.fitted = ev.p.pi;
  fit.flags = detect_boundary(fit, data, control);
  if (!fit.converged) throw non_convergence("reduced-bias fit", fit.trace);
  return fit;
}

FitResult bias_correct(const FitResult& ml, const Model& model, const OrdinalData& data,
                       const FitControl& control) {
  if (!ml.converged || ml.on_boundary()) {
    throw UndefinedEstimatorError(
        "bias-corrected estimate is undefined: the ML estimate is on the boundary");
  }
  FitResult fit = ml;
  fit.method = Method::bc;
  fit.estimates = ml.estimates - first_order_bias(model, data, ml.estimates);
  fit.second_pass_drift.reset();
  detail::Evaluation ev;
  try {
    ev = detail::evaluate(model, fit.estimates);
  } catch (const InvalidParameterError& e) {
    throw UndefinedEstimatorError(std::string("bias-corrected estimate is infeasible: ") +
                                  e.what());
  }
  fit.loglik = detail::log_likelihood(ev, data.y());
  fit.vcov = safe_inverse(detail::fisher_info(model, ev, data.totals()));
  fit.fitted = ev.p.pi;
  fit.iterations = ml.iterations + 1;
  fit.flags = detect_boundary(fit, data, control);
  return fit;
}

FitResult fit_bc(const Model& model, const OrdinalData& data, const FitControl& control) {
  return bias_correct(fit_ml(model, data, control), model, data, control);
}

namespace {

// Maps a fit on merged categories back to the original category layout.
FitResult expand_fit(const FitResult& reduced, const CategoryMerge& merge, const Model& full,
                     const OrdinalData& data, const FitControl& control) {
  const int q_old = merge.old_categories() - 1;
  const int q_new = merge.new_categories() - 1;
  const int d_old = full.design.d();
  const int slopes = d_old - q_old;

  std::vector<int> source(d_old);
  for (int b = 0; b < q_old; ++b) source[b] = merge.cutpoint_source(b);
  for (int j = 0; j < slopes; ++j) source[q_old + j] = q_new + j;

  FitResult fit = base_result(reduced.method, full);
  fit.estimates.resize(d_old);
  fit.estimates.head(q_old) = merge.expand_cutpoints(reduced.estimates.head(q_new));
  fit.estimates.tail(slopes) = reduced.estimates.tail(slopes);

  fit.vcov = Matrix::Constant(d_old, d_old, kNaN);
  for (int i = 0; i < d_old; ++i) {
    if (source[i] < 0) {
      fit.vcov(i, i) = kInf;
      continue;
    }
    for (int j = 0; j < d_old; ++j) {
      if (source[j] >= 0) fit.vcov(i, j) = reduced.vcov(source[i], source[j]);
    }
  }
  if (reduced.second_pass_drift) {
    Vector drift(d_old);
    for (int i = 0; i < d_old; ++i) {
      drift[i] = source[i] < 0 ? kNaN : (*reduced.second_pass_drift)[source[i]];
    }
    fit.second_pass_drift = drift;
  }

  fit.loglik = reduced.loglik;
  fit.iterations = reduced.iterations;
  fit.converged = reduced.converged;
  fit.max_abs_score = reduced.max_abs_score;
  fit.trace = reduced.trace;

  // Fitted probabilities with +-infinite or tied cutpoints.
  const int n = data.rows();
  fit.fitted.resize(n, q_old + 1);
  const Matrix eta_slopes = linear_predictors(full.design, [&] {
    ParamVector only = fit.estimates;
    only.head(q_old).setZero();
    return only;
  }());
  for (int r = 0; r < n; ++r) {
    double previous = 0.0;
    for (int b = 0; b < q_old; ++b) {
      const double alpha = fit.estimates[b];
      double gamma;
      if (alpha == kInf) {
        gamma = 1.0;
      } else if (alpha == -kInf) {
        gamma = 0.0;
      } else {
        gamma = cdf(full.link, alpha + eta_slopes(r, b));
      }
      fit.fitted(r, b) = gamma - previous;
      previous = gamma;
    }
    fit.fitted(r, q_old) = 1.0 - previous;
  }

  fit.flags = detect_boundary(fit, data, control);
  return fit;
}

}  // namespace

FitResult fit_ml(const ModelSpec& spec, const OrdinalData& data, const FitControl& control) {
  if (!spec.is_proportional()) return fit_ml(make_model(spec, data), data, control);
  const CategoryMerge merge = merge_empty_categories(data);
  if (merge.is_identity()) return fit_ml(make_model(spec, data), data, control);
  const FitResult reduced = fit_ml(make_model(spec, merge.data), merge.data, control);
  return expand_fit(reduced, merge, make_model(spec, data), data, control);
}

FitResult fit_rb(const ModelSpec& spec, const OrdinalData& data, const FitControl& control) {
  if (!spec.is_proportional()) return fit_rb(make_model(spec, data), data, control);
  const CategoryMerge merge = merge_interior_empty_categories(data);
  if (merge.is_identity()) return fit_rb(make_model(spec, data), data, control);
  const FitResult reduced = fit_rb(make_model(spec, merge.data), merge.data, control);
  return expand_fit(reduced, merge, make_model(spec, data), data, control);
}

FitResult fit_bc(const ModelSpec& spec, const OrdinalData& data, const FitControl& control) {
  // With no empty categories the ModelSpec overload of fit_ml is the plain fit.
  const FitResult ml = fit_ml(spec, data, control);
  return bias_correct(ml, make_model(spec, data), data, control);
}

FitResult fit_constant_adjusted(const ModelSpec& spec, const OrdinalData& data, double constant,
                                const FitControl& control) {
  if (!(constant >= 0.0) || !std::isfinite(constant)) {
    throw Error("constant adjustment must be finite and non-negative");
  }
  const OrdinalData shifted = data.with_counts(data.y().array() + constant);
  return fit_ml(spec, shifted, control);
}

}  // namespace ordcl
