#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <random>

#include "ordcl/errors.hpp"
#include "ordcl/inference.hpp"
#include "ordcl/parallel.hpp"
#include "ordcl/studies.hpp"

namespace ordcl {

namespace {

// Per-replicate outcome for one estimator, restricted to the slopes.
struct SlopeFit {
  bool ok = false;
  Vector estimate;
  Vector se;
};

std::vector<int> slope_indices(const Model& model) {
  std::vector<int> out;
  for (int t = 0; t < model.design.d(); ++t) {
    if (model.design.roles[t].kind != ParamKind::cutpoint) out.push_back(t);
  }
  return out;
}

// Slopes sit after the cutpoints in every layout, so they are read from the
// tail of a fit whatever the number of categories left after merging.
SlopeFit slopes_of(const FitResult& fit, int count) {
  SlopeFit out;
  const Eigen::Index d = fit.estimates.size();
  out.estimate = fit.estimates.tail(count);
  out.se = fit.standard_errors().tail(count);
  out.ok = true;
  for (Eigen::Index t = d - count; t < d; ++t) {
    if (!fit.is_finite(static_cast<int>(t)) || !std::isfinite(fit.estimates[t])) out.ok = false;
  }
  return out;
}

}  // namespace

Matrix simulate_counts(const Model& model, const OrdinalData& design, const ParamVector& delta,
                       std::uint64_t seed, std::uint64_t replicate) {
  const Probabilities p = probabilities(model, delta);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(replicate),
                    static_cast<std::uint32_t>(replicate >> 32)};
  std::mt19937_64 engine(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const Vector totals = design.totals();
  Matrix counts = Matrix::Zero(design.rows(), design.categories());
  for (int r = 0; r < design.rows(); ++r) {
    const auto m = static_cast<long>(std::llround(totals[r]));
    for (long draw = 0; draw < m; ++draw) {
      const double u = unit(engine);
      int s = 0;
      double cumulative = p.pi(r, 0);
      while (u >= cumulative && s + 1 < design.categories()) cumulative += p.pi(r, ++s);
      counts(r, s) += 1.0;
    }
  }
  return counts;
}

StudyReport run_simulation(const SimulationConfig& config) {
  if (config.reps < 1) throw Error("simulation needs at least one replicate");
  for (Estimator est : config.estimators) {
    if (est == Estimator::el) throw Error("the empirical-logit estimator is not simulated");
  }
  const Model truth_model = make_model(config.spec, config.design);
  if (config.truth.size() != truth_model.design.d()) {
    throw Error("true parameter vector has the wrong length");
  }
  probabilities(truth_model, config.truth);  // validates ordering up front

  const std::vector<int> slopes = slope_indices(truth_model);
  const int p = static_cast<int>(slopes.size());
  const std::size_t reps = static_cast<std::size_t>(config.reps);
  const std::size_t ne = config.estimators.size();

  std::vector<std::vector<SlopeFit>> outcomes(reps, std::vector<SlopeFit>(ne));
  std::vector<std::vector<Diagnostic>> notes(reps);

  parallel_for(reps, resolve_threads(config.threads), [&](std::size_t rep) {
    const OrdinalData data = config.design.with_counts(
        simulate_counts(truth_model, config.design, config.truth, config.seed, rep));
    auto note = [&](Estimator est, const std::string& message) {
      notes[rep].push_back({static_cast<std::int64_t>(rep), to_string(est), message});
    };

    std::optional<FitResult> ml;
    std::optional<Model> model;
    std::optional<OrdinalData> fitted_data;
    try {
      if (config.spec.is_proportional()) {
        CategoryMerge merge = merge_empty_categories(data);
        fitted_data = merge.data;
      } else {
        fitted_data = data;
      }
      model = make_model(config.spec, *fitted_data);
      ml = fit_ml(*model, *fitted_data, config.control);
    } catch (const Error& e) {
      note(Estimator::ml, e.what());
    }

    for (std::size_t j = 0; j < ne; ++j) {
      const Estimator est = config.estimators[j];
      try {
        if (est == Estimator::ml && ml) {
          outcomes[rep][j] = slopes_of(*ml, p);
        } else if (est == Estimator::bc && ml && !ml->on_boundary()) {
          outcomes[rep][j] = slopes_of(bias_correct(*ml, *model, *fitted_data, config.control), p);
        } else if (est == Estimator::rb) {
          outcomes[rep][j] = slopes_of(fit_rb(config.spec, data, config.control), p);
        }
      } catch (const UndefinedEstimatorError&) {
      } catch (const Error& e) {
        note(est, e.what());
      }
    }
    // ML and BC are judged on the replicates where every ML slope is finite.
    const bool ml_finite = ml && slopes_of(*ml, p).ok;
    for (std::size_t j = 0; j < ne; ++j) {
      const Estimator est = config.estimators[j];
      if ((est == Estimator::ml || est == Estimator::bc) && !ml_finite) outcomes[rep][j].ok = false;
    }
  });

  StudyReport report;
  report.kind = "simulation";
  report.items = config.reps;
  report.seed = config.seed;
  for (auto& n : notes) report.diagnostics.insert(report.diagnostics.end(), n.begin(), n.end());

  const double z = normal_quantile(0.5 + 0.5 * config.ci_level);
  for (int i = 0; i < p; ++i) {
    CellReport cell;
    cell.parameter = truth_model.design.names[slopes[i]];
    cell.beta = config.truth[slopes[i]];
    cell.e = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t j = 0; j < ne; ++j) {
      EstimatorMetrics m;
      m.estimator = config.estimators[j];
      m.conditional = m.estimator != Estimator::rb;
      double first = 0.0;
      double second = 0.0;
      double covered = 0.0;
      std::int64_t used = 0;
      for (std::size_t rep = 0; rep < reps; ++rep) {
        const SlopeFit& fit = outcomes[rep][j];
        if (!fit.ok) continue;
        const double err = fit.estimate[i] - cell.beta;
        first += err;
        second += err * err;
        if (std::abs(err) <= z * fit.se[i]) covered += 1.0;
        ++used;
      }
      const double n = static_cast<double>(used);
      m.used = used;
      m.p_condition = n / static_cast<double>(reps);
      m.p_infinite = 1.0 - m.p_condition;
      m.bias = used ? first / n : std::nan("");
      m.mse = used ? second / n : std::nan("");
      m.variance = m.mse - m.bias * m.bias;
      m.coverage = used ? covered / n : std::nan("");
      cell.metrics.push_back(m);
    }
    report.cells.push_back(std::move(cell));
  }
  return report;
}

void write_report_csv(const StudyReport& report, std::ostream& out) {
  out << "parameter,beta,e,estimator,conditional,p_infinite,p_condition,bias,mse,variance,"
         "coverage,used\n";
  out << std::setprecision(17);
  for (const auto& cell : report.cells) {
    for (const auto& m : cell.metrics) {
      out << cell.parameter << ',' << cell.beta << ',';
      if (std::isfinite(cell.e)) out << cell.e;
      out << ',' << to_string(m.estimator) << ',' << (m.conditional ? 1 : 0);
      for (double value : {m.p_infinite, m.p_condition, m.bias, m.mse, m.variance, m.coverage}) {
        out << ',';
        if (std::isfinite(value)) out << value;  // undefined metrics stay empty
      }
      out << ',' << m.used << '\n';
    }
  }
}

}  // namespace ordcl
