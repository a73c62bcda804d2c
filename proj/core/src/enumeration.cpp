#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <utility>

#include "ordcl/errors.hpp"
#include "ordcl/inference.hpp"
#include "ordcl/parallel.hpp"
#include "ordcl/studies.hpp"

namespace ordcl {

namespace {

void compositions(int m, int k, std::vector<int>& current, std::vector<std::vector<int>>& out) {
  const int position = static_cast<int>(current.size());
  if (position == k - 1) {
    current.push_back(m);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (int v = 0; v <= m; ++v) {
    current.push_back(v);
    compositions(m - v, k, current, out);
    current.pop_back();
  }
}

std::vector<std::vector<int>> compositions(int m, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  compositions(m, k, current, out);
  return out;
}

double binomial(int n, int r) {
  double out = 1.0;
  for (int i = 1; i <= r; ++i) out = out * (n - r + i) / i;
  return out;
}

double log_multinomial_pmf(const std::vector<int>& counts, const Vector& pi) {
  int m = 0;
  double out = 0.0;
  for (std::size_t s = 0; s < counts.size(); ++s) {
    m += counts[s];
    out -= std::lgamma(counts[s] + 1.0);
    if (counts[s] > 0) out += counts[s] * std::log(pi[static_cast<Eigen::Index>(s)]);
  }
  return out + std::lgamma(m + 1.0);
}

Vector row_probabilities(LinkFamily link, const ParamVector& delta, double x) {
  const Eigen::Index q = delta.size() - 1;
  const double beta = delta[q];
  Vector pi(q + 1);
  double previous = 0.0;
  for (Eigen::Index s = 0; s < q; ++s) {
    const double gamma = cdf(link, delta[s] - x * beta);
    pi[s] = gamma - previous;
    previous = gamma;
  }
  pi[q] = 1.0 - previous;
  return pi;
}

void validate(const EnumConfig& config) {
  if (config.k < 2) throw Error("enumeration needs k >= 2");
  if (config.m1 < 1 || config.m2 < 1) throw Error("enumeration needs row totals of at least 1");
  if (config.x1 == config.x2) throw Error("enumeration needs distinct covariate values");
  for (double b : config.beta_grid) {
    if (!std::isfinite(b)) throw Error("beta grid must be finite");
  }
  for (Estimator est : config.estimators) {
    if (est == Estimator::el && config.k != 2) {
      throw Error("the empirical-logit estimator is only available for k = 2");
    }
  }
}

struct Accumulator {
  double p_infinite = 0.0;
  double weight = 0.0;
  double first = 0.0;
  double second = 0.0;
  double covered = 0.0;
};

EstimatorMetrics finish(Estimator estimator, const Accumulator& acc) {
  EstimatorMetrics m;
  m.estimator = estimator;
  m.conditional = estimator == Estimator::ml || estimator == Estimator::bc;
  m.p_infinite = acc.p_infinite;
  m.p_condition = acc.weight;
  m.bias = acc.weight > 0.0 ? acc.first / acc.weight : std::nan("");
  m.mse = acc.weight > 0.0 ? acc.second / acc.weight : std::nan("");
  m.variance = m.mse - m.bias * m.bias;
  m.coverage = acc.covered;
  return m;
}

CellReport evaluate_cell(const EnumConfig& config, const std::vector<Table2xK>& tables,
                         const std::vector<std::vector<TableFit>>& fits, double beta, double e) {
  ParamVector delta(config.k);
  delta.head(config.k - 1) = cutpoint_pattern(config.k, e);
  delta[config.k - 1] = beta;
  const Vector pi1 = row_probabilities(config.link, delta, config.x1);
  const Vector pi2 = row_probabilities(config.link, delta, config.x2);
  const double z = normal_quantile(0.5 + 0.5 * config.ci_level);

  std::vector<Accumulator> acc(config.estimators.size());
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const double p = std::exp(log_multinomial_pmf(tables[i].first, pi1) +
                              log_multinomial_pmf(tables[i].second, pi2));
    for (std::size_t j = 0; j < acc.size(); ++j) {
      const TableFit& fit = fits[i][j];
      Accumulator& a = acc[j];
      if (!fit.finite) {
        a.p_infinite += p;
        a.covered += p;  // (-inf, inf) always covers
        continue;
      }
      const double err = fit.beta - beta;
      a.weight += p;
      a.first += p * err;
      a.second += p * err * err;
      if (std::abs(err) <= z * fit.se) a.covered += p;
    }
  }
  CellReport cell;
  cell.parameter = "beta";
  cell.beta = beta;
  cell.e = e;
  for (std::size_t j = 0; j < acc.size(); ++j) {
    cell.metrics.push_back(finish(config.estimators[j], acc[j]));
  }
  return cell;
}

StudyReport enumeration(const EnumConfig& config, bool refit) {
  validate(config);
  const std::vector<Table2xK> tables = enumerate_tables(config.k, config.m1, config.m2);
  const int threads = resolve_threads(config.threads);

  std::vector<std::vector<TableFit>> fits(tables.size());
  std::vector<std::vector<Diagnostic>> notes(tables.size());
  parallel_for(tables.size(), threads, [&](std::size_t i) {
    fits[i] = fit_table(tables[i], config, &notes[i], static_cast<std::int64_t>(i));
  });

  StudyReport report;
  report.kind = "enumeration";
  report.items = static_cast<std::int64_t>(tables.size());
  for (auto& n : notes) {
    report.diagnostics.insert(report.diagnostics.end(), n.begin(), n.end());
  }

  std::vector<std::pair<double, double>> grid;
  for (double e : config.e_values) {
    for (double b : config.beta_grid) grid.emplace_back(b, e);
  }
  report.cells.resize(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t c) {
    if (refit) {
      std::vector<std::vector<TableFit>> again(tables.size());
      for (std::size_t i = 0; i < tables.size(); ++i) again[i] = fit_table(tables[i], config);
      report.cells[c] = evaluate_cell(config, tables, again, grid[c].first, grid[c].second);
    } else {
      report.cells[c] = evaluate_cell(config, tables, fits, grid[c].first, grid[c].second);
    }
  });
  return report;
}

}  // namespace

std::vector<Table2xK> enumerate_tables(int k, int m1, int m2) {
  if (k < 2 || m1 < 0 || m2 < 0) throw Error("enumerate_tables needs k >= 2 and m >= 0");
  const auto first = compositions(m1, k);
  const auto second = compositions(m2, k);
  std::vector<Table2xK> out;
  out.reserve(first.size() * second.size());
  for (const auto& a : first) {
    for (const auto& b : second) out.push_back({a, b});
  }
  return out;
}

std::int64_t count_tables(int k, int m1, int m2) {
  return static_cast<std::int64_t>(std::llround(binomial(m1 + k - 1, k - 1) *
                                                binomial(m2 + k - 1, k - 1)));
}

double table_probability(const Table2xK& table, LinkFamily link, const ParamVector& delta,
                         double x1, double x2) {
  if (static_cast<Eigen::Index>(table.first.size()) != delta.size()) {
    throw Error("delta must hold k - 1 cutpoints and one slope");
  }
  for (Eigen::Index s = 1; s + 1 < delta.size(); ++s) {
    if (!(delta[s] > delta[s - 1])) {
      throw InvalidParameterError("cutpoints must be strictly increasing", 0,
                                  static_cast<int>(s));
    }
  }
  return std::exp(log_multinomial_pmf(table.first, row_probabilities(link, delta, x1)) +
                  log_multinomial_pmf(table.second, row_probabilities(link, delta, x2)));
}

OrdinalData table_data(const Table2xK& table, double x1, double x2) {
  const int k = static_cast<int>(table.first.size());
  Matrix x(2, 1);
  x << x1, x2;
  Matrix y(2, k);
  for (int s = 0; s < k; ++s) {
    y(0, s) = table.first[s];
    y(1, s) = table.second[s];
  }
  return OrdinalData(x, y, {"x"});
}

std::string to_string(Estimator estimator) {
  switch (estimator) {
    case Estimator::ml:
      return "ML";
    case Estimator::bc:
      return "BC";
    case Estimator::rb:
      return "RB";
    case Estimator::el:
      return "EL";
  }
  return "?";
}

Estimator parse_estimator(const std::string& token) {
  std::string t = token;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "ml") return Estimator::ml;
  if (t == "bc") return Estimator::bc;
  if (t == "rb") return Estimator::rb;
  if (t == "el") return Estimator::el;
  throw Error("unknown estimator '" + token + "' (expected ml, bc, rb or el)");
}

Vector cutpoint_pattern(int k, double e) {
  const int q = k - 1;
  if (q == 1) return Vector::Zero(1);
  return e * Vector::LinSpaced(q, -1.0, 1.0);
}

const EstimatorMetrics& CellReport::get(Estimator estimator) const {
  for (const auto& m : metrics) {
    if (m.estimator == estimator) return m;
  }
  throw Error("estimator " + to_string(estimator) + " not present in the report");
}

std::vector<TableFit> fit_table(const Table2xK& table, const EnumConfig& config,
                                std::vector<Diagnostic>* diagnostics, std::int64_t item) {
  const OrdinalData data = table_data(table, config.x1, config.x2);
  ModelSpec spec;
  spec.link = config.link;
  spec.proportional_cols = {0};
  auto note = [&](Estimator est, const std::string& message) {
    if (diagnostics) diagnostics->push_back({item, to_string(est), message});
  };
  auto slope_of = [](const FitResult& fit) {
    const int t = static_cast<int>(fit.estimates.size()) - 1;
    TableFit out;
    out.finite = fit.is_finite(t) && std::isfinite(fit.estimates[t]);
    out.beta = fit.estimates[t];
    out.se = fit.standard_errors()[t];
    return out;
  };

  // ML and BC share one fit on the fully merged table.
  std::optional<FitResult> ml;
  std::optional<Model> merged_model;
  std::optional<CategoryMerge> merge;
  std::string ml_problem;
  try {
    merge = merge_empty_categories(data);
    merged_model = make_model(spec, merge->data);
    ml = fit_ml(*merged_model, merge->data, config.control);
  } catch (const DegenerateDataError&) {
    // One observed category: the slope is not identified.
  } catch (const Error& e) {
    ml_problem = e.what();
  }

  std::vector<TableFit> out;
  for (Estimator est : config.estimators) {
    TableFit fit;
    try {
      switch (est) {
        case Estimator::ml:
          if (ml) fit = slope_of(*ml);
          if (!ml_problem.empty()) {
            fit.failed = true;
            note(est, ml_problem);
          }
          break;
        case Estimator::bc:
          if (ml && !ml->on_boundary()) {
            fit = slope_of(bias_correct(*ml, *merged_model, merge->data, config.control));
          }
          break;
        case Estimator::rb:
          fit = slope_of(fit_rb(spec, data, config.control));
          break;
        case Estimator::el: {
          const double dx = config.x2 - config.x1;
          const double y1 = table.first[0];
          const double y2 = table.second[0];
          fit.beta = gen_emp_logit_2xk_binary(y1, config.m1, y2, config.m2) / dx;
          fit.se = std::sqrt(1.0 / (y1 + 0.5) + 1.0 / (config.m1 - y1 + 0.5) +
                             1.0 / (y2 + 0.5) + 1.0 / (config.m2 - y2 + 0.5)) /
                   std::abs(dx);
          fit.finite = true;
          break;
        }
      }
    } catch (const UndefinedEstimatorError&) {
      fit = TableFit{};
    } catch (const Error& e) {
      fit = TableFit{};
      fit.failed = true;
      note(est, e.what());
    }
    out.push_back(fit);
  }
  return out;
}

StudyReport run_enumeration(const EnumConfig& config) { return enumeration(config, false); }

StudyReport run_enumeration_refit(const EnumConfig& config) { return enumeration(config, true); }

std::vector<SymmetryViolation> symmetry_check(const StudyReport& report, double tol) {
  std::map<std::pair<double, double>, const CellReport*> index;
  for (const auto& cell : report.cells) index[{cell.e, cell.beta}] = &cell;

  std::vector<SymmetryViolation> out;
  for (const auto& cell : report.cells) {
    if (cell.beta < 0.0) continue;
    const CellReport* mirror = nullptr;
    for (const auto& [key, other] : index) {
      if (key.first == cell.e && std::abs(key.second + cell.beta) <= 1e-12) mirror = other;
    }
    if (!mirror) continue;
    for (const auto& m : cell.metrics) {
      const EstimatorMetrics& r = mirror->get(m.estimator);
      const std::pair<const char*, double> checks[] = {
          {"bias", m.bias + r.bias},
          {"mse", m.mse - r.mse},
          {"coverage", m.coverage - r.coverage},
          {"p_infinite", m.p_infinite - r.p_infinite},
      };
      for (const auto& [name, diff] : checks) {
        if (!(std::abs(diff) <= tol)) {
          out.push_back({cell.beta, cell.e, m.estimator, name, diff});
        }
      }
    }
  }
  return out;
}

}  // namespace ordcl
