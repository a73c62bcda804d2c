#include "ordcl_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "ordcl/errors.hpp"
#include "ordcl/inference.hpp"
#include "ordcl_cli/ingest.hpp"

namespace ordcl::cli {

using nlohmann::json;

namespace {

// A JSON config file is a flat object whose keys are long flag names:
// {"method": "rb", "partial": ["temp"]}. Its entries are appended as
// arguments, skipping flags also given on the command line.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string path;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      out.push_back(args[i]);
    }
  }
  if (path.empty()) return out;

  std::ifstream in(path);
  if (!in) throw Error("cannot read config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("config " + path + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw Error("config " + path + " must be a JSON object");
  auto scalar = [&](const std::string& key, const json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) return v.dump();
    throw Error("config key '" + key + "' must hold strings or numbers");
  };
  for (const auto& [key, value] : j.items()) {
    const std::string flag = "--" + key;
    const bool given = std::any_of(out.begin(), out.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (given) continue;
    out.push_back(flag);
    if (value.is_array()) {
      for (const auto& v : value) out.push_back(scalar(key, v));
    } else {
      out.push_back(scalar(key, value));
    }
  }
  return out;
}

json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

struct DataArgs {
  std::string path;
  std::string layout = "auto";
  std::vector<std::string> proportional;
  std::vector<std::string> partial;
  std::vector<std::string> counts;
  std::string response;
  std::string frequency;
  std::vector<std::string> categories;
  std::vector<std::string> standardize;
  std::string link = "logit";
};

void add_data_options(CLI::App* cmd, DataArgs& a) {
  cmd->add_option("--data", a.path, "CSV file (header row required)")->required();
  cmd->add_option("--layout", a.layout, "grouped, long or auto");
  cmd->add_option("--proportional", a.proportional, "covariates with a common slope")
      ->delimiter(',');
  cmd->add_option("--partial", a.partial, "covariates with category-specific slopes")
      ->delimiter(',');
  cmd->add_option("--counts", a.counts, "grouped layout count columns in category order")
      ->delimiter(',');
  cmd->add_option("--response", a.response, "long layout category column");
  cmd->add_option("--freq", a.frequency, "long layout frequency column");
  cmd->add_option("--categories", a.categories, "long layout category labels in order")
      ->delimiter(',');
  cmd->add_option("--standardize", a.standardize, "covariates to centre and scale")
      ->delimiter(',');
  cmd->add_option("--link", a.link, "logit, probit or cloglog");
}

struct Loaded {
  OrdinalData data;
  ModelSpec spec;
};

Loaded load(const DataArgs& a) {
  IngestOptions opt;
  opt.layout = parse_layout(a.layout);
  opt.covariates = a.proportional;
  opt.covariates.insert(opt.covariates.end(), a.partial.begin(), a.partial.end());
  opt.count_columns = a.counts;
  opt.response = a.response;
  opt.frequency = a.frequency;
  opt.categories = a.categories;
  opt.standardize = a.standardize;
  Loaded out{ingest_csv(a.path, opt).data, {}};
  out.spec.link = parse_link(a.link);
  if (a.proportional.empty() && a.partial.empty()) {
    for (int j = 0; j < out.data.covariates(); ++j) out.spec.proportional_cols.push_back(j);
  } else {
    int j = 0;
    for (std::size_t i = 0; i < a.proportional.size(); ++i) out.spec.proportional_cols.push_back(j++);
    for (std::size_t i = 0; i < a.partial.size(); ++i) out.spec.partial_cols.push_back(j++);
  }
  return out;
}

void add_control_options(CLI::App* cmd, FitControl& c) {
  cmd->add_option("--grad-tol", c.grad_tol, "convergence tolerance on max |score|");
  cmd->add_option("--max-iter", c.max_iter, "iteration limit");
  cmd->add_option("--max-halvings", c.max_halvings, "step-halving limit");
  cmd->add_option("--se-threshold", c.divergence_se_threshold,
                  "standard error above which a parameter may be diverging");
  cmd->add_option("--est-threshold", c.divergence_est_threshold,
                  "absolute estimate above which a wide parameter is diverging");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  f << text;
}

void emit_json(const json& j, const std::string& path, std::ostream& out) {
  if (path.empty()) return;
  if (path == "-") {
    out << j.dump(2) << '\n';
  } else {
    write_text(path, j.dump(2) + "\n");
  }
}

FitResult run_fit(const std::string& method, const ModelSpec& spec, const OrdinalData& data,
                  const FitControl& control, double constant) {
  if (method == "ml") return fit_ml(spec, data, control);
  if (method == "rb") return fit_rb(spec, data, control);
  if (method == "bc") return fit_bc(spec, data, control);
  if (method == "const-adjust") return fit_constant_adjusted(spec, data, constant, control);
  throw Error("unknown method '" + method + "' (expected ml, rb, bc or const-adjust)");
}

std::string fmt(double v, int precision = 3) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << v;
  return s.str();
}

ContrastMatrix parse_contrast(const std::string& text, const FitResult& fit) {
  // "temp[1]:1,temp[4]:-1" is one row.
  Matrix row = Matrix::Zero(1, fit.estimates.size());
  std::stringstream ss(text);
  std::string term;
  while (std::getline(ss, term, ',')) {
    const auto colon = term.rfind(':');
    const std::string name = colon == std::string::npos ? term : term.substr(0, colon);
    const double coef = colon == std::string::npos ? 1.0 : std::stod(term.substr(colon + 1));
    const auto it = std::find(fit.names.begin(), fit.names.end(), name);
    if (it == fit.names.end()) throw Error("contrast names unknown parameter '" + name + "'");
    row(0, it - fit.names.begin()) += coef;
  }
  return ContrastMatrix(row);
}

int covariate_index(const OrdinalData& data, const std::string& name) {
  const auto& names = data.covariate_names();
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw Error("unknown covariate '" + name + "'");
  return static_cast<int>(it - names.begin());
}

json test_json(const std::string& kind, const std::string& target, const TestResult& t) {
  return {{"kind", kind}, {"target", target}, {"statistic", number(t.statistic)},
          {"df", t.df}, {"p_value", number(t.p_value)}};
}

std::vector<Estimator> parse_estimators(const std::vector<std::string>& tokens) {
  std::vector<Estimator> out;
  for (const auto& t : tokens) out.push_back(parse_estimator(t));
  return out;
}

}  // namespace

namespace {

double grid_number(const std::string& text, const std::string& grid) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw Error("bad grid '" + grid + "': '" + text + "' is not a finite number");
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  const auto colons = std::count(text.begin(), text.end(), ':');
  if (colons == 2) {
    std::stringstream ss(text);
    std::string lo, hi, n;
    std::getline(ss, lo, ':');
    std::getline(ss, hi, ':');
    std::getline(ss, n);
    const double a = grid_number(lo, text);
    const double b = grid_number(hi, text);
    const double count = grid_number(n, text);
    if (count < 1 || count != std::floor(count)) throw Error("bad grid '" + text + "': n must be a positive integer");
    if (count == 1) return {a};
    for (int i = 0; i < count; ++i) out.push_back(a + (b - a) * i / (count - 1));
    return out;
  }
  if (colons != 0) throw Error("bad grid '" + text + "' (expected lo:hi:n or a comma list)");
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(grid_number(item, text));
  }
  if (out.empty()) throw Error("empty grid '" + text + "'");
  return out;
}

json fit_to_json(const FitResult& fit, double level) {
  const auto rows = wald_z(fit);
  const auto ci = wald_ci(fit, level);
  json params = json::array();
  for (std::size_t t = 0; t < rows.size(); ++t) {
    params.push_back({{"name", fit.names[t]},
                      {"estimate", number(rows[t].estimate)},
                      {"se", number(rows[t].se)},
                      {"z", number(rows[t].z)},
                      {"p_value", number(rows[t].p_value)},
                      {"ci", {number(ci[t].lower), number(ci[t].upper)}},
                      {"flag", to_string(fit.flags[t])}});
  }
  json vcov = json::array();
  for (Eigen::Index i = 0; i < fit.vcov.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < fit.vcov.cols(); ++j) row.push_back(number(fit.vcov(i, j)));
    vcov.push_back(row);
  }
  json trace = json::array();
  for (double v : fit.trace) trace.push_back(number(v));
  return {{"method", to_string(fit.method)},
          {"link", to_string(fit.link)},
          {"converged", fit.converged},
          {"on_boundary", fit.on_boundary()},
          {"iterations", fit.iterations},
          {"loglik", number(fit.loglik)},
          {"max_abs_score", number(fit.max_abs_score)},
          {"level", level},
          {"parameters", params},
          {"vcov", vcov},
          {"trace", trace}};
}

json report_to_json(const StudyReport& report) {
  json cells = json::array();
  for (const auto& cell : report.cells) {
    json metrics = json::array();
    for (const auto& m : cell.metrics) {
      metrics.push_back({{"estimator", to_string(m.estimator)},
                         {"conditional", m.conditional},
                         {"p_infinite", number(m.p_infinite)},
                         {"p_condition", number(m.p_condition)},
                         {"bias", number(m.bias)},
                         {"mse", number(m.mse)},
                         {"variance", number(m.variance)},
                         {"bias2_over_variance", number(m.bias * m.bias / m.variance)},
                         {"coverage", number(m.coverage)},
                         {"used", m.used}});
    }
    cells.push_back({{"parameter", cell.parameter},
                     {"beta", number(cell.beta)},
                     {"e", number(cell.e)},
                     {"metrics", metrics}});
  }
  json diagnostics = json::array();
  for (const auto& d : report.diagnostics) {
    diagnostics.push_back({{"item", d.item}, {"estimator", d.estimator}, {"message", d.message}});
  }
  json j = {{"kind", report.kind}, {"items", report.items}, {"cells", cells},
            {"diagnostics", diagnostics}};
  if (report.seed) j["seed"] = *report.seed;
  return j;
}

void print_fit_table(const FitResult& fit, std::ostream& out) {
  const auto rows = wald_z(fit);
  std::size_t width = 9;
  for (const auto& n : fit.names) width = std::max(width, n.size() + 2);
  out << std::left << std::setw(static_cast<int>(width)) << "Parameter" << std::right
      << std::setw(12) << "Estimate" << std::setw(14) << "Std. error" << std::setw(10) << "Z"
      << "  Flag\n";
  for (std::size_t t = 0; t < rows.size(); ++t) {
    out << std::left << std::setw(static_cast<int>(width)) << fit.names[t] << std::right
        << std::setw(12) << fmt(rows[t].estimate) << std::setw(14) << fmt(rows[t].se)
        << std::setw(10) << fmt(rows[t].z, 2) << "  "
        << (fit.flags[t] == BoundaryFlag::finite ? "" : to_string(fit.flags[t])) << '\n';
  }
  out << "method " << to_string(fit.method) << ", link " << to_string(fit.link) << ", loglik "
      << fmt(fit.loglik, 4) << ", iterations " << fit.iterations
      << (fit.converged ? "" : " (not converged)") << '\n';
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cumulative link models for ordinal data: ML, bias correction and bias reduction"};
  app.name("ordcl");
  app.require_subcommand(1);
  std::string config_path;
  auto with_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON file whose keys mirror the long flags");
  };

  // fit
  DataArgs fit_data;
  FitControl fit_control;
  std::string fit_method = "ml";
  double fit_const = 0.5;
  double fit_level = 0.95;
  std::string fit_json;
  auto* fit = app.add_subcommand("fit", "fit one model and report estimates");
  with_config(fit);
  add_data_options(fit, fit_data);
  add_control_options(fit, fit_control);
  fit->add_option("--method", fit_method, "ml, rb, bc or const-adjust");
  fit->add_option("--const", fit_const, "constant added to every count by const-adjust")
      ->check(CLI::NonNegativeNumber);
  fit->add_option("--level", fit_level, "confidence level for Wald intervals");
  fit->add_option("--json", fit_json, "write the fit as JSON ('-' for stdout)");

  // test
  DataArgs test_data;
  FitControl test_control;
  std::string test_method = "rb";
  std::vector<std::string> test_prop, test_score, test_contrast;
  std::string test_json_path;
  auto* test = app.add_subcommand("test", "Wald contrast and adjusted score tests");
  with_config(test);
  add_data_options(test, test_data);
  add_control_options(test, test_control);
  test->add_option("--method", test_method, "estimator for Wald tests: ml, rb or bc");
  test->add_option("--proportionality", test_prop,
                   "Wald test that a partial covariate's slopes are equal");
  test->add_option("--score-test", test_score,
                   "adjusted score test of a common slope for a partial covariate");
  test->add_option("--contrast", test_contrast,
                   "one-row contrast 'name:coef,name:coef' (repeatable)");
  test->add_option("--json", test_json_path, "write results as JSON ('-' for stdout)");

  // enumerate
  EnumConfig en;
  int en_m = 3;
  std::string en_beta = "-6:6:50";
  std::string en_e = "1,3,5,7,9";
  std::string en_link = "logit";
  std::vector<std::string> en_est{"ml", "bc", "rb"};
  std::string en_csv, en_json;
  auto* enumerate = app.add_subcommand("enumerate", "exact study over all 2 x k tables");
  with_config(enumerate);
  enumerate->add_option("--k", en.k, "number of categories");
  auto* m_opt = enumerate->add_option("--m", en_m, "common row total");
  enumerate->add_option("--m1", en.m1, "first row total")->excludes(m_opt);
  enumerate->add_option("--m2", en.m2, "second row total")->excludes(m_opt);
  enumerate->add_option("--x1", en.x1, "covariate value of the first row");
  enumerate->add_option("--x2", en.x2, "covariate value of the second row");
  enumerate->add_option("--link", en_link, "logit, probit or cloglog");
  enumerate->add_option("--beta", en_beta, "true slopes: 'lo:hi:n' or a comma list");
  enumerate->add_option("--e", en_e, "cutpoint scales: 'lo:hi:n' or a comma list");
  enumerate->add_option("--estimators", en_est, "ml, bc, rb, el")->delimiter(',');
  enumerate->add_option("--level", en.ci_level, "confidence level");
  enumerate->add_option("--threads", en.threads, "worker threads (default ORDCL_THREADS or all)");
  enumerate->add_option("--csv", en_csv, "write one row per cell and estimator");
  enumerate->add_option("--json", en_json, "write the full report ('-' for stdout)");
  add_control_options(enumerate, en.control);

  // simulate
  DataArgs sim_data;
  SimulationConfig sim;
  std::vector<std::string> sim_est{"ml", "bc", "rb"};
  std::string sim_csv, sim_json;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo study under the ML fit of a data set");
  with_config(simulate);
  add_data_options(simulate, sim_data);
  add_control_options(simulate, sim.control);
  simulate->add_option("--reps", sim.reps, "replicates")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "random seed");
  simulate->add_option("--level", sim.ci_level, "confidence level");
  simulate->add_option("--estimators", sim_est, "ml, bc, rb")->delimiter(',');
  simulate->add_option("--threads", sim.threads, "worker threads (default ORDCL_THREADS or all)");
  simulate->add_option("--csv", sim_csv, "write one row per parameter and estimator");
  simulate->add_option("--json", sim_json, "write the full report ('-' for stdout)");

  // shrinkage
  int sh_k = 6, sh_m = 3, sh_m1 = -1, sh_m2 = -1, sh_threads = 0;
  std::string sh_link = "logit", sh_csv;
  auto* shrink = app.add_subcommand("shrinkage", "ML and RB fitted probabilities for all 2 x k tables");
  with_config(shrink);
  shrink->add_option("--k", sh_k, "number of categories");
  shrink->add_option("--m", sh_m, "common row total");
  shrink->add_option("--m1", sh_m1, "first row total");
  shrink->add_option("--m2", sh_m2, "second row total");
  shrink->add_option("--link", sh_link, "logit, probit or cloglog");
  shrink->add_option("--threads", sh_threads, "worker threads (default ORDCL_THREADS or all)");
  shrink->add_option("--csv", sh_csv, "output CSV");

  std::vector<std::string> expanded;
  try {
    expanded = expand_config(args);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (fit->parsed()) {
      const Loaded in = load(fit_data);
      if (fit_method == "const-adjust") {
        err << "warning: constant count adjustment is not recommended; the estimate depends on "
               "how the data are grouped\n";
      }
      const FitResult result = run_fit(fit_method, in.spec, in.data, fit_control, fit_const);
      print_fit_table(result, out);
      json j = fit_to_json(result, fit_level);
      if (fit_method == "const-adjust") j["constant"] = fit_const;
      emit_json(j, fit_json, out);
      return result.on_boundary() ? kExitBoundary : kExitOk;
    }

    if (test->parsed()) {
      const Loaded in = load(test_data);
      const FitResult large = run_fit(test_method, in.spec, in.data, test_control, 0.0);
      json results = json::array();
      auto report = [&](const std::string& kind, const std::string& target, const TestResult& t) {
        out << kind << ' ' << target << ": statistic " << fmt(t.statistic, 4) << ", df " << t.df
            << ", p " << fmt(t.p_value, 4) << '\n';
        results.push_back(test_json(kind, target, t));
      };
      for (const auto& name : test_prop) {
        const int col = covariate_index(in.data, name);
        report("wald", name, wald_contrast_test(large, ContrastMatrix::proportionality(large, col)));
      }
      for (const auto& text : test_contrast) {
        report("wald", text, wald_contrast_test(large, parse_contrast(text, large)));
      }
      for (const auto& name : test_score) {
        const int col = covariate_index(in.data, name);
        ModelSpec small = in.spec;
        const auto it = std::find(small.partial_cols.begin(), small.partial_cols.end(), col);
        if (it == small.partial_cols.end()) {
          throw Error("score test needs '" + name + "' among the partial covariates");
        }
        small.partial_cols.erase(it);
        small.proportional_cols.push_back(col);
        const Model large_model = make_model(in.spec, in.data);
        const FitResult restricted = fit_rb(make_model(small, in.data), in.data, test_control);
        const ParamVector embedded =
            embed(restricted.estimates, proportional_embedding(restricted, large, col));
        const int df = large_model.design.d() - static_cast<int>(restricted.estimates.size());
        report("adjusted-score", name, adjusted_score_test(large_model, in.data, embedded, df));
      }
      emit_json(json{{"method", test_method}, {"tests", results}}, test_json_path, out);
      return kExitOk;
    }

    if (enumerate->parsed()) {
      if (m_opt->count() > 0 || (enumerate->count("--m1") == 0 && enumerate->count("--m2") == 0)) {
        en.m1 = en_m;
        en.m2 = en_m;
      }
      en.link = parse_link(en_link);
      en.beta_grid = parse_grid(en_beta);
      en.e_values = parse_grid(en_e);
      en.estimators = parse_estimators(en_est);
      const StudyReport report = run_enumeration(en);
      out << "tables: " << report.items << ", cells: " << report.cells.size()
          << ", diagnostics: " << report.diagnostics.size() << '\n';
      if (!en_csv.empty()) {
        std::ofstream f(en_csv);
        if (!f) throw Error("cannot write " + en_csv);
        write_report_csv(report, f);
      }
      json j = report_to_json(report);
      j["config"] = {{"k", en.k},           {"m1", en.m1},         {"m2", en.m2},
                     {"x1", en.x1},         {"x2", en.x2},         {"link", to_string(en.link)},
                     {"beta", en.beta_grid}, {"e", en.e_values},   {"level", en.ci_level}};
      emit_json(j, en_json, out);
      return kExitOk;
    }

    if (simulate->parsed()) {
      const Loaded in = load(sim_data);
      const FitResult truth = fit_ml(in.spec, in.data, sim.control);
      if (truth.on_boundary()) throw Error("the ML fit of the data is on the boundary");
      sim.spec = in.spec;
      sim.design = in.data;
      sim.truth = truth.estimates;
      sim.estimators = parse_estimators(sim_est);
      const StudyReport report = run_simulation(sim);
      out << "replicates: " << report.items << ", seed: " << sim.seed
          << ", diagnostics: " << report.diagnostics.size() << '\n';
      out << std::left << std::setw(10) << "Method" << std::setw(14) << "Parameter" << std::right
          << std::setw(10) << "Truth" << std::setw(10) << "Bias" << std::setw(10) << "MSE"
          << std::setw(10) << "Coverage" << std::setw(14) << "Bias2/Var %" << '\n';
      for (Estimator est : sim.estimators) {
        for (const auto& cell : report.cells) {
          const auto& m = cell.get(est);
          out << std::left << std::setw(10) << to_string(est) << std::setw(14) << cell.parameter
              << std::right << std::setw(10) << fmt(cell.beta) << std::setw(10) << fmt(m.bias)
              << std::setw(10) << fmt(m.mse) << std::setw(10) << fmt(m.coverage)
              << std::setw(14) << fmt(100.0 * m.bias * m.bias / m.variance) << '\n';
        }
      }
      if (!sim_csv.empty()) {
        std::ofstream f(sim_csv);
        if (!f) throw Error("cannot write " + sim_csv);
        write_report_csv(report, f);
      }
      json j = report_to_json(report);
      json truth_json = json::array();
      for (Eigen::Index t = 0; t < truth.estimates.size(); ++t) {
        truth_json.push_back({{"name", truth.names[t]}, {"value", truth.estimates[t]}});
      }
      j["truth"] = truth_json;
      emit_json(j, sim_json, out);
      return kExitOk;
    }

    if (shrink->parsed()) {
      const int m1 = sh_m1 > 0 ? sh_m1 : sh_m;
      const int m2 = sh_m2 > 0 ? sh_m2 : sh_m;
      const LinkFamily link = parse_link(sh_link);
      const auto records = shrinkage_scan(sh_k, m1, m2, link, sh_threads);
      const ShrinkageSummary s = summarize_shrinkage(records, sh_k, link);
      out << "tables: " << records.size() / (2 * static_cast<std::size_t>(sh_k))
          << ", records: " << records.size() << ", finite ML tables: " << s.tables << '\n'
          << "mean shrinkage: first " << fmt(s.first, 4) << ", last " << fmt(s.last, 4)
          << ", interior " << fmt(s.interior, 4) << '\n';
      if (!sh_csv.empty()) {
        std::ofstream f(sh_csv);
        if (!f) throw Error("cannot write " + sh_csv);
        write_shrinkage_csv(records, f);
      }
      return kExitOk;
    }
  } catch (const UndefinedEstimatorError& e) {
    err << "boundary: " << e.what() << '\n';
    return kExitBoundary;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace ordcl::cli
