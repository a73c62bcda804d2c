#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ordcl/estimation.hpp"

namespace ordcl {

/// A 2 x k table with fixed row totals.
struct Table2xK {
  std::vector<int> first;
  std::vector<int> second;
};

/// Every pair of compositions of m1 and m2 into k non-negative parts, in
/// lexicographic order of (first, second).
std::vector<Table2xK> enumerate_tables(int k, int m1, int m2);

/// C(m1 + k - 1, k - 1) * C(m2 + k - 1, k - 1).
std::int64_t count_tables(int k, int m1, int m2);

/// Product of the two multinomial probabilities of `table` when
/// eta_rs = alpha_s - x_r beta and delta = (alpha_1..alpha_q, beta).
double table_probability(const Table2xK& table, LinkFamily link, const ParamVector& delta,
                         double x1 = -0.5, double x2 = 0.5);

/// The 2 x k data set behind a table.
OrdinalData table_data(const Table2xK& table, double x1 = -0.5, double x2 = 0.5);

/// el is the closed-form empirical-logit estimator, available for k = 2 only.
enum class Estimator { ml, bc, rb, el };

std::string to_string(Estimator estimator);
Estimator parse_estimator(const std::string& token);

struct EnumConfig {
  int k = 4;
  int m1 = 3;
  int m2 = 3;
  double x1 = -0.5;
  double x2 = 0.5;
  LinkFamily link = kLogit;
  std::vector<double> beta_grid;
  /// Cutpoints are e times q equally spaced points on [-1, 1].
  std::vector<double> e_values;
  std::vector<Estimator> estimators{Estimator::ml, Estimator::bc, Estimator::rb};
  double ci_level = 0.95;
  int threads = 0;
  FitControl control;
};

/// alpha = e * (q equally spaced points on [-1, 1]); for k = 4 this is e(-1, 0, 1).
Vector cutpoint_pattern(int k, double e);

struct EstimatorMetrics {
  Estimator estimator = Estimator::ml;
  /// ML and BC metrics condition on every slope of the ML fit being finite.
  bool conditional = false;
  double p_infinite = 0.0;
  double p_condition = 1.0;
  double bias = 0.0;
  double mse = 0.0;
  double variance = 0.0;
  double coverage = 0.0;
  /// Replicates that entered the metrics (simulation only).
  std::int64_t used = 0;
};

struct CellReport {
  std::string parameter;
  double beta = 0.0;  // true value
  double e = 0.0;     // cutpoint scale (enumeration only)
  std::vector<EstimatorMetrics> metrics;

  const EstimatorMetrics& get(Estimator estimator) const;
};

/// A per-item failure recorded without aborting a study.
struct Diagnostic {
  std::int64_t item = 0;
  std::string estimator;
  std::string message;
};

struct StudyReport {
  std::string kind;  // "enumeration" or "simulation"
  std::int64_t items = 0;
  std::optional<std::uint64_t> seed;
  std::vector<CellReport> cells;
  std::vector<Diagnostic> diagnostics;
};

/// One estimator's value for one table. `finite` is false for a diverging or
/// undefined estimate; `failed` marks a fit that threw.
struct TableFit {
  bool finite = false;
  bool failed = false;
  double beta = 0.0;
  double se = 0.0;
};

/// Fits every requested estimator to one table. ML and BC use the table with
/// all empty categories merged; RB merges interior empty runs only.
std::vector<TableFit> fit_table(const Table2xK& table, const EnumConfig& config,
                                std::vector<Diagnostic>* diagnostics = nullptr,
                                std::int64_t item = 0);

/// Exact bias, MSE, coverage and infinite-estimate probabilities over the
/// grid beta_grid x e_values. Each table is fitted once; cells only reweight.
StudyReport run_enumeration(const EnumConfig& config);

/// Same metrics computed by refitting for every cell (reference path for tests).
StudyReport run_enumeration_refit(const EnumConfig& config);

struct SymmetryViolation {
  double beta = 0.0;
  double e = 0.0;
  Estimator estimator = Estimator::ml;
  std::string quantity;
  double difference = 0.0;
};

/// Checks bias(beta) = -bias(-beta) and equality of MSE, coverage and
/// p_infinite at +-beta for every estimator and cutpoint scale.
std::vector<SymmetryViolation> symmetry_check(const StudyReport& report, double tol = 1e-8);

struct SimulationConfig {
  ModelSpec spec;
  /// Covariates and row totals of the simulated data; counts are ignored.
  OrdinalData design;
  ParamVector truth;
  int reps = 1000;
  std::uint64_t seed = 1;
  double ci_level = 0.95;
  std::vector<Estimator> estimators{Estimator::ml, Estimator::bc, Estimator::rb};
  int threads = 0;
  FitControl control;
};

/// Multinomial counts for every row of `design` under delta, drawn from a
/// generator keyed by (seed, replicate).
Matrix simulate_counts(const Model& model, const OrdinalData& design, const ParamVector& delta,
                       std::uint64_t seed, std::uint64_t replicate);

/// Monte-Carlo bias, MSE, variance and coverage of every slope parameter.
/// Replicates with a non-finite ML slope are excluded from ML and BC metrics.
StudyReport run_simulation(const SimulationConfig& config);

/// One CSV row per (cell, estimator).
void write_report_csv(const StudyReport& report, std::ostream& out);

struct ShrinkageRecord {
  std::int64_t table_id = 0;
  int x_level = 0;
  int category = 0;
  double pi_ml = 0.0;
  double pi_rb = 0.0;
  bool ml_diverged = false;
};

/// Fitted probabilities under ML and RB for every 2 x k table with row totals
/// (m1, m2). ML values of undefined fits are NaN.
std::vector<ShrinkageRecord> shrinkage_scan(int k, int m1, int m2, LinkFamily link = kLogit,
                                            int threads = 0, const FitControl& control = {});

/// Mean signed movement of RB fitted probabilities relative to ML over tables
/// with a finite ML fit: toward G(0) for the first category, toward 1 - G(0)
/// for the last, and toward zero (reported as ML minus RB) for the others.
/// Positive values mean shrinkage in the stated direction.
struct ShrinkageSummary {
  double first = 0.0;
  double last = 0.0;
  double interior = 0.0;
  std::int64_t tables = 0;
};

ShrinkageSummary summarize_shrinkage(const std::vector<ShrinkageRecord>& records, int k,
                                     LinkFamily link);

void write_shrinkage_csv(const std::vector<ShrinkageRecord>& records, std::ostream& out);

}  // namespace ordcl
