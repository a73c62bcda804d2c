#include "ordcl_cli/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <regex>
#include <set>

#include "ordcl/errors.hpp"

namespace ordcl::cli {

namespace {

bool parse_number(const std::string& text, double& out) {
  if (text.empty()) return false;
  try {
    std::size_t used = 0;
    out = std::stod(text, &used);
    return used == text.size();
  } catch (const std::exception&) {
    return false;
  }
}

double number_at(const CsvTable& table, std::size_t row, int col) {
  double v = 0.0;
  if (!parse_number(table.rows[row][col], v) || !std::isfinite(v)) {
    throw Error("data row " + std::to_string(row + 1) + ": column '" + table.header[col] +
                "' is not a finite number ('" + table.rows[row][col] + "')");
  }
  return v;
}

int require_column(const CsvTable& table, const std::string& name) {
  const int j = table.column(name);
  if (j < 0) throw Error("missing column '" + name + "'");
  return j;
}

std::vector<std::string> default_count_columns(const CsvTable& table) {
  static const std::regex pattern("y([0-9]+)");
  std::map<int, std::string> found;
  for (const auto& name : table.header) {
    std::smatch m;
    if (std::regex_match(name, m, pattern)) found[std::stoi(m[1])] = name;
  }
  std::vector<std::string> out;
  for (int s = 1; found.count(s); ++s) out.push_back(found[s]);
  return out;
}

std::vector<std::string> default_categories(const CsvTable& table, int col) {
  std::set<std::string> labels;
  for (const auto& row : table.rows) labels.insert(row[col]);
  std::vector<std::string> out(labels.begin(), labels.end());
  const bool numeric = std::all_of(out.begin(), out.end(), [](const std::string& s) {
    double v;
    return parse_number(s, v);
  });
  if (numeric) {
    std::sort(out.begin(), out.end(),
              [](const std::string& a, const std::string& b) { return std::stod(a) < std::stod(b); });
  }
  return out;
}

void standardize(Matrix& x, const Vector& weights, const std::vector<std::string>& names,
                 const std::vector<std::string>& which) {
  for (const auto& name : which) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw Error("cannot standardize '" + name + "': not a covariate");
    const auto j = static_cast<Eigen::Index>(it - names.begin());
    const double n = weights.sum();
    if (!(n > 1.0)) throw Error("cannot standardize '" + name + "' with fewer than two observations");
    const double mean = weights.dot(x.col(j)) / n;
    const double ss = weights.dot((x.col(j).array() - mean).square().matrix());
    const double sd = std::sqrt(ss / (n - 1.0));
    if (!(sd > 0.0)) throw Error("cannot standardize constant column '" + name + "'");
    x.col(j) = (x.col(j).array() - mean) / sd;
  }
}

}  // namespace

Layout parse_layout(const std::string& token) {
  if (token == "auto" || token.empty()) return Layout::automatic;
  if (token == "grouped") return Layout::grouped;
  if (token == "long") return Layout::long_format;
  throw Error("unknown layout '" + token + "' (expected auto, grouped or long)");
}

Ingested ingest(const CsvTable& table, const IngestOptions& options) {
  Layout layout = options.layout;
  if (layout == Layout::automatic) {
    layout = options.response.empty() ? Layout::grouped : Layout::long_format;
  }

  std::set<std::string> reserved;
  std::vector<std::string> counts;
  if (layout == Layout::grouped) {
    counts = options.count_columns.empty() ? default_count_columns(table) : options.count_columns;
    if (counts.size() < 2) throw Error("grouped input needs at least two count columns");
    reserved.insert(counts.begin(), counts.end());
  } else {
    if (options.response.empty()) throw Error("long input needs a response column");
    reserved.insert(options.response);
    if (!options.frequency.empty()) reserved.insert(options.frequency);
  }

  std::vector<std::string> covariates = options.covariates;
  if (covariates.empty()) {
    for (const auto& name : table.header) {
      if (!reserved.count(name)) covariates.push_back(name);
    }
  }
  std::vector<int> cov_cols;
  for (const auto& name : covariates) cov_cols.push_back(require_column(table, name));

  const auto n = static_cast<Eigen::Index>(table.rows.size());
  const auto p = static_cast<Eigen::Index>(cov_cols.size());
  Matrix x(n, p);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index j = 0; j < p; ++j) x(r, j) = number_at(table, r, cov_cols[j]);
  }

  Ingested out;
  Matrix y;
  if (layout == Layout::grouped) {
    std::vector<int> cols;
    for (const auto& name : counts) cols.push_back(require_column(table, name));
    y.resize(n, static_cast<Eigen::Index>(cols.size()));
    for (Eigen::Index r = 0; r < n; ++r) {
      for (std::size_t s = 0; s < cols.size(); ++s) {
        const double v = number_at(table, r, cols[s]);
        if (v < 0.0) {
          throw Error("data row " + std::to_string(r + 1) + ": negative count in '" + counts[s] + "'");
        }
        y(r, static_cast<Eigen::Index>(s)) = v;
      }
    }
    out.categories = counts;
  } else {
    const int rcol = require_column(table, options.response);
    const int fcol = options.frequency.empty() ? -1 : require_column(table, options.frequency);
    out.categories =
        options.categories.empty() ? default_categories(table, rcol) : options.categories;
    if (out.categories.size() < 2) throw Error("response has fewer than two categories");
    std::map<std::string, int> lookup;
    for (std::size_t s = 0; s < out.categories.size(); ++s) lookup[out.categories[s]] = static_cast<int>(s);
    y = Matrix::Zero(n, static_cast<Eigen::Index>(out.categories.size()));
    for (Eigen::Index r = 0; r < n; ++r) {
      const auto it = lookup.find(table.rows[r][rcol]);
      if (it == lookup.end()) {
        throw Error("data row " + std::to_string(r + 1) + ": unknown category label '" +
                    table.rows[r][rcol] + "'");
      }
      const double f = fcol < 0 ? 1.0 : number_at(table, r, fcol);
      if (f < 0.0) throw Error("data row " + std::to_string(r + 1) + ": negative frequency");
      y(r, it->second) = f;
    }
  }

  standardize(x, y.rowwise().sum(), covariates, options.standardize);
  OrdinalData data(std::move(x), std::move(y), covariates);
  out.data = layout == Layout::long_format ? aggregate(data) : data;
  return out;
}

Ingested ingest_csv(const std::string& path, const IngestOptions& options) {
  return ingest(read_csv_file(path), options);
}

}  // namespace ordcl::cli
