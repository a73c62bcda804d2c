#pragma once

#include <string>
#include <vector>

#include "ordcl/model.hpp"
#include "ordcl_cli/csv.hpp"

namespace ordcl::cli {

enum class Layout { automatic, grouped, long_format };

Layout parse_layout(const std::string& token);

struct IngestOptions {
  /// automatic picks long when a response column is named, grouped otherwise.
  Layout layout = Layout::automatic;
  /// Covariate columns in model order. Empty means every column that is not
  /// a count, response or frequency column.
  std::vector<std::string> covariates;
  /// Grouped layout. Empty means the columns named y1, y2, ... in order.
  std::vector<std::string> count_columns;
  /// Long layout: category label column and optional frequency column.
  std::string response;
  std::string frequency;
  /// Long layout category order. Empty means the distinct labels, sorted
  /// numerically when they all parse as numbers and as text otherwise.
  std::vector<std::string> categories;
  /// Covariates replaced by (x - mean) / sd, computed over individual
  /// observations with the n - 1 divisor.
  std::vector<std::string> standardize;
};

struct Ingested {
  OrdinalData data;
  std::vector<std::string> categories;
};

/// Builds grouped ordinal data from a parsed table. Long input is aggregated
/// over identical covariate vectors in first-occurrence order. Errors name
/// the offending data row (1-based, header excluded).
Ingested ingest(const CsvTable& table, const IngestOptions& options);

Ingested ingest_csv(const std::string& path, const IngestOptions& options);

}  // namespace ordcl::cli
