#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "ordcl/errors.hpp"
#include "ordcl/parallel.hpp"
#include "ordcl/studies.hpp"

namespace ordcl {

std::vector<ShrinkageRecord> shrinkage_scan(int k, int m1, int m2, LinkFamily link, int threads,
                                            const FitControl& control) {
  const std::vector<Table2xK> tables = enumerate_tables(k, m1, m2);
  ModelSpec spec;
  spec.link = link;
  spec.proportional_cols = {0};
  const double nan = std::numeric_limits<double>::quiet_NaN();

  std::vector<ShrinkageRecord> records(tables.size() * 2 * static_cast<std::size_t>(k));
  parallel_for(tables.size(), resolve_threads(threads), [&](std::size_t i) {
    const OrdinalData data = table_data(tables[i]);
    Matrix ml = Matrix::Constant(2, k, nan);
    Matrix rb = Matrix::Constant(2, k, nan);
    bool diverged = true;
    try {
      const FitResult fit = fit_ml(spec, data, control);
      ml = fit.fitted;
      diverged = false;
      for (BoundaryFlag flag : fit.flags) {
        if (flag == BoundaryFlag::diverging) diverged = true;
      }
    } catch (const Error&) {
    }
    try {
      rb = fit_rb(spec, data, control).fitted;
    } catch (const Error&) {
    }
    std::size_t at = i * 2 * static_cast<std::size_t>(k);
    for (int r = 0; r < 2; ++r) {
      for (int s = 0; s < k; ++s) {
        records[at++] = {static_cast<std::int64_t>(i), r, s + 1, ml(r, s), rb(r, s), diverged};
      }
    }
  });
  return records;
}

ShrinkageSummary summarize_shrinkage(const std::vector<ShrinkageRecord>& records, int k,
                                     LinkFamily link) {
  const double g0 = cdf(link, 0.0);
  auto toward = [](double from, double to, double target) {
    const double side = target - from;
    return side > 0.0 ? to - from : (side < 0.0 ? from - to : 0.0);
  };
  ShrinkageSummary out;
  double first = 0.0, last = 0.0, interior = 0.0;
  std::int64_t n_end = 0, n_interior = 0;
  std::int64_t previous = -1;
  for (const auto& rec : records) {
    if (rec.ml_diverged || !std::isfinite(rec.pi_ml) || !std::isfinite(rec.pi_rb)) continue;
    if (rec.table_id != previous) {
      ++out.tables;
      previous = rec.table_id;
    }
    if (rec.category == 1) {
      first += toward(rec.pi_ml, rec.pi_rb, g0);
      ++n_end;
    } else if (rec.category == k) {
      last += toward(rec.pi_ml, rec.pi_rb, 1.0 - g0);
    } else {
      interior += rec.pi_ml - rec.pi_rb;
      ++n_interior;
    }
  }
  if (n_end > 0) {
    out.first = first / static_cast<double>(n_end);
    out.last = last / static_cast<double>(n_end);
  }
  if (n_interior > 0) out.interior = interior / static_cast<double>(n_interior);
  return out;
}

void write_shrinkage_csv(const std::vector<ShrinkageRecord>& records, std::ostream& out) {
  out << "table_id,x_level,category,pi_ml,pi_rb,ml_diverged\n";
  out << std::setprecision(17);
  for (const auto& rec : records) {
    out << rec.table_id << ',' << rec.x_level << ',' << rec.category << ',';
    if (std::isfinite(rec.pi_ml)) out << rec.pi_ml;
    out << ',';
    if (std::isfinite(rec.pi_rb)) out << rec.pi_rb;
    out << ',' << (rec.ml_diverged ? 1 : 0) << '\n';
  }
}

}  // namespace ordcl
