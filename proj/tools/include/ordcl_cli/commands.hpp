#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ordcl/estimation.hpp"
#include "ordcl/studies.hpp"

namespace ordcl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitBoundary = 2;

/// Entry point shared by the executable and the tests. args excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Machine-readable forms of library results.
nlohmann::json fit_to_json(const FitResult& fit, double level);
nlohmann::json report_to_json(const StudyReport& report);

/// Human-readable parameter table: estimate, standard error, Z and flag.
void print_fit_table(const FitResult& fit, std::ostream& out);

/// "lo:hi:n" (n equally spaced points, ends included) or a comma list.
std::vector<double> parse_grid(const std::string& text);

}  // namespace ordcl::cli
