#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "robustcap/types.hpp"

namespace robustcap {

/// Reads an hourly demand series from CSV with columns hour,demand_mw.
/// Hours must run 0..H-1; values must be finite and >= 0. Errors carry
/// the offending row number.
std::vector<double> load_demand_csv(const std::string& path);
std::vector<double> read_demand_csv(std::istream& in, const std::string& origin);

/// Reads one scenario from CSV with columns hour,cf_<tech>,... and binds
/// the shared demand series to it. When a catalog is given, the file's
/// columns must cover exactly its supply technologies.
Scenario load_scenario_csv(const std::string& path, const std::vector<double>& demand,
                           const std::string& year_id, const TechnologyCatalog* catalog = nullptr);
Scenario read_scenario_csv(std::istream& in, const std::string& origin,
                           const std::vector<double>& demand, const std::string& year_id,
                           const TechnologyCatalog* catalog = nullptr);

/// Full-precision writers; reading the output back reproduces the data.
std::string scenario_csv_text(const Scenario& scenario);
std::string demand_csv_text(const std::vector<double>& demand);
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

/// Shortest round-trip decimal form of v (to_chars).
std::string format_full(double v);
/// Fixed human-readable form with six significant digits.
std::string format_sig6(double v);

std::string path_stem(const std::string& path);

}  // namespace robustcap
