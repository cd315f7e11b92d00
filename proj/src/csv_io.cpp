#include "robustcap/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "robustcap/errors.hpp"

namespace robustcap {

std::string format_full(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_sig6(double v) {
  char buf[48];
  const int len = std::snprintf(buf, sizeof(buf), "%.6g", v);
  return std::string(buf, buf + len);
}

std::string path_stem(const std::string& path) {
  std::size_t slash = path.find_last_of("/\\");
  std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
  const std::size_t dot = name.find_last_of('.');
  if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
  return name;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_cell(const std::string& cell, const std::string& origin, int lineno,
                  const std::string& what) {
  double v = 0.0;
  const char* begin = cell.data();
  const char* end = cell.data() + cell.size();
  auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v))
    throw SchemaError(origin + ": bad " + what + " at row " + std::to_string(lineno) + ": '" +
                      cell + "'");
  return v;
}

}  // namespace

std::vector<double> read_demand_csv(std::istream& in, const std::string& origin) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError(origin + ": missing header row");
  const auto header = split_csv_line(line);
  if (header.size() != 2 || header[0] != "hour" || header[1] != "demand_mw")
    throw SchemaError(origin + ": expected header 'hour,demand_mw'");
  std::vector<double> demand;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 2)
      throw SchemaError(origin + ": expected 2 columns at row " + std::to_string(lineno));
    const double hour = parse_cell(cells[0], origin, lineno, "hour");
    if (hour != static_cast<double>(demand.size()))
      throw SchemaError(origin + ": hours must run 0..H-1, got " + cells[0] + " at row " +
                        std::to_string(lineno));
    const double d = parse_cell(cells[1], origin, lineno, "demand");
    if (d < 0.0)
      throw SchemaError(origin + ": negative demand at row " + std::to_string(lineno));
    demand.push_back(d);
  }
  if (demand.empty()) throw SchemaError(origin + ": no data rows");
  return demand;
}

std::vector<double> load_demand_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open demand file: " + path);
  return read_demand_csv(in, path);
}

Scenario read_scenario_csv(std::istream& in, const std::string& origin,
                           const std::vector<double>& demand, const std::string& year_id,
                           const TechnologyCatalog* catalog) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError(origin + ": missing header row");
  const auto header = split_csv_line(line);
  if (header.empty() || header[0] != "hour")
    throw SchemaError(origin + ": first column must be 'hour'");
  std::vector<std::string> techs;
  for (std::size_t c = 1; c < header.size(); ++c) {
    const std::string& h = header[c];
    if (h.rfind("cf_", 0) != 0)
      throw SchemaError(origin + ": column '" + h + "' must be named cf_<technology>");
    techs.push_back(h.substr(3));
  }
  if (techs.empty()) throw SchemaError(origin + ": no capacity-factor columns");
  if (catalog) {
    for (const auto& tech : techs) {
      if (!catalog->has(tech) || catalog->at(tech).kind != TechKind::Supply)
        throw SchemaError(origin + ": column cf_" + tech +
                          " does not match a supply technology in the catalog");
    }
    for (const auto& id : catalog->supply_ids()) {
      if (std::find(techs.begin(), techs.end(), id) == techs.end())
        throw SchemaError(origin + ": missing column cf_" + id);
    }
  }

  Scenario scenario;
  scenario.year_id = year_id;
  for (const auto& tech : techs) scenario.capacity_factors[tech] = {};

  int lineno = 1;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != techs.size() + 1)
      throw SchemaError(origin + ": expected " + std::to_string(techs.size() + 1) +
                        " columns at row " + std::to_string(lineno));
    const double hour = parse_cell(cells[0], origin, lineno, "hour");
    if (hour != static_cast<double>(rows))
      throw SchemaError(origin + ": hours must run 0..H-1, got " + cells[0] + " at row " +
                        std::to_string(lineno));
    for (std::size_t c = 0; c < techs.size(); ++c) {
      const double v = parse_cell(cells[c + 1], origin, lineno, "capacity factor");
      if (v < 0.0 || v > 1.0)
        throw SchemaError(origin + ": capacity factor outside [0,1] at row " +
                          std::to_string(lineno) + ", column cf_" + techs[c]);
      scenario.capacity_factors[techs[c]].push_back(v);
    }
    ++rows;
  }
  if (rows == 0) throw SchemaError(origin + ": no data rows");
  scenario.horizon = rows;
  if (demand.size() != rows)
    throw SchemaError(origin + ": horizon " + std::to_string(rows) +
                      " does not match demand series length " + std::to_string(demand.size()));
  scenario.demand = demand;
  return scenario;
}

Scenario load_scenario_csv(const std::string& path, const std::vector<double>& demand,
                           const std::string& year_id, const TechnologyCatalog* catalog) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open scenario file: " + path);
  return read_scenario_csv(in, path, demand, year_id, catalog);
}

std::string scenario_csv_text(const Scenario& scenario) {
  std::string out = "hour";
  for (const auto& [id, series] : scenario.capacity_factors) out += ",cf_" + id;
  out += "\n";
  for (std::size_t t = 0; t < scenario.horizon; ++t) {
    out += std::to_string(t);
    for (const auto& [id, series] : scenario.capacity_factors) out += "," + format_full(series[t]);
    out += "\n";
  }
  return out;
}

std::string demand_csv_text(const std::vector<double>& demand) {
  std::string out = "hour,demand_mw\n";
  for (std::size_t t = 0; t < demand.size(); ++t)
    out += std::to_string(t) + "," + format_full(demand[t]) + "\n";
  return out;
}

}  // namespace robustcap
