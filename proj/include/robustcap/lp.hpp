#pragma once

#include <limits>
#include <map>
#include <string>
#include <vector>

namespace robustcap {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense : char { Le = 'L', Ge = 'G', Eq = 'E' };

struct LpVariable {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
};

struct LpTerm {
  int var = 0;
  double coef = 0.0;
};

struct LpRow {
  std::string name;
  std::vector<LpTerm> terms;
  Sense sense = Sense::Ge;
  double rhs = 0.0;
};

/// A linear program in the builder's canonical layout. Variables carry
/// group tags (x, storage_el, storage_h2, conv_in, conv_out, shed, gap,
/// sigma) so solutions can be unpacked without knowledge of variable order.
struct LpProblem {
  std::vector<LpVariable> vars;
  std::vector<double> objective;  ///< minimize; aligned with vars
  std::vector<LpRow> rows;
  std::map<std::string, std::vector<int>> tags;  ///< group tag -> variable indices
  std::map<std::string, int> named;              ///< e.g. "x:wind" -> index

  int add_var(const std::string& name, double lower, double upper, double obj,
              const std::string& tag);
  void add_row(const std::string& name, std::vector<LpTerm> terms, Sense sense, double rhs);

  std::size_t num_vars() const { return vars.size(); }
  std::size_t num_rows() const { return rows.size(); }

  const std::vector<int>& tagged(const std::string& tag) const;
  int named_var(const std::string& key) const;  ///< -1 when absent

  /// Structural well-formedness: indices in range, lower <= upper, no
  /// empty rows, finite rhs, and group tags partitioning the variables.
  /// Throws InvalidParameter on violation.
  void validate() const;
};

}  // namespace robustcap
