#include "robustcap/lp.hpp"

#include <cmath>

#include "robustcap/errors.hpp"

namespace robustcap {

int LpProblem::add_var(const std::string& name, double lower, double upper, double obj,
                       const std::string& tag) {
  const int idx = static_cast<int>(vars.size());
  vars.push_back({name, lower, upper});
  objective.push_back(obj);
  tags[tag].push_back(idx);
  named[name] = idx;
  return idx;
}

void LpProblem::add_row(const std::string& name, std::vector<LpTerm> terms, Sense sense,
                        double rhs) {
  rows.push_back({name, std::move(terms), sense, rhs});
}

const std::vector<int>& LpProblem::tagged(const std::string& tag) const {
  static const std::vector<int> empty;
  auto it = tags.find(tag);
  return it == tags.end() ? empty : it->second;
}

int LpProblem::named_var(const std::string& key) const {
  auto it = named.find(key);
  return it == named.end() ? -1 : it->second;
}

void LpProblem::validate() const {
  if (objective.size() != vars.size())
    throw InvalidParameter("objective length does not match variable count");
  for (std::size_t j = 0; j < vars.size(); ++j) {
    const auto& v = vars[j];
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper)
      throw InvalidParameter("variable " + v.name + " has inconsistent bounds");
    if (!std::isfinite(objective[j]))
      throw InvalidParameter("variable " + v.name + " has non-finite objective");
  }
  for (const auto& row : rows) {
    if (row.terms.empty()) throw InvalidParameter("row " + row.name + " is empty");
    if (!std::isfinite(row.rhs)) throw InvalidParameter("row " + row.name + " has non-finite rhs");
    for (const auto& term : row.terms) {
      if (term.var < 0 || term.var >= static_cast<int>(vars.size()))
        throw InvalidParameter("row " + row.name + " references variable out of range");
      if (!std::isfinite(term.coef))
        throw InvalidParameter("row " + row.name + " has non-finite coefficient");
    }
  }
  std::vector<int> seen(vars.size(), 0);
  for (const auto& [tag, indices] : tags) {
    for (int idx : indices) {
      if (idx < 0 || idx >= static_cast<int>(vars.size()))
        throw InvalidParameter("tag " + tag + " references variable out of range");
      ++seen[idx];
    }
  }
  for (std::size_t j = 0; j < seen.size(); ++j) {
    if (seen[j] != 1)
      throw InvalidParameter("variable " + vars[j].name + " is not covered by exactly one tag");
  }
}

}  // namespace robustcap
