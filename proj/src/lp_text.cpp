#include "robustcap/lp_text.hpp"

#include <charconv>
#include <cmath>
#include <cctype>
#include <map>
#include <sstream>
#include <vector>

#include "robustcap/errors.hpp"

namespace robustcap {

namespace {

std::string format_number(double v) {
  if (v == kInf) return "+inf";
  if (v == -kInf) return "-inf";
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string sanitize(const std::string& raw, std::size_t index) {
  std::string out;
  for (char c : raw) {
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_') ? c : '_';
  }
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0]))) out = "v" + out;
  if (out.size() > 200) out = out.substr(0, 180) + "_" + std::to_string(index);
  return out;
}

struct NameTable {
  std::map<std::string, int> used;
  std::vector<std::string> names;

  const std::string& assign(const std::string& raw) {
    std::string base = sanitize(raw, names.size());
    auto [it, fresh] = used.emplace(base, 1);
    if (!fresh) {
      std::string alt;
      do {
        alt = base + "__" + std::to_string(it->second++);
      } while (used.count(alt));
      used.emplace(alt, 1);
      names.push_back(alt);
    } else {
      names.push_back(base);
    }
    return names.back();
  }
};

void append_terms(std::string& out, const std::vector<LpTerm>& terms,
                  const std::vector<std::string>& names) {
  bool first = true;
  for (const auto& term : terms) {
    const double c = term.coef;
    if (first) {
      out += format_number(c) + " " + names[term.var];
      first = false;
    } else if (c < 0) {
      out += " - " + format_number(-c) + " " + names[term.var];
    } else {
      out += " + " + format_number(c) + " " + names[term.var];
    }
  }
}

}  // namespace

std::string export_lp_file(const LpProblem& problem) {
  problem.validate();
  NameTable vnames;
  for (std::size_t j = 0; j < problem.vars.size(); ++j) vnames.assign(problem.vars[j].name);
  NameTable rnames;
  for (std::size_t i = 0; i < problem.rows.size(); ++i) rnames.assign(problem.rows[i].name);

  std::string out;
  out += "\\ robustcap LP export v1\n";
  out += "Minimize\n obj:";
  std::vector<LpTerm> obj_terms;
  for (std::size_t j = 0; j < problem.objective.size(); ++j)
    if (problem.objective[j] != 0.0) obj_terms.push_back({static_cast<int>(j), problem.objective[j]});
  if (!obj_terms.empty()) {
    out += " ";
    append_terms(out, obj_terms, vnames.names);
  }
  out += "\nSubject To\n";
  for (std::size_t i = 0; i < problem.rows.size(); ++i) {
    const auto& row = problem.rows[i];
    out += " " + rnames.names[i] + ": ";
    append_terms(out, row.terms, vnames.names);
    switch (row.sense) {
      case Sense::Le: out += " <= "; break;
      case Sense::Ge: out += " >= "; break;
      case Sense::Eq: out += " = "; break;
    }
    out += format_number(row.rhs) + "\n";
  }
  out += "Bounds\n";
  for (std::size_t j = 0; j < problem.vars.size(); ++j) {
    const auto& v = problem.vars[j];
    if (v.lower == -kInf && v.upper == kInf)
      out += " " + vnames.names[j] + " free\n";
    else if (v.lower == v.upper)
      out += " " + vnames.names[j] + " = " + format_number(v.lower) + "\n";
    else
      out += " " + format_number(v.lower) + " <= " + vnames.names[j] + " <= " +
             format_number(v.upper) + "\n";
  }
  out += "End\n";
  return out;
}

namespace {

struct Token {
  std::string text;
};

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) {
        out.push_back(cur);
        cur.clear();
      }
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

bool parse_number(const std::string& s, double& out) {
  std::string t = s;
  if (t == "inf" || t == "+inf") {
    out = kInf;
    return true;
  }
  if (t == "-inf") {
    out = -kInf;
    return true;
  }
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (!t.empty() && t[0] == '+') ++begin;
  auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc() && res.ptr == end;
}

bool iequal(const std::string& a, const std::string& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  return true;
}

}  // namespace

LpProblem parse_lp_file(const std::string& text) {
  LpProblem problem;
  std::map<std::string, int> var_index;
  auto var_of = [&](const std::string& name) {
    auto it = var_index.find(name);
    if (it != var_index.end()) return it->second;
    const int idx = problem.add_var(name, 0.0, kInf, 0.0, "parsed");
    var_index.emplace(name, idx);
    return idx;
  };

  enum Section { kNone, kObjective, kRows, kBounds, kDone };
  Section section = kNone;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;

  auto fail = [&](const std::string& msg) -> void {
    throw SchemaError("lp parse error at line " + std::to_string(lineno) + ": " + msg);
  };

  // Parses "coef var [+|- coef var ...]" until a sense token or end.
  auto parse_terms = [&](const std::vector<std::string>& tok, std::size_t& pos,
                         std::vector<LpTerm>& terms) {
    double sign = 1.0;
    while (pos < tok.size()) {
      const std::string& t = tok[pos];
      if (t == "<=" || t == ">=" || t == "=") return;
      if (t == "+") {
        sign = 1.0;
        ++pos;
        continue;
      }
      if (t == "-") {
        sign = -1.0;
        ++pos;
        continue;
      }
      double coef;
      if (parse_number(t, coef)) {
        ++pos;
        if (pos >= tok.size()) fail("dangling coefficient");
        terms.push_back({var_of(tok[pos]), sign * coef});
      } else {
        terms.push_back({var_of(t), sign});
      }
      sign = 1.0;
      ++pos;
    }
  };

  while (std::getline(in, line)) {
    ++lineno;
    const auto comment = line.find('\\');
    if (comment != std::string::npos) line = line.substr(0, comment);
    auto tok = tokenize(line);
    if (tok.empty()) continue;

    if (iequal(tok[0], "minimize") || (tok.size() >= 2 && iequal(tok[0] + " " + tok[1], "subject to")) ||
        iequal(tok[0], "bounds") || iequal(tok[0], "end") || iequal(tok[0], "maximize")) {
      if (iequal(tok[0], "minimize"))
        section = kObjective;
      else if (iequal(tok[0], "maximize"))
        fail("maximization is not supported");
      else if (iequal(tok[0], "bounds"))
        section = kBounds;
      else if (iequal(tok[0], "end"))
        section = kDone;
      else
        section = kRows;
      continue;
    }

    switch (section) {
      case kObjective: {
        std::size_t pos = 0;
        if (!tok.empty() && tok[0].back() == ':') pos = 1;
        std::vector<LpTerm> terms;
        parse_terms(tok, pos, terms);
        for (const auto& term : terms) problem.objective[term.var] += term.coef;
        break;
      }
      case kRows: {
        std::size_t pos = 0;
        std::string name = "r" + std::to_string(problem.rows.size());
        if (!tok.empty() && tok[0].back() == ':') {
          name = tok[0].substr(0, tok[0].size() - 1);
          pos = 1;
        }
        std::vector<LpTerm> terms;
        parse_terms(tok, pos, terms);
        if (pos >= tok.size()) fail("constraint without sense");
        const std::string& s = tok[pos];
        Sense sense = s == "<=" ? Sense::Le : (s == ">=" ? Sense::Ge : Sense::Eq);
        ++pos;
        if (pos >= tok.size()) fail("constraint without rhs");
        double rhs;
        if (!parse_number(tok[pos], rhs)) fail("bad rhs: " + tok[pos]);
        if (terms.empty()) fail("constraint without terms");
        problem.add_row(name, std::move(terms), sense, rhs);
        break;
      }
      case kBounds: {
        if (tok.size() == 2 && iequal(tok[1], "free")) {
          const int j = var_of(tok[0]);
          problem.vars[j].lower = -kInf;
          problem.vars[j].upper = kInf;
        } else if (tok.size() == 3 && tok[1] == "=") {
          double v;
          if (!parse_number(tok[2], v)) fail("bad bound: " + tok[2]);
          const int j = var_of(tok[0]);
          problem.vars[j].lower = v;
          problem.vars[j].upper = v;
        } else if (tok.size() == 5 && tok[1] == "<=" && tok[3] == "<=") {
          double lo, hi;
          if (!parse_number(tok[0], lo) || !parse_number(tok[4], hi))
            fail("bad bounds line");
          const int j = var_of(tok[2]);
          problem.vars[j].lower = lo;
          problem.vars[j].upper = hi;
        } else if (tok.size() == 3 && (tok[1] == ">=" || tok[1] == "<=")) {
          double v;
          if (!parse_number(tok[2], v)) fail("bad bound: " + tok[2]);
          const int j = var_of(tok[0]);
          (tok[1] == ">=" ? problem.vars[j].lower : problem.vars[j].upper) = v;
        } else {
          fail("unrecognized bounds line");
        }
        break;
      }
      case kNone:
        fail("content before a section header");
        break;
      case kDone:
        fail("content after End");
        break;
    }
  }
  if (section != kDone) throw SchemaError("lp parse error: missing End marker");
  problem.validate();
  return problem;
}

}  // namespace robustcap
