#pragma once

// Fixed-format MPS export. Row and column names are mangled to fit the
// 8-character fields (R0000001 / C0000001); a sidecar ".names" file maps
// internal names to the mangled ones, one "internal<TAB>mps" pair per line.
// Numbers use the shortest exact representation when it fits the
// 12-character value field and scientific notation otherwise.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "mgsched/milp/problem.hpp"

namespace mgsched::milp {

namespace detail {

inline std::string mps_number(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, res.ptr);
  if (s.size() <= 12) return s;
  std::snprintf(buf, sizeof(buf), "%.5E", v);
  return std::string(buf);
}

// Columns (1-based): indicator 2-3, name 5-12, name 15-22, value 25-36,
// name 40-47, value 50-61.
inline std::string mps_line(const std::string& f1, const std::string& f2,
                            const std::string& f3 = "", const std::string& f4 = "",
                            const std::string& f5 = "", const std::string& f6 = "") {
  std::string line(61, ' ');
  const auto put = [&line](std::size_t pos, const std::string& s) {
    for (std::size_t i = 0; i < s.size() && pos + i < line.size(); ++i)
      line[pos + i] = s[i];
  };
  put(1, f1);
  put(4, f2);
  put(14, f3);
  put(24, f4);
  put(39, f5);
  put(49, f6);
  while (!line.empty() && line.back() == ' ') line.pop_back();
  return line;
}

inline std::string seq_name(char prefix, int idx) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%c%07d", prefix, idx + 1);
  return std::string(buf);
}

}  // namespace detail

inline void write_mps(const MilpProblem& p, std::ostream& mps, std::ostream& names) {
  using detail::mps_line;
  using detail::mps_number;
  using detail::seq_name;
  p.validate();

  const int n = static_cast<int>(p.vars.size());
  const int m = static_cast<int>(p.rows.size());
  const double sense = p.minimize ? 1.0 : -1.0;
  if (!p.minimize)
    mps << "* maximization problem: objective coefficients negated\n";

  std::vector<std::string> rname(m), cname(n);
  for (int i = 0; i < m; ++i) rname[i] = seq_name('R', i);
  for (int j = 0; j < n; ++j) cname[j] = seq_name('C', j);
  names << "objective\tCOST\n";
  for (int i = 0; i < m; ++i) names << p.rows[i].name << '\t' << rname[i] << '\n';
  for (int j = 0; j < n; ++j) names << p.vars[j].name << '\t' << cname[j] << '\n';

  mps << mps_line("", "NAME", "", "MGSCHED") << '\n';
  mps << "ROWS\n";
  mps << mps_line("N", "COST") << '\n';
  for (int i = 0; i < m; ++i) {
    const char* rel = p.rows[i].rel == Relation::LessEq      ? "L"
                      : p.rows[i].rel == Relation::GreaterEq ? "G"
                                                             : "E";
    mps << mps_line(rel, rname[i]) << '\n';
  }

  // Column-major entry lists.
  std::vector<std::vector<std::pair<int, double>>> col_rows(n);
  for (int i = 0; i < m; ++i)
    for (const auto& [j, c] : p.rows[i].coeffs)
      if (c != 0.0) col_rows[j].push_back({i, c});

  mps << "COLUMNS\n";
  bool in_int = false;
  int marker_id = 0;
  for (int j = 0; j < n; ++j) {
    if (p.vars[j].is_integer != in_int) {
      in_int = p.vars[j].is_integer;
      mps << mps_line("", "MK" + std::to_string(marker_id++), "'MARKER'", "",
                      in_int ? "'INTORG'" : "'INTEND'")
          << '\n';
    }
    const double obj = sense * p.objective[j];
    bool wrote = false;
    if (obj != 0.0) {
      mps << mps_line("", cname[j], "COST", mps_number(obj)) << '\n';
      wrote = true;
    }
    for (const auto& [i, c] : col_rows[j]) {
      mps << mps_line("", cname[j], rname[i], mps_number(c)) << '\n';
      wrote = true;
    }
    if (!wrote)  // declare the column even if it touches nothing
      mps << mps_line("", cname[j], "COST", "0") << '\n';
  }
  if (in_int) mps << mps_line("", "MK" + std::to_string(marker_id++), "'MARKER'", "", "'INTEND'") << '\n';

  mps << "RHS\n";
  if (p.objective_offset != 0.0)
    mps << mps_line("", "RHS1", "COST", mps_number(-sense * p.objective_offset)) << '\n';
  for (int i = 0; i < m; ++i)
    if (p.rows[i].rhs != 0.0)
      mps << mps_line("", "RHS1", rname[i], mps_number(p.rows[i].rhs)) << '\n';

  mps << "BOUNDS\n";
  for (int j = 0; j < n; ++j) {
    const auto& v = p.vars[j];
    if (v.lo == v.hi) {
      mps << mps_line("FX", "BND1", cname[j], mps_number(v.lo)) << '\n';
      continue;
    }
    if (std::isfinite(v.lo))
      mps << mps_line("LO", "BND1", cname[j], mps_number(v.lo)) << '\n';
    else
      mps << mps_line("MI", "BND1", cname[j]) << '\n';
    if (std::isfinite(v.hi))
      mps << mps_line("UP", "BND1", cname[j], mps_number(v.hi)) << '\n';
    else
      mps << mps_line("PL", "BND1", cname[j]) << '\n';
  }
  mps << "ENDATA\n";
}

inline void export_mps(const MilpProblem& p, const std::string& path) {
  std::ofstream mps(path);
  if (!mps) throw Error("cannot open '" + path + "' for writing");
  std::ofstream names(path + ".names");
  if (!names) throw Error("cannot open '" + path + ".names' for writing");
  write_mps(p, mps, names);
  if (!mps.good() || !names.good()) throw Error("short write while exporting '" + path + "'");
}

}  // namespace mgsched::milp
