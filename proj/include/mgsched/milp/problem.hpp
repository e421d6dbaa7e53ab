#pragma once

// Plain value representation of a mixed-integer linear program plus the
// solution/option records shared by the LP and branch-and-bound layers.

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "mgsched/common.hpp"

namespace mgsched::milp {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { LessEq, Equal, GreaterEq };

struct Variable {
  std::string name;
  double lo = 0.0;
  double hi = kInf;
  bool is_integer = false;
};

struct LinearRow {
  std::string name;
  std::vector<std::pair<int, double>> coeffs;  // (variable index, coefficient)
  Relation rel = Relation::LessEq;
  double rhs = 0.0;
};

struct MilpProblem {
  std::vector<Variable> vars;
  std::vector<LinearRow> rows;
  std::vector<double> objective;  // aligned with vars
  double objective_offset = 0.0;
  bool minimize = true;

  int add_var(std::string name, double lo, double hi, bool is_integer,
              double obj_coeff = 0.0) {
    vars.push_back({std::move(name), lo, hi, is_integer});
    objective.push_back(obj_coeff);
    return static_cast<int>(vars.size()) - 1;
  }

  void add_row(std::string name, std::vector<std::pair<int, double>> coeffs,
               Relation rel, double rhs) {
    rows.push_back({std::move(name), std::move(coeffs), rel, rhs});
  }

  void validate() const {
    const int n = static_cast<int>(vars.size());
    if (objective.size() != vars.size())
      throw ParameterError("objective length must match variable count");
    for (const auto& v : vars) {
      if (v.lo > v.hi) throw ParameterError("variable '" + v.name + "' has empty bound box");
      if (v.is_integer && !(std::isfinite(v.lo) && std::isfinite(v.hi)))
        throw ParameterError("integer variable '" + v.name + "' must have finite bounds");
    }
    for (const auto& r : rows)
      for (const auto& [j, c] : r.coeffs) {
        if (j < 0 || j >= n)
          throw ParameterError("row '" + r.name + "' references unknown variable");
        (void)c;
      }
  }
};

enum class SolveStatus {
  Optimal,
  Infeasible,
  Unbounded,
  GapLimit,
  NodeLimit,
  TimeLimit,
};

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::GapLimit: return "gap_limit";
    case SolveStatus::NodeLimit: return "node_limit";
    case SolveStatus::TimeLimit: return "time_limit";
  }
  return "unknown";
}

struct LpSolution {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;          // includes the offset, original sense
  std::vector<double> x;           // structural variable values
  int iterations = 0;
};

struct MilpSolution {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;  // incumbent objective, original sense
  std::vector<double> x;
  double bound = 0.0;      // proved bound on the optimum, original sense
  long nodes = 0;
  double wall_seconds = 0.0;
};

struct SolveOptions {
  double int_tol = 1e-6;    // integrality tolerance
  double rel_gap = 1e-6;    // relative optimality gap
  double abs_gap = 1e-9;    // absolute optimality gap
  long node_limit = 20'000'000;
  double time_limit_s = 1e9;
};

// Largest row violation of a candidate point; used to audit every solution
// the solvers hand back.
inline double max_row_residual(const MilpProblem& p,
                               const std::vector<double>& x) {
  double worst = 0.0;
  for (const auto& r : p.rows) {
    double lhs = 0.0;
    for (const auto& [j, c] : r.coeffs) lhs += c * x[j];
    double viol = 0.0;
    switch (r.rel) {
      case Relation::LessEq: viol = lhs - r.rhs; break;
      case Relation::GreaterEq: viol = r.rhs - lhs; break;
      case Relation::Equal: viol = std::abs(lhs - r.rhs); break;
    }
    worst = std::max(worst, viol);
  }
  for (std::size_t j = 0; j < p.vars.size(); ++j) {
    worst = std::max(worst, p.vars[j].lo - x[j]);
    worst = std::max(worst, x[j] - p.vars[j].hi);
  }
  return worst;
}

}  // namespace mgsched::milp
