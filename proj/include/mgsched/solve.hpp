#pragma once

// One-call driver: scenario -> CCP model -> chosen transformation ->
// branch and bound -> schedule.

#include "mgsched/milp/branch_and_bound.hpp"
#include "mgsched/scheduler_model.hpp"

namespace mgsched {

enum class DstMethod { Quantile, BigM };

inline const char* to_string(DstMethod m) {
  return m == DstMethod::Quantile ? "dst-quantile" : "dst-bigm";
}

struct DstResult {
  CcpModel model;
  MilpProblem problem;  // transformed MILP as handed to the solver
  MilpSolution milp;
  Schedule schedule;  // populated only when milp.x is usable
  bool has_schedule = false;
};

inline DstResult solve_dst(const Scenario& sc, DstMethod method,
                           const SolveOptions& opts = {}) {
  DstResult r;
  r.model = build_ccp_model(sc);
  r.problem = method == DstMethod::BigM ? transform_bigM(r.model)
                                        : transform_quantile(r.model);
  r.milp = milp::branch_and_bound(r.problem, opts);
  if (r.milp.status == SolveStatus::Optimal ||
      r.milp.status == SolveStatus::GapLimit ||
      r.milp.status == SolveStatus::NodeLimit ||
      r.milp.status == SolveStatus::TimeLimit) {
    if (!r.milp.x.empty()) {
      r.schedule = extract_schedule(r.model, r.milp.x);
      r.has_schedule = true;
    }
  }
  return r;
}

}  // namespace mgsched
