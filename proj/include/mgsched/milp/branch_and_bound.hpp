#pragma once

// Branch and bound over the bounded-variable simplex, plus an exhaustive
// enumeration reference for small instances.
//
// Node order is best-bound with node id as the tie break; branching picks
// the most fractional integer variable (lowest index on ties). Children are
// re-solved with the dual simplex warm-started from the parent basis. All
// choices are deterministic, so repeated runs give identical results.
//
// When no incumbent exists the reported objective is +inf for minimization
// problems (-inf for maximization).

#include <chrono>
#include <cmath>
#include <memory>
#include <queue>
#include <vector>

#include "mgsched/milp/problem.hpp"
#include "mgsched/milp/simplex.hpp"

namespace mgsched::milp {

namespace detail {

inline std::vector<int> integer_vars(const MilpProblem& p) {
  std::vector<int> ints;
  for (int j = 0; j < static_cast<int>(p.vars.size()); ++j)
    if (p.vars[j].is_integer) ints.push_back(j);
  return ints;
}

// Fix integer variables to the rounded values of x and re-solve, giving an
// exactly integral candidate.
inline LpSolution fix_and_solve(SimplexSolver& solver, const MilpProblem& p,
                                const std::vector<int>& ints,
                                const std::vector<double>& x) {
  std::vector<double> lo(p.vars.size()), hi(p.vars.size());
  for (std::size_t j = 0; j < p.vars.size(); ++j) {
    lo[j] = p.vars[j].lo;
    hi[j] = p.vars[j].hi;
  }
  for (int j : ints) {
    double v = std::round(x[j]);
    v = std::clamp(v, std::ceil(p.vars[j].lo - 1e-9), std::floor(p.vars[j].hi + 1e-9));
    lo[j] = v;
    hi[j] = v;
  }
  return solver.solve(lo, hi);
}

}  // namespace detail

inline MilpSolution branch_and_bound(const MilpProblem& p, const SolveOptions& opts = {}) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(clock::now() - t0).count();
  };
  const double sense = p.minimize ? 1.0 : -1.0;  // work in minimization keys
  const auto key_of = [&](double obj) { return sense * obj; };
  const auto obj_of = [&](double key) { return sense * key; };
  const auto margin = [&](double inc_key) {
    return std::max(opts.abs_gap, opts.rel_gap * std::abs(inc_key));
  };

  MilpSolution out;
  SimplexSolver solver(p);
  const std::vector<int> ints = detail::integer_vars(p);

  struct Node {
    double bound_key;
    long id;
    std::shared_ptr<const std::vector<double>> lo, hi;
    std::shared_ptr<const SimplexSolver::BasisSnapshot> warm;
  };
  struct Order {
    bool operator()(const Node& a, const Node& b) const {
      if (a.bound_key != b.bound_key) return a.bound_key > b.bound_key;
      return a.id > b.id;
    }
  };
  std::priority_queue<Node, std::vector<Node>, Order> heap;

  auto root_lo = std::make_shared<std::vector<double>>(p.vars.size());
  auto root_hi = std::make_shared<std::vector<double>>(p.vars.size());
  for (std::size_t j = 0; j < p.vars.size(); ++j) {
    (*root_lo)[j] = p.vars[j].lo;
    (*root_hi)[j] = p.vars[j].hi;
  }
  long next_id = 0;
  heap.push(Node{-kInf, next_id++, root_lo, root_hi, nullptr});

  bool have_inc = false;
  double inc_key = kInf;
  std::vector<double> inc_x;
  double exit_open_key = kInf;  // min bound over still-open nodes at exit

  const auto try_incumbent = [&](const std::vector<double>& x) {
    LpSolution fixed = detail::fix_and_solve(solver, p, ints, x);
    if (fixed.status != SolveStatus::Optimal) return;
    const double k = key_of(fixed.objective);
    if (!have_inc || k < inc_key) {
      have_inc = true;
      inc_key = k;
      inc_x = fixed.x;
      for (int j : ints) inc_x[j] = std::round(inc_x[j]);
    }
  };

  SolveStatus stop = SolveStatus::Optimal;
  bool unbounded = false;
  while (!heap.empty()) {
    if (out.nodes >= opts.node_limit) {
      stop = SolveStatus::NodeLimit;
      exit_open_key = heap.top().bound_key;
      break;
    }
    if (elapsed() > opts.time_limit_s) {
      stop = SolveStatus::TimeLimit;
      exit_open_key = heap.top().bound_key;
      break;
    }
    Node node = heap.top();
    heap.pop();
    if (have_inc && node.bound_key >= inc_key - margin(inc_key)) {
      // Best-bound order: everything still open is within the gap.
      exit_open_key = node.bound_key;
      break;
    }
    ++out.nodes;

    LpSolution lp = node.warm ? solver.solve_warm(*node.lo, *node.hi, *node.warm)
                              : solver.solve(*node.lo, *node.hi);
    if (lp.status == SolveStatus::Infeasible) continue;
    if (lp.status == SolveStatus::Unbounded) {
      unbounded = true;
      break;
    }
    const double lp_key = key_of(lp.objective);
    if (have_inc && lp_key >= inc_key - margin(inc_key)) continue;

    int frac_var = -1;
    double frac_dist = opts.int_tol;
    for (int j : ints) {
      const double f = lp.x[j] - std::floor(lp.x[j]);
      const double dist = std::min(f, 1.0 - f);
      if (dist > frac_dist + 1e-15) {
        frac_dist = dist;
        frac_var = j;
      }
    }
    if (frac_var < 0) {
      try_incumbent(lp.x);
      continue;
    }
    if (!have_inc && out.nodes % 50 == 1) try_incumbent(lp.x);

    auto warm = std::make_shared<SimplexSolver::BasisSnapshot>(solver.snapshot());
    const double v = lp.x[frac_var];
    auto lo_dn = node.lo;
    auto hi_dn = std::make_shared<std::vector<double>>(*node.hi);
    (*hi_dn)[frac_var] = std::floor(v);
    heap.push(Node{lp_key, next_id++, lo_dn, hi_dn, warm});
    auto lo_up = std::make_shared<std::vector<double>>(*node.lo);
    auto hi_up = node.hi;
    (*lo_up)[frac_var] = std::ceil(v);
    heap.push(Node{lp_key, next_id++, lo_up, hi_up, warm});
  }

  out.wall_seconds = elapsed();
  if (unbounded && !have_inc) {
    out.status = SolveStatus::Unbounded;
    out.objective = obj_of(-kInf);
    out.bound = obj_of(-kInf);
    return out;
  }

  if (stop != SolveStatus::Optimal) {  // node or time limit hit
    out.status = stop;
    out.bound = obj_of(std::min(exit_open_key, inc_key));
    if (have_inc) {
      out.objective = obj_of(inc_key);
      out.x = inc_x;
    } else {
      out.objective = obj_of(kInf);
    }
    return out;
  }

  if (!have_inc) {
    out.status = SolveStatus::Infeasible;
    out.objective = obj_of(kInf);
    out.bound = obj_of(kInf);
    return out;
  }

  // Exhausted or gap-terminated with an incumbent.
  const double bound_key = std::min(exit_open_key, inc_key);
  const double gap = inc_key - bound_key;
  const double tight = std::max(1e-9, 1e-6 * std::abs(inc_key));
  out.status = (gap <= tight) ? SolveStatus::Optimal : SolveStatus::GapLimit;
  out.objective = obj_of(inc_key);
  out.x = inc_x;
  out.bound = obj_of(bound_key);
  return out;
}

// Exhaustive reference: enumerate every integer assignment and solve the
// continuous remainder. Intended for oracle checks on tiny instances;
// refuses instances with more than max_binaries integer variables (or an
// enumeration beyond ~4M assignments for wide general-integer ranges).
inline MilpSolution brute_force(const MilpProblem& p, int max_binaries = 20) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const double sense = p.minimize ? 1.0 : -1.0;

  MilpSolution out;
  SimplexSolver solver(p);
  const std::vector<int> ints = detail::integer_vars(p);
  if (static_cast<int>(ints.size()) > max_binaries)
    throw ParameterError("brute force refused: " + std::to_string(ints.size()) +
                         " integer variables exceed the limit of " +
                         std::to_string(max_binaries));

  constexpr long kComboLimit = 1L << 22;
  std::vector<long> vlo(ints.size()), vhi(ints.size()), cur(ints.size());
  long combos = 1;
  for (std::size_t k = 0; k < ints.size(); ++k) {
    const auto& v = p.vars[ints[k]];
    vlo[k] = static_cast<long>(std::ceil(v.lo - 1e-9));
    vhi[k] = static_cast<long>(std::floor(v.hi + 1e-9));
    if (vlo[k] > vhi[k]) {
      out.status = SolveStatus::Infeasible;
      out.objective = sense * kInf;
      out.bound = sense * kInf;
      return out;
    }
    const long span = vhi[k] - vlo[k] + 1;
    if (combos > kComboLimit / span)
      throw ParameterError("brute force refused: enumeration exceeds " +
                           std::to_string(kComboLimit) + " assignments");
    combos *= span;
    cur[k] = vlo[k];
  }

  std::vector<double> lo(p.vars.size()), hi(p.vars.size());
  for (std::size_t j = 0; j < p.vars.size(); ++j) {
    lo[j] = p.vars[j].lo;
    hi[j] = p.vars[j].hi;
  }

  bool have_best = false;
  double best_key = kInf;
  std::vector<double> best_x;
  for (long c = 0; c < combos; ++c) {
    for (std::size_t k = 0; k < ints.size(); ++k) {
      lo[ints[k]] = static_cast<double>(cur[k]);
      hi[ints[k]] = static_cast<double>(cur[k]);
    }
    LpSolution lp = solver.solve(lo, hi);
    ++out.nodes;
    if (lp.status == SolveStatus::Unbounded) {
      out.status = SolveStatus::Unbounded;
      out.objective = -sense * kInf;
      out.bound = out.objective;
      out.wall_seconds = std::chrono::duration<double>(clock::now() - t0).count();
      return out;
    }
    if (lp.status == SolveStatus::Optimal) {
      const double k = sense * lp.objective;
      if (!have_best || k < best_key) {
        have_best = true;
        best_key = k;
        best_x = lp.x;
        for (std::size_t i = 0; i < ints.size(); ++i)
          best_x[ints[i]] = static_cast<double>(cur[i]);
      }
    }
    // odometer increment, last variable fastest
    for (long k = static_cast<long>(ints.size()) - 1; k >= 0; --k) {
      if (++cur[k] <= vhi[k]) break;
      cur[k] = vlo[k];
    }
  }

  out.wall_seconds = std::chrono::duration<double>(clock::now() - t0).count();
  if (!have_best) {
    out.status = SolveStatus::Infeasible;
    out.objective = sense * kInf;
    out.bound = sense * kInf;
    return out;
  }
  out.status = SolveStatus::Optimal;
  out.objective = sense * best_key;
  out.x = best_x;
  out.bound = out.objective;
  return out;
}

}  // namespace mgsched::milp
