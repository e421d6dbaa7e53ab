#pragma once

// Chance-constrained day-ahead scheduling model and its two exact
// deterministic transformations.
//
// The model commits microturbine units, dispatches storage and controllable
// load, and requires per-period spinning reserve to cover equivalent-load
// (load minus renewables) deviations above the mean with confidence alpha.
// The chance constraint is made solvable either by the big-M binary encoding
// over the discretized equivalent-load law, or by the per-period quantile
// reduction; both produce the same optimal objective.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mgsched/common.hpp"
#include "mgsched/milp/problem.hpp"
#include "mgsched/sampling.hpp"
#include "mgsched/scenario.hpp"
#include "mgsched/seqops.hpp"

namespace mgsched {

using milp::LinearRow;
using milp::MilpProblem;
using milp::MilpSolution;
using milp::Relation;
using milp::SolveOptions;
using milp::SolveStatus;

struct PeriodData {
  ProbSeq el_seq;         // equivalent-load law, nonnegative support
  double el_expect = 0.0; // linear mean E[load] - E[wind] - E[pv], kW
  double cnload_max = 0.0;
};

struct CcpModel {
  int horizon = 0; // periods, 1 h each
  std::vector<MtUnit> units;
  EssParams ess;
  std::vector<PeriodData> periods;
  double alpha = 0.0;
  double step_q = 0.0;
  double cnload_price = 0.0;
  ScenarioFlags flags;

  void validate() const {
    if (horizon < 1) throw ParameterError("CcpModel: horizon must be >= 1");
    if (!(alpha > 0.0 && alpha <= 1.0))
      throw ParameterError("CcpModel: alpha must be in (0, 1]");
    if (!(step_q > 0.0)) throw ParameterError("CcpModel: step_q must be > 0");
    if (units.empty()) throw ParameterError("CcpModel: no units");
    if (periods.size() != static_cast<std::size_t>(horizon))
      throw ParameterError("CcpModel: periods size != horizon");
    for (const auto& u : units) u.validate("units");
    ess.validate("ess");
    for (const auto& pd : periods) {
      pd.el_seq.validate();
      if (pd.el_seq.step_q != step_q)
        throw StepMismatchError("CcpModel: period sequence step != step_q");
      if (pd.cnload_max < 0.0)
        throw ParameterError("CcpModel: cnload_max must be >= 0");
    }
  }
};

// E[P^EL] by linearity of expectation; can go negative when renewables
// outproduce load on average, unlike the mean of the folded sequence.
inline double expected_equivalent_load(const ProbSeq& d, const ProbSeq& a,
                                       const ProbSeq& b) {
  check_steps(d, a);
  check_steps(d, b);
  return expectation(d) - expectation(a) - expectation(b);
}

inline CcpModel build_ccp_model(const Scenario& sc) {
  sc.validate();
  CcpModel m;
  m.horizon = sc.horizon;
  m.units = sc.units;
  m.ess = sc.ess;
  m.alpha = sc.alpha;
  m.step_q = sc.step_q;
  m.cnload_price = sc.cnload_price;
  m.flags = sc.flags;
  m.periods.resize(sc.horizon);
  for (int t = 0; t < sc.horizon; ++t) {
    const ProbSeq d = discretize(sc.load_dist(t), sc.step_q);
    const ProbSeq a = discretize(sc.wind_dist(t), sc.step_q);
    const ProbSeq b = discretize(sc.pv_dist(t), sc.step_q);
    PeriodData& pd = m.periods[t];
    pd.el_seq = equivalent_load_seq(d, a, b);
    pd.el_expect = expected_equivalent_load(d, a, b);
    pd.cnload_max = sc.cnload_max[t];
  }
  return m;
}

// Available ESS spinning reserve: limited by deliverable energy above c_min
// over one hour and by the unused share of the discharge rate.
inline double ess_reserve_cap(double soc, double p_dc, const EssParams& e) {
  if (!(soc >= e.c_min - 1e-9 && soc <= e.c_max + 1e-9))
    throw ParameterError("ess_reserve_cap: soc outside [c_min, c_max]");
  if (!(p_dc >= -1e-9 && p_dc <= e.p_dc_max + 1e-9))
    throw ParameterError("ess_reserve_cap: p_dc outside [0, p_dc_max]");
  const double energy_cap = e.eta_dc * (std::max(soc, e.c_min) - e.c_min);
  const double rate_cap = e.p_dc_max - std::min(p_dc, e.p_dc_max);
  return std::min(energy_cap, std::max(rate_cap, 0.0));
}

// Column layout of the deterministic core. Per-period block of
// [p_mt, u, s, r_mt] x units then [p_ch, p_dc, p_cn, r_ess]; SOC variables
// soc(1..T) follow, then optional exclusivity binaries; transform-specific
// variables (big-M W binaries) are appended after the core.
struct VarLayout {
  int n = 0;
  int T = 0;
  bool excl = false;

  int block() const { return 4 * n + 4; }
  int p_mt(int t, int k) const { return t * block() + k; }
  int u(int t, int k) const { return t * block() + n + k; }
  int s(int t, int k) const { return t * block() + 2 * n + k; }
  int r_mt(int t, int k) const { return t * block() + 3 * n + k; }
  int p_ch(int t) const { return t * block() + 4 * n; }
  int p_dc(int t) const { return t * block() + 4 * n + 1; }
  int p_cn(int t) const { return t * block() + 4 * n + 2; }
  int r_ess(int t) const { return t * block() + 4 * n + 3; }
  int soc(int t) const { return T * block() + (t - 1); }  // t in 1..T
  int y_ess(int t) const { return T * block() + T + t; }
  int core_count() const { return T * block() + T + (excl ? T : 0); }
};

inline VarLayout layout_for(const CcpModel& m) {
  return VarLayout{static_cast<int>(m.units.size()), m.horizon,
                   m.flags.ess_exclusivity};
}

namespace detail {

// Deterministic part shared by both transformations: everything except the
// chance constraint.
inline MilpProblem build_core(const CcpModel& m) {
  m.validate();
  const VarLayout L = layout_for(m);
  const int N = L.n;
  const int T = L.T;
  const EssParams& e = m.ess;
  MilpProblem p;
  p.minimize = true;

  const double ch_sign = m.flags.charge_is_cost ? 1.0 : -1.0;
  for (int t = 0; t < T; ++t) {
    const std::string ts = std::to_string(t);
    for (int k = 0; k < N; ++k)
      p.add_var("p_mt" + ts + "_" + std::to_string(k), 0.0, m.units[k].p_max,
                false, m.units[k].fuel_slope);
    for (int k = 0; k < N; ++k)
      p.add_var("u" + ts + "_" + std::to_string(k), 0.0, 1.0, true,
                m.units[k].fixed_cost);
    for (int k = 0; k < N; ++k)
      p.add_var("s" + ts + "_" + std::to_string(k), 0.0, 1.0, false,
                m.units[k].startup_cost);
    for (int k = 0; k < N; ++k)
      p.add_var("r_mt" + ts + "_" + std::to_string(k), 0.0, m.units[k].p_max,
                false, m.units[k].reserve_price);
    p.add_var("p_ch" + ts, 0.0, e.p_ch_max, false, ch_sign * e.charge_price);
    p.add_var("p_dc" + ts, 0.0, e.p_dc_max, false, e.discharge_price);
    p.add_var("p_cn" + ts, 0.0, m.periods[t].cnload_max, false, m.cnload_price);
    p.add_var("r_ess" + ts, 0.0, e.p_dc_max, false, 0.0);
  }
  for (int t = 1; t <= T; ++t) {
    // terminal state pinned back to the initial stored energy
    const double lo = (t == T) ? e.c_init : e.c_min;
    const double hi = (t == T) ? e.c_init : e.c_max;
    p.add_var("soc" + std::to_string(t), lo, hi, false, 0.0);
  }
  if (m.flags.ess_exclusivity)
    for (int t = 0; t < T; ++t)
      p.add_var("y_ess" + std::to_string(t), 0.0, 1.0, true, 0.0);

  for (int t = 0; t < T; ++t) {
    const std::string ts = std::to_string(t);
    std::vector<std::pair<int, double>> bal;
    for (int k = 0; k < N; ++k) bal.emplace_back(L.p_mt(t, k), 1.0);
    bal.emplace_back(L.p_dc(t), 1.0);
    bal.emplace_back(L.p_ch(t), -1.0);
    bal.emplace_back(L.p_cn(t), -1.0);
    p.add_row("bal" + ts, bal, Relation::Equal, m.periods[t].el_expect);

    for (int k = 0; k < N; ++k) {
      const std::string ks = ts + "_" + std::to_string(k);
      p.add_row("mt_hi" + ks,
                {{L.p_mt(t, k), 1.0}, {L.u(t, k), -m.units[k].p_max}},
                Relation::LessEq, 0.0);
      p.add_row("mt_lo" + ks,
                {{L.p_mt(t, k), 1.0}, {L.u(t, k), -m.units[k].p_min}},
                Relation::GreaterEq, 0.0);
      // s_t >= u_t - u_{t-1}; all units start the day offline
      if (t == 0)
        p.add_row("su" + ks, {{L.s(t, k), 1.0}, {L.u(t, k), -1.0}},
                  Relation::GreaterEq, 0.0);
      else
        p.add_row("su" + ks,
                  {{L.s(t, k), 1.0}, {L.u(t, k), -1.0}, {L.u(t - 1, k), 1.0}},
                  Relation::GreaterEq, 0.0);
      p.add_row("mt_res" + ks,
                {{L.p_mt(t, k), 1.0},
                 {L.r_mt(t, k), 1.0},
                 {L.u(t, k), -m.units[k].p_max}},
                Relation::LessEq, 0.0);
    }

    // soc(t+1) = soc(t) + eta_ch*p_ch - p_dc/eta_dc, soc(0) == c_init
    std::vector<std::pair<int, double>> rec{{L.soc(t + 1), 1.0},
                                            {L.p_ch(t), -e.eta_ch},
                                            {L.p_dc(t), 1.0 / e.eta_dc}};
    double rec_rhs = 0.0;
    if (t == 0)
      rec_rhs = e.c_init;
    else
      rec.emplace_back(L.soc(t), -1.0);
    p.add_row("soc_rec" + ts, rec, Relation::Equal, rec_rhs);

    // ESS reserve, energy side: r_ess <= eta_dc*(soc_start - c_min)
    if (t == 0)
      p.add_row("ess_r1_" + ts, {{L.r_ess(t), 1.0}}, Relation::LessEq,
                e.eta_dc * (e.c_init - e.c_min));
    else
      p.add_row("ess_r1_" + ts, {{L.r_ess(t), 1.0}, {L.soc(t), -e.eta_dc}},
                Relation::LessEq, -e.eta_dc * e.c_min);
    // ESS reserve, rate side: r_ess + p_dc <= p_dc_max
    p.add_row("ess_r2_" + ts, {{L.r_ess(t), 1.0}, {L.p_dc(t), 1.0}},
              Relation::LessEq, e.p_dc_max);

    if (m.flags.ess_exclusivity) {
      p.add_row("excl_ch" + ts,
                {{L.p_ch(t), 1.0}, {L.y_ess(t), -e.p_ch_max}},
                Relation::LessEq, 0.0);
      p.add_row("excl_dc" + ts,
                {{L.p_dc(t), 1.0}, {L.y_ess(t), e.p_dc_max}},
                Relation::LessEq, e.p_dc_max);
    }
  }
  return p;
}

inline std::vector<std::pair<int, double>> reserve_terms(const VarLayout& L,
                                                         int t) {
  std::vector<std::pair<int, double>> v;
  for (int k = 0; k < L.n; ++k) v.emplace_back(L.r_mt(t, k), 1.0);
  v.emplace_back(L.r_ess(t), 1.0);
  return v;
}

}  // namespace detail

// Exact reduction of the chance constraint: the W staircase in the big-M
// encoding covers probability alpha iff total reserve reaches the alpha
// quantile of the equivalent-load law above its mean.
inline MilpProblem transform_quantile(const CcpModel& m) {
  MilpProblem p = detail::build_core(m);
  const VarLayout L = layout_for(m);
  for (int t = 0; t < m.horizon; ++t) {
    const PeriodData& pd = m.periods[t];
    const int ustar = quantile_index(pd.el_seq, m.alpha);
    const double req = ustar * m.step_q - pd.el_expect;
    if (req <= 1e-12) continue;  // never binding
    p.add_row("ccq" + std::to_string(t), detail::reserve_terms(L, t),
              Relation::GreaterEq, req);
  }
  return p;
}

// Big-M binary encoding: W[u,t] = 1 exactly when reserve covers deviation
// level u*q - E_t, and the probability mass of covered levels must reach
// alpha.
inline MilpProblem transform_bigM(const CcpModel& m) {
  MilpProblem p = detail::build_core(m);
  const VarLayout L = layout_for(m);
  double fleet_max = m.ess.p_dc_max;
  for (const auto& un : m.units) fleet_max += un.p_max;
  for (int t = 0; t < m.horizon; ++t) {
    const PeriodData& pd = m.periods[t];
    const int ne = pd.el_seq.max_index();
    const double q = m.step_q;
    const double tau = 2.0 * (ne * q + std::abs(pd.el_expect) + fleet_max);
    const std::string ts = std::to_string(t);

    std::vector<int> w(ne + 1);
    std::vector<std::pair<int, double>> cover;
    for (int u = 0; u <= ne; ++u) {
      w[u] = p.add_var("W" + ts + "_" + std::to_string(u), 0.0, 1.0, true, 0.0);
      cover.emplace_back(w[u], pd.el_seq.probs[u]);
    }
    p.add_row("cc_cover" + ts, cover, Relation::GreaterEq, m.alpha);

    for (int u = 0; u <= ne; ++u) {
      const double lvl = u * q - pd.el_expect;
      const std::string us = ts + "_" + std::to_string(u);
      // R - tau*W <= u*q - E  (W forced to 1 once reserve covers level u)
      auto lo = detail::reserve_terms(L, t);
      lo.emplace_back(w[u], -tau);
      p.add_row("cc_lo" + us, lo, Relation::LessEq, lvl);
      // tau*W - R <= tau - (u*q - E)  (W forced to 0 while it does not)
      auto hi = detail::reserve_terms(L, t);
      for (auto& c : hi) c.second = -c.second;
      hi.emplace_back(w[u], tau);
      p.add_row("cc_hi" + us, hi, Relation::LessEq, tau - lvl);
    }
  }
  return p;
}

struct CostBreakdown {
  double fuel = 0.0;      // commitment + energy cost of MT units
  double startup = 0.0;
  double reserve = 0.0;   // priced MT reserve (ESS reserve is free)
  double discharge = 0.0;
  double charge = 0.0;    // credited by default, cost when charge_is_cost
  double cnload = 0.0;
  double total = 0.0;
};

struct Schedule {
  int horizon = 0;
  int n_units = 0;
  std::vector<std::vector<double>> p_mt, r_mt; // [unit][t]
  std::vector<std::vector<int>> u, s;          // [unit][t]
  std::vector<double> p_ch, p_dc, p_cn, r_ess; // [t]
  std::vector<double> soc;                     // length T+1, soc[0] = c_init
  CostBreakdown cost;

  double total_reserve(int t) const {
    double r = r_ess[t];
    for (int k = 0; k < n_units; ++k) r += r_mt[k][t];
    return r;
  }
};

// Recompute the objective decomposition of a schedule from first principles.
inline CostBreakdown cost_of(const Schedule& s, const CcpModel& m) {
  CostBreakdown c;
  for (int t = 0; t < s.horizon; ++t) {
    for (int k = 0; k < s.n_units; ++k) {
      c.fuel += s.u[k][t] * m.units[k].fixed_cost +
                s.p_mt[k][t] * m.units[k].fuel_slope;
      c.startup += s.s[k][t] * m.units[k].startup_cost;
      c.reserve += s.r_mt[k][t] * m.units[k].reserve_price;
    }
    c.discharge += s.p_dc[t] * m.ess.discharge_price;
    c.charge += s.p_ch[t] * m.ess.charge_price;
    c.cnload += s.p_cn[t] * m.cnload_price;
  }
  const double ch_sign = m.flags.charge_is_cost ? 1.0 : -1.0;
  c.total = c.fuel + c.startup + c.reserve + c.discharge +
            ch_sign * c.charge + c.cnload;
  return c;
}

inline Schedule extract_schedule(const CcpModel& m, const std::vector<double>& x) {
  const VarLayout L = layout_for(m);
  if (x.size() < static_cast<std::size_t>(L.core_count()))
    throw ParameterError("extract_schedule: solution vector too short");
  const int N = L.n;
  const int T = L.T;
  Schedule s;
  s.horizon = T;
  s.n_units = N;
  s.p_mt.assign(N, std::vector<double>(T, 0.0));
  s.r_mt.assign(N, std::vector<double>(T, 0.0));
  s.u.assign(N, std::vector<int>(T, 0));
  s.s.assign(N, std::vector<int>(T, 0));
  s.p_ch.assign(T, 0.0);
  s.p_dc.assign(T, 0.0);
  s.p_cn.assign(T, 0.0);
  s.r_ess.assign(T, 0.0);
  s.soc.assign(T + 1, m.ess.c_init);

  const auto clip = [](double v) { return std::abs(v) < 1e-11 ? 0.0 : v; };
  for (int t = 0; t < T; ++t) {
    for (int k = 0; k < N; ++k) {
      s.u[k][t] = x[L.u(t, k)] > 0.5 ? 1 : 0;
      const int prev = (t == 0) ? 0 : s.u[k][t - 1];
      s.s[k][t] = std::max(0, s.u[k][t] - prev);
      s.p_mt[k][t] = clip(x[L.p_mt(t, k)]);
      s.r_mt[k][t] = clip(x[L.r_mt(t, k)]);
    }
    s.p_ch[t] = clip(x[L.p_ch(t)]);
    s.p_dc[t] = clip(x[L.p_dc(t)]);
    s.p_cn[t] = clip(x[L.p_cn(t)]);
    s.r_ess[t] = clip(x[L.r_ess(t)]);
    s.soc[t + 1] = x[L.soc(t + 1)];
  }

  s.cost = cost_of(s, m);
  return s;
}

// Worst deterministic-constraint violations of a schedule, in model units.
struct ScheduleAudit {
  double balance = 0.0;     // |supply - demand| per period
  double soc_recursion = 0.0;
  double soc_bounds = 0.0;
  double terminal_soc = 0.0;
  double mt_limits = 0.0;   // generation limits incl. committed headroom
  double ess_rates = 0.0;
  double ess_reserve = 0.0; // spinning-reserve capability of the ESS
  double max_violation() const {
    return std::max({balance, soc_recursion, soc_bounds, terminal_soc,
                     mt_limits, ess_rates, ess_reserve});
  }
};

inline ScheduleAudit audit_schedule(const Schedule& s, const CcpModel& m) {
  ScheduleAudit a;
  const EssParams& e = m.ess;
  const int N = s.n_units;
  for (int t = 0; t < s.horizon; ++t) {
    double supply = s.p_dc[t] - s.p_ch[t] - s.p_cn[t];
    for (int k = 0; k < N; ++k) supply += s.p_mt[k][t];
    a.balance = std::max(a.balance, std::abs(supply - m.periods[t].el_expect));

    const double next = s.soc[t] + e.eta_ch * s.p_ch[t] - s.p_dc[t] / e.eta_dc;
    a.soc_recursion = std::max(a.soc_recursion, std::abs(next - s.soc[t + 1]));
    a.soc_bounds = std::max({a.soc_bounds, e.c_min - s.soc[t + 1],
                             s.soc[t + 1] - e.c_max});

    for (int k = 0; k < N; ++k) {
      const MtUnit& un = m.units[k];
      const double cap = s.u[k][t] * un.p_max;
      a.mt_limits = std::max({a.mt_limits, s.p_mt[k][t] - cap,
                              s.u[k][t] * un.p_min - s.p_mt[k][t],
                              s.p_mt[k][t] + s.r_mt[k][t] - cap,
                              -s.r_mt[k][t]});
    }
    a.ess_rates = std::max({a.ess_rates, s.p_ch[t] - e.p_ch_max,
                            s.p_dc[t] - e.p_dc_max, -s.p_ch[t], -s.p_dc[t]});
    const double soc_start = std::clamp(s.soc[t], e.c_min, e.c_max);
    const double dc = std::clamp(s.p_dc[t], 0.0, e.p_dc_max);
    a.ess_reserve = std::max(
        a.ess_reserve, s.r_ess[t] - ess_reserve_cap(soc_start, dc, e));
  }
  a.terminal_soc = std::abs(s.soc[s.horizon] - e.c_init);
  return a;
}

struct PeriodAdequacy {
  double adequacy = 0.0;       // empirical P{reserve covers the deviation}
  double mean_shortfall = 0.0; // mean positive uncovered deviation, kW
  double max_shortfall = 0.0;
};

struct ValidationReport {
  int n_samples = 0;
  std::uint64_t seed = 0;
  double alpha = 0.0;
  std::vector<PeriodAdequacy> periods;
  double min_adequacy = 1.0;
  double mean_shortfall = 0.0;
  double max_shortfall = 0.0;
  std::vector<std::string> warnings;
};

// Empirical check of the chance constraint: per period, sample joint
// (wind, pv, load) realizations and measure how often scheduled reserve
// covers the equivalent-load deviation above its modeled mean.
inline ValidationReport validate_schedule(const Schedule& s,
                                          const Scenario& sc, int n_samples,
                                          std::uint64_t seed) {
  sc.validate();
  if (s.horizon != sc.horizon)
    throw ParameterError("validate_schedule: horizon mismatch");
  if (n_samples < 1) throw ParameterError("validate_schedule: n_samples < 1");
  ValidationReport rep;
  rep.n_samples = n_samples;
  rep.seed = seed;
  rep.alpha = sc.alpha;
  if (n_samples < 1000)
    rep.warnings.push_back(
        "n_samples < 1000: adequacy estimates are statistically meaningless");

  rep.periods.resize(sc.horizon);
  double shortfall_sum = 0.0;
  for (int t = 0; t < sc.horizon; ++t) {
    const double el_expect =
        expected_equivalent_load(discretize(sc.load_dist(t), sc.step_q),
                                 discretize(sc.wind_dist(t), sc.step_q),
                                 discretize(sc.pv_dist(t), sc.step_q));
    const double reserve = s.total_reserve(t);
    const PvBlock& pb = sc.pv[t];
    const bool pv_fixed = pb.use_moments && pb.sigma == 0.0;
    BetaParams bp{1.0, 1.0, sc.pv_p_max};
    if (!pv_fixed) {
      if (pb.use_moments) {
        const auto [l1, l2] = beta_shape_from_moments(pb.mu, pb.sigma);
        bp = BetaParams{l1, l2, sc.pv_p_max};
      } else {
        bp = BetaParams{pb.lambda1, pb.lambda2, sc.pv_p_max};
      }
    }

    rng64 rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
    int covered = 0;
    double sum_short = 0.0, max_short = 0.0;
    for (int i = 0; i < n_samples; ++i) {
      const double w = sample_wt_power(rng, sc.wind[t], sc.turbine);
      const double pv =
          pv_fixed ? pb.mu * sc.pv_p_max : sample_pv_power(rng, bp);
      const double l = sample_load(rng, sc.load[t]);
      const double deviation = (l - w - pv) - el_expect;
      if (reserve >= deviation - 1e-9) {
        ++covered;
      } else {
        const double short_kw = deviation - reserve;
        sum_short += short_kw;
        max_short = std::max(max_short, short_kw);
      }
    }
    PeriodAdequacy& pa = rep.periods[t];
    pa.adequacy = static_cast<double>(covered) / n_samples;
    pa.mean_shortfall = sum_short / n_samples;
    pa.max_shortfall = max_short;
    rep.min_adequacy = std::min(rep.min_adequacy, pa.adequacy);
    rep.max_shortfall = std::max(rep.max_shortfall, max_short);
    shortfall_sum += pa.mean_shortfall;
  }
  rep.mean_shortfall = shortfall_sum / sc.horizon;
  return rep;
}

}  // namespace mgsched
