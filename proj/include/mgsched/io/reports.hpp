#pragma once

// Plot-ready CSV and machine-readable JSON emitters. Every CSV has a header
// row and a fixed column order; numbers use the shortest exact decimal form
// so deterministic runs produce byte-identical files. Wall-clock timings are
// confined to the sweep/compare tables, never to schedule artifacts.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mgsched/hia.hpp"
#include "mgsched/scenario.hpp"
#include "mgsched/scheduler_model.hpp"

namespace mgsched::io {

using ordered_json = nlohmann::ordered_json;

inline std::string fmt_num(double v) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Schedule CSV: one row per period.

inline std::string write_schedule_csv(const Schedule& s,
                                      const std::vector<MtUnit>& units) {
  if (static_cast<int>(units.size()) != s.n_units)
    throw ParameterError("write_schedule_csv: unit list does not match schedule");
  std::string out = "t";
  for (const auto& u : units)
    out += ",p_mt_" + u.name + "_kw,u_" + u.name + ",s_" + u.name +
           ",r_mt_" + u.name + "_kw";
  out += ",p_ch_kw,p_dc_kw,soc_kwh,r_ess_kw,p_cnload_kw\n";
  for (int t = 0; t < s.horizon; ++t) {
    out += std::to_string(t);
    for (int k = 0; k < s.n_units; ++k) {
      out += "," + fmt_num(s.p_mt[k][t]);
      out += "," + std::to_string(s.u[k][t]);
      out += "," + std::to_string(s.s[k][t]);
      out += "," + fmt_num(s.r_mt[k][t]);
    }
    out += "," + fmt_num(s.p_ch[t]);
    out += "," + fmt_num(s.p_dc[t]);
    out += "," + fmt_num(s.soc[t + 1]);  // end-of-period state
    out += "," + fmt_num(s.r_ess[t]);
    out += "," + fmt_num(s.p_cn[t]);
    out += "\n";
  }
  return out;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  cells.push_back(cur);
  return cells;
}

inline double parse_cell(const std::string& cell, const std::string& where) {
  double v = 0.0;
  auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
    throw ValidationError(where, "not a number: '" + cell + "'");
  return v;
}

}  // namespace detail

// Inverse of write_schedule_csv. The scenario supplies dimensions, unit
// names, and the initial state of charge; any mismatch is a structured error.
inline Schedule read_schedule_csv(const std::string& text, const Scenario& sc) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw ValidationError("schedule", "empty schedule file");
  const auto header = detail::split_csv_line(line);
  const int n = static_cast<int>(sc.units.size());
  const std::size_t want_cols = 1 + 4 * static_cast<std::size_t>(n) + 5;
  if (header.size() != want_cols)
    throw ValidationError("schedule.header",
                          "expected " + std::to_string(want_cols) +
                              " columns for " + std::to_string(n) +
                              " units, found " + std::to_string(header.size()));
  for (int k = 0; k < n; ++k) {
    const std::string want = "p_mt_" + sc.units[k].name + "_kw";
    if (header[1 + 4 * static_cast<std::size_t>(k)] != want)
      throw ValidationError("schedule.header",
                            "column " + std::to_string(1 + 4 * k) +
                                " should be '" + want + "' for this scenario");
  }

  Schedule s;
  s.n_units = n;
  s.p_mt.assign(n, {});
  s.r_mt.assign(n, {});
  s.u.assign(n, {});
  s.s.assign(n, {});
  s.soc.push_back(sc.ess.c_init);
  int t = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = detail::split_csv_line(line);
    const std::string where = "schedule.row[" + std::to_string(t) + "]";
    if (cells.size() != want_cols)
      throw ValidationError(where, "expected " + std::to_string(want_cols) +
                                       " cells, found " +
                                       std::to_string(cells.size()));
    std::size_t c = 0;
    if (detail::parse_cell(cells[c++], where + ".t") != t)
      throw ValidationError(where, "period index out of order");
    for (int k = 0; k < n; ++k) {
      s.p_mt[k].push_back(detail::parse_cell(cells[c++], where));
      s.u[k].push_back(static_cast<int>(detail::parse_cell(cells[c++], where)));
      s.s[k].push_back(static_cast<int>(detail::parse_cell(cells[c++], where)));
      s.r_mt[k].push_back(detail::parse_cell(cells[c++], where));
    }
    s.p_ch.push_back(detail::parse_cell(cells[c++], where));
    s.p_dc.push_back(detail::parse_cell(cells[c++], where));
    s.soc.push_back(detail::parse_cell(cells[c++], where));
    s.r_ess.push_back(detail::parse_cell(cells[c++], where));
    s.p_cn.push_back(detail::parse_cell(cells[c++], where));
    ++t;
  }
  s.horizon = t;
  if (s.horizon != sc.horizon)
    throw ValidationError("schedule",
                          "file has " + std::to_string(s.horizon) +
                              " periods but the scenario horizon is " +
                              std::to_string(sc.horizon));
  return s;
}

// ---------------------------------------------------------------------------
// Cost breakdown JSON and solver log. Both deterministic: no timings.

inline std::string cost_json(const Schedule& s, const std::string& method,
                             double alpha, const std::string& status) {
  ordered_json doc;
  doc["method"] = method;
  doc["alpha"] = alpha;
  doc["status"] = status;
  doc["cost"] = ordered_json{{"fuel_usd", s.cost.fuel},
                             {"startup_usd", s.cost.startup},
                             {"reserve_usd", s.cost.reserve},
                             {"discharge_usd", s.cost.discharge},
                             {"charge_usd", s.cost.charge},
                             {"cnload_usd", s.cost.cnload},
                             {"total_usd", s.cost.total}};
  return doc.dump(2) + "\n";
}

inline std::string solver_log(const std::string& method,
                              const milp::MilpSolution& sol,
                              const milp::MilpProblem& p) {
  int binaries = 0;
  for (const auto& v : p.vars) binaries += v.is_integer ? 1 : 0;
  std::string out;
  out += "method: " + method + "\n";
  out += "status: " + std::string(milp::to_string(sol.status)) + "\n";
  out += "variables: " + std::to_string(p.vars.size()) + "\n";
  out += "rows: " + std::to_string(p.rows.size()) + "\n";
  out += "binaries: " + std::to_string(binaries) + "\n";
  out += "nodes: " + std::to_string(sol.nodes) + "\n";
  if (sol.status != SolveStatus::Infeasible &&
      sol.status != SolveStatus::Unbounded) {
    out += "objective_usd: " + fmt_num(sol.objective) + "\n";
    out += "bound_usd: " + fmt_num(sol.bound) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sweep report.

struct SweepPoint {
  double axis_value = 0.0;
  SolveStatus status = SolveStatus::Infeasible;
  double cost = 0.0;           // valid when has_schedule
  double total_reserve = 0.0;  // summed over periods, kW
  double time_s = 0.0;
  bool has_schedule = false;
};

struct SweepReport {
  std::string axis;
  std::vector<SweepPoint> points;  // input value order
};

inline std::string axis_column_name(const std::string& axis) {
  if (axis == "alpha") return "alpha";
  if (axis == "ess_power") return "ess_power_scale";
  if (axis == "ess_capacity") return "ess_capacity_scale";
  if (axis == "sigma_l") return "sigma_l_frac";
  if (axis == "step_q") return "step_q_kw";
  throw ParameterError("unknown sweep axis '" + axis + "'");
}

inline std::string write_sweep_csv(const SweepReport& r) {
  std::string out = axis_column_name(r.axis) +
                    ",status,cost_usd,total_reserve_kw,time_s\n";
  for (const auto& pt : r.points) {
    out += fmt_num(pt.axis_value);
    out += ",";
    out += milp::to_string(pt.status);
    if (pt.has_schedule)
      out += "," + fmt_num(pt.cost) + "," + fmt_num(pt.total_reserve);
    else
      out += ",,";  // flagged row: no cost to report
    out += "," + fmt_num(pt.time_s) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Method comparison table.

struct CompareRow {
  std::string method;
  double alpha = 0.0;
  int runs = 0;
  double mean_cost = 0.0;
  double std_cost = 0.0;
  double mean_time_s = 0.0;
};

inline std::string write_compare_csv(const std::vector<CompareRow>& rows) {
  std::string out = "method,alpha,runs,mean_cost_usd,std_cost_usd,mean_time_s\n";
  for (const auto& r : rows) {
    out += r.method + "," + fmt_num(r.alpha) + "," + std::to_string(r.runs) +
           "," + fmt_num(r.mean_cost) + "," + fmt_num(r.std_cost) + "," +
           fmt_num(r.mean_time_s) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ex-post validation artifacts.

inline std::string write_validation_csv(const ValidationReport& r) {
  std::string out = "t,adequacy,mean_shortfall_kw,max_shortfall_kw\n";
  for (std::size_t t = 0; t < r.periods.size(); ++t) {
    const auto& p = r.periods[t];
    out += std::to_string(t) + "," + fmt_num(p.adequacy) + "," +
           fmt_num(p.mean_shortfall) + "," + fmt_num(p.max_shortfall) + "\n";
  }
  return out;
}

inline std::string validation_summary_json(const ValidationReport& r) {
  ordered_json doc;
  doc["n_samples"] = r.n_samples;
  doc["seed"] = r.seed;
  doc["alpha"] = r.alpha;
  doc["min_adequacy"] = r.min_adequacy;
  ordered_json below = ordered_json::array();
  for (std::size_t t = 0; t < r.periods.size(); ++t)
    if (r.periods[t].adequacy < r.alpha) below.push_back(t);
  doc["periods_below_alpha"] = below;
  doc["mean_shortfall_kw"] = r.mean_shortfall;
  doc["max_shortfall_kw"] = r.max_shortfall;
  doc["warnings"] = r.warnings;
  return doc.dump(2) + "\n";
}

inline std::string write_trace_csv(const std::vector<HiaTracePoint>& trace) {
  std::string out = "iteration,best_cost_usd,feasible_flag\n";
  for (const auto& p : trace)
    out += std::to_string(p.iteration) + "," + fmt_num(p.best_cost) + "," +
           std::to_string(p.feasible ? 1 : 0) + "\n";
  return out;
}

}  // namespace mgsched::io
