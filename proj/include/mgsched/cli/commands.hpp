#pragma once

// Command implementations behind the mgsched CLI. Each returns a process
// exit code: 0 success, 2 validation error, 3 infeasible, 4 solver or
// resource limit. All artifact files go through io/reports.hpp so that
// deterministic runs stay byte-identical.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mgsched/hia.hpp"
#include "mgsched/io/reports.hpp"
#include "mgsched/io/scenario_json.hpp"
#include "mgsched/milp/mps.hpp"
#include "mgsched/solve.hpp"

namespace mgsched::cli {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitLimit = 4;

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("file", "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("file", "cannot write '" + path.string() + "'");
  out << content;
}

inline Scenario load_scenario(const std::string& path, double alpha_override) {
  Scenario sc = io::parse_scenario(read_file(path));
  if (alpha_override >= 0.0) {
    sc.alpha = alpha_override;
    sc.validate();
  }
  return sc;
}

inline std::filesystem::path prep_out_dir(const std::string& out_dir) {
  std::filesystem::path dir(out_dir.empty() ? "." : out_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline int exit_for(SolveStatus st) {
  switch (st) {
    case SolveStatus::Optimal: return kExitOk;
    case SolveStatus::Infeasible: return kExitInfeasible;
    default: return kExitLimit;  // gap/node/time limit, unbounded
  }
}

inline double total_reserve_kw(const Schedule& s) {
  double sum = 0.0;
  for (int t = 0; t < s.horizon; ++t) sum += s.total_reserve(t);
  return sum;
}

// Run fn(0..n-1) on up to `jobs` threads; first exception wins and is
// rethrown on the calling thread after everyone joins.
inline void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
  jobs = std::max(1, std::min(jobs, n));
  if (jobs <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(jobs));
  for (int w = 0; w < jobs; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

inline void export_mps_files(const MilpProblem& p,
                             const std::filesystem::path& dir,
                             const std::string& stem, std::ostream& out) {
  std::ofstream mps(dir / (stem + ".mps"), std::ios::binary);
  std::ofstream names(dir / (stem + ".names"), std::ios::binary);
  if (!mps || !names)
    throw ValidationError("file", "cannot write MPS export in '" +
                                      dir.string() + "'");
  milp::write_mps(p, mps, names);
  out << "wrote " << (dir / (stem + ".mps")).string() << " and "
      << (dir / (stem + ".names")).string() << "\n";
}

}  // namespace detail

// ---------------------------------------------------------------------------
// solve

struct SolveArgs {
  std::string scenario_path;
  std::string method = "dst-quantile";  // dst-quantile | dst-bigm | hia
  double alpha = -1.0;                  // < 0: keep the scenario's value
  std::uint64_t seed = 1;               // hia only
  std::string out_dir = ".";
};

inline int cmd_solve(const SolveArgs& args, std::ostream& out,
                     std::ostream& err) {
  Scenario sc;
  try {
    sc = detail::load_scenario(args.scenario_path, args.alpha);
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  }
  const auto dir = detail::prep_out_dir(args.out_dir);

  if (args.method == "hia") {
    PsoParams params;
    params.seed = args.seed;
    const HiaResult res = pso_optimize(sc, params);
    const std::string status = res.feasible ? "feasible" : "infeasible";
    detail::write_file(dir / "schedule.csv",
                       io::write_schedule_csv(res.schedule, sc.units));
    detail::write_file(dir / "cost.json",
                       io::cost_json(res.schedule, "hia", sc.alpha, status));
    detail::write_file(dir / "trace.csv", io::write_trace_csv(res.trace));
    std::string log = "method: hia\nstatus: " + status + "\n";
    log += "iterations: " + std::to_string(res.trace.size()) + "\n";
    log += "seed: " + std::to_string(params.seed) + "\n";
    log += "cost_usd: " + io::fmt_num(res.cost) + "\n";
    log += "penalized_usd: " + io::fmt_num(res.best_penalized) + "\n";
    detail::write_file(dir / "solver.log", log);
    out << "hia " << status << ", cost " << io::fmt_num(res.cost)
        << " $, artifacts in " << dir.string() << "\n";
    if (!res.feasible) {
      err << "hia found no deterministically repairable particle; "
             "best-effort schedule written\n";
      return kExitInfeasible;
    }
    return kExitOk;
  }

  DstMethod method;
  if (args.method == "dst-quantile") {
    method = DstMethod::Quantile;
  } else if (args.method == "dst-bigm") {
    method = DstMethod::BigM;
  } else {
    err << "validation error: unknown method '" << args.method << "'\n";
    return kExitValidation;
  }

  if (method == DstMethod::BigM && sc.horizon > 6) {
    // The big-M formulation carries one binary per support point and period;
    // beyond a short horizon it is export-only.
    const CcpModel model = build_ccp_model(sc);
    detail::export_mps_files(transform_bigM(model), dir, "model", out);
    out << "notice: dst-bigm is export-only for horizon " << sc.horizon
        << " > 6; solve the MPS with an external solver or use dst-quantile\n";
    return kExitOk;
  }

  const DstResult res = solve_dst(sc, method);
  detail::write_file(dir / "solver.log",
                     io::solver_log(args.method, res.milp, res.problem));
  if (!res.has_schedule) {
    err << args.method << ": " << milp::to_string(res.milp.status)
        << " — no schedule to report\n";
    return detail::exit_for(res.milp.status);
  }
  detail::write_file(dir / "schedule.csv",
                     io::write_schedule_csv(res.schedule, sc.units));
  detail::write_file(dir / "cost.json",
                     io::cost_json(res.schedule, args.method, sc.alpha,
                                   milp::to_string(res.milp.status)));
  out << args.method << " " << milp::to_string(res.milp.status) << ", cost "
      << io::fmt_num(res.schedule.cost.total) << " $, artifacts in "
      << dir.string() << "\n";
  return detail::exit_for(res.milp.status);
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
  std::string scenario_path;
  std::string axis;  // alpha | ess_power | ess_capacity | sigma_l | step_q
  std::vector<double> values;
  double alpha = -1.0;
  int jobs = 1;
  std::string out_dir = ".";
};

namespace detail {

inline Scenario scenario_at(const Scenario& base, const std::string& axis,
                            double v) {
  Scenario sc = base;
  if (axis == "alpha") {
    sc.alpha = v;
  } else if (axis == "ess_power") {
    sc.ess.p_ch_max = base.ess.p_ch_max * v;
    sc.ess.p_dc_max = base.ess.p_dc_max * v;
  } else if (axis == "ess_capacity") {
    sc.ess.c_min = base.ess.c_min * v;
    sc.ess.c_max = base.ess.c_max * v;
    sc.ess.c_init = base.ess.c_init * v;
  } else if (axis == "sigma_l") {
    for (auto& l : sc.load) l.sigma = v * l.mu;
  } else if (axis == "step_q") {
    sc.step_q = v;
  } else {
    throw ValidationError("axis", "unknown sweep axis '" + axis + "'");
  }
  sc.validate();
  return sc;
}

}  // namespace detail

inline int cmd_sweep(const SweepArgs& args, std::ostream& out,
                     std::ostream& err) {
  Scenario base;
  try {
    base = detail::load_scenario(args.scenario_path, args.alpha);
    io::axis_column_name(args.axis);  // reject unknown axes up front
    if (args.values.empty())
      throw ValidationError("values", "sweep needs at least one value");
  } catch (const std::exception& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  }
  const auto dir = detail::prep_out_dir(args.out_dir);

  io::SweepReport report;
  report.axis = args.axis;
  report.points.resize(args.values.size());
  std::mutex log_mu;
  detail::parallel_for(
      static_cast<int>(args.values.size()), args.jobs, [&](int i) {
        io::SweepPoint& pt = report.points[static_cast<std::size_t>(i)];
        pt.axis_value = args.values[static_cast<std::size_t>(i)];
        const auto t0 = std::chrono::steady_clock::now();
        try {
          const Scenario sc =
              detail::scenario_at(base, args.axis, pt.axis_value);
          const DstResult res = solve_dst(sc, DstMethod::Quantile);
          pt.status = res.milp.status;
          if (res.has_schedule) {
            pt.has_schedule = true;
            pt.cost = res.schedule.cost.total;
            pt.total_reserve = detail::total_reserve_kw(res.schedule);
          }
        } catch (const std::exception& e) {
          pt.status = SolveStatus::Infeasible;
          std::lock_guard<std::mutex> lock(log_mu);
          err << "sweep point " << io::fmt_num(pt.axis_value)
              << " failed: " << e.what() << "\n";
        }
        pt.time_s = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
      });

  detail::write_file(dir / "sweep.csv", io::write_sweep_csv(report));
  int flagged = 0;
  for (const auto& pt : report.points) flagged += pt.has_schedule ? 0 : 1;
  out << "sweep over " << args.axis << ": " << report.points.size()
      << " points, " << flagged << " flagged, wrote "
      << (dir / "sweep.csv").string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// compare

struct CompareArgs {
  std::string scenario_path;
  int runs = 3;            // HIA repetitions per confidence level
  std::uint64_t seed = 1;  // first HIA seed; run i uses seed + i
  int jobs = 1;
  std::string out_dir = ".";
};

inline int cmd_compare(const CompareArgs& args, std::ostream& out,
                       std::ostream& err) {
  Scenario base;
  try {
    base = detail::load_scenario(args.scenario_path, -1.0);
    if (args.runs < 1)
      throw ValidationError("runs", "compare needs at least one run");
  } catch (const std::exception& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  }
  const auto dir = detail::prep_out_dir(args.out_dir);
  const std::vector<double> levels = {0.90, 0.95, 1.00};

  std::vector<io::CompareRow> rows;
  for (double alpha : levels) {
    Scenario sc = base;
    sc.alpha = alpha;

    const auto t0 = std::chrono::steady_clock::now();
    const DstResult res = solve_dst(sc, DstMethod::Quantile);
    const double dst_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (!res.has_schedule) {
      err << "dst-quantile " << milp::to_string(res.milp.status)
          << " at alpha " << io::fmt_num(alpha) << "\n";
      return detail::exit_for(res.milp.status);
    }
    rows.push_back({"dst-quantile", alpha, 1, res.schedule.cost.total, 0.0,
                    dst_time});

    std::vector<double> costs(static_cast<std::size_t>(args.runs), 0.0);
    std::vector<double> times(static_cast<std::size_t>(args.runs), 0.0);
    detail::parallel_for(args.runs, args.jobs, [&](int i) {
      PsoParams params;
      params.seed = args.seed + static_cast<std::uint64_t>(i);
      const HiaResult h = pso_optimize(sc, params);
      costs[static_cast<std::size_t>(i)] = h.cost;
      times[static_cast<std::size_t>(i)] = h.wall_seconds;
    });
    double mean = 0.0, mean_t = 0.0;
    for (int i = 0; i < args.runs; ++i) {
      mean += costs[static_cast<std::size_t>(i)];
      mean_t += times[static_cast<std::size_t>(i)];
    }
    mean /= args.runs;
    mean_t /= args.runs;
    double var = 0.0;
    for (int i = 0; i < args.runs; ++i) {
      const double d = costs[static_cast<std::size_t>(i)] - mean;
      var += d * d;
    }
    const double sd = args.runs > 1 ? std::sqrt(var / (args.runs - 1)) : 0.0;
    rows.push_back({"hia", alpha, args.runs, mean, sd, mean_t});

    out << "alpha " << io::fmt_num(alpha) << ": dst "
        << io::fmt_num(res.schedule.cost.total) << " $ in "
        << io::fmt_num(dst_time) << " s, hia mean " << io::fmt_num(mean)
        << " $ in " << io::fmt_num(mean_t) << " s\n";
    if (res.schedule.cost.total > mean + 1e-6) {
      err << "comparison violated at alpha " << io::fmt_num(alpha)
          << ": dst cost exceeds hia mean\n";
      detail::write_file(dir / "compare.csv", io::write_compare_csv(rows));
      return 1;
    }
  }

  detail::write_file(dir / "compare.csv", io::write_compare_csv(rows));
  out << "wrote " << (dir / "compare.csv").string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// validate

struct ValidateArgs {
  std::string scenario_path;
  std::string schedule_path;
  int n_samples = 100000;
  std::uint64_t seed = 1;
  double alpha = -1.0;
  std::string out_dir = ".";
};

inline int cmd_validate(const ValidateArgs& args, std::ostream& out,
                        std::ostream& err) {
  Scenario sc;
  Schedule s;
  try {
    sc = detail::load_scenario(args.scenario_path, args.alpha);
    s = io::read_schedule_csv(detail::read_file(args.schedule_path), sc);
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  }
  const auto dir = detail::prep_out_dir(args.out_dir);

  ValidationReport report;
  try {
    report = validate_schedule(s, sc, args.n_samples, args.seed);
  } catch (const ParameterError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  }
  for (const auto& w : report.warnings) err << "warning: " << w << "\n";

  detail::write_file(dir / "validation.csv", io::write_validation_csv(report));
  detail::write_file(dir / "validation.json",
                     io::validation_summary_json(report));
  int below = 0;
  for (const auto& p : report.periods) below += p.adequacy < sc.alpha ? 1 : 0;
  out << "min adequacy " << io::fmt_num(report.min_adequacy) << " over "
      << report.periods.size() << " periods (" << below << " below alpha "
      << io::fmt_num(sc.alpha) << "), artifacts in " << dir.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// export-mps

struct ExportArgs {
  std::string scenario_path;
  std::string method = "dst-quantile";  // dst-quantile | dst-bigm
  double alpha = -1.0;
  std::string out_dir = ".";
};

inline int cmd_export_mps(const ExportArgs& args, std::ostream& out,
                          std::ostream& err) {
  Scenario sc;
  try {
    sc = detail::load_scenario(args.scenario_path, args.alpha);
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  }
  const auto dir = detail::prep_out_dir(args.out_dir);
  const CcpModel model = build_ccp_model(sc);
  MilpProblem p;
  if (args.method == "dst-quantile") {
    p = transform_quantile(model);
  } else if (args.method == "dst-bigm") {
    p = transform_bigM(model);
  } else {
    err << "validation error: unknown method '" << args.method
        << "' (export supports dst-quantile and dst-bigm)\n";
    return kExitValidation;
  }
  detail::export_mps_files(p, dir, "model", out);
  return kExitOk;
}

}  // namespace mgsched::cli
