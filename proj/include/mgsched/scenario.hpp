#pragma once

// Scenario: the full description of one scheduling day — generator fleet,
// storage, hourly uncertainty models and solve settings. This is the
// validated in-memory form; JSON parsing lives in io/scenario_json.hpp.

#include <cmath>
#include <string>
#include <vector>

#include "mgsched/common.hpp"
#include "mgsched/uncertainty.hpp"

namespace mgsched {

struct MtUnit {
  std::string name;
  double p_min = 0.0;         // kW
  double p_max = 0.0;         // kW
  double fixed_cost = 0.0;    // $/h while committed
  double fuel_slope = 0.0;    // $/kWh
  double startup_cost = 0.0;  // $ per start
  double reserve_price = 0.0; // $/kW per period

  void validate(const std::string& path) const {
    if (!(p_min >= 0.0) || !(p_max >= p_min))
      throw ValidationError(path, "requires 0 <= p_min <= p_max");
    if (fixed_cost < 0.0 || fuel_slope < 0.0 || startup_cost < 0.0 ||
        reserve_price < 0.0)
      throw ValidationError(path, "costs must be >= 0");
  }
};

struct EssParams {
  double c_min = 0.0;           // kWh
  double c_max = 0.0;           // kWh
  double c_init = 0.0;          // kWh, start and end state
  double p_ch_max = 0.0;        // kW
  double p_dc_max = 0.0;        // kW
  double eta_ch = 1.0;          // per-unit in (0,1]
  double eta_dc = 1.0;          // per-unit in (0,1]
  double charge_price = 0.0;    // $/kWh
  double discharge_price = 0.0; // $/kWh

  void validate(const std::string& path) const {
    if (!(c_min >= 0.0) || !(c_max >= c_min))
      throw ValidationError(path, "requires 0 <= c_min <= c_max");
    if (!(c_min <= c_init && c_init <= c_max))
      throw ValidationError(path + ".c_init_kwh", "must lie in [c_min, c_max]");
    if (!(p_ch_max >= 0.0) || !(p_dc_max >= 0.0))
      throw ValidationError(path, "rate limits must be >= 0");
    if (!(eta_ch > 0.0 && eta_ch <= 1.0) || !(eta_dc > 0.0 && eta_dc <= 1.0))
      throw ValidationError(path, "efficiencies must be in (0, 1]");
    if (charge_price < 0.0 || discharge_price < 0.0)
      throw ValidationError(path, "prices must be >= 0");
  }
};

// Per-period PV uncertainty: either per-unit output moments (mu, sigma) or
// explicit Beta shapes. sigma = 0 collapses to a deterministic output of
// mu * p_max (covers night hours where the Beta law is undefined).
struct PvBlock {
  bool use_moments = true;
  double mu = 0.0;      // per-unit of p_max
  double sigma = 0.0;   // per-unit of p_max
  double lambda1 = 0.0; // used when !use_moments
  double lambda2 = 0.0;

  void validate(const std::string& path) const {
    if (use_moments) {
      if (!(mu >= 0.0 && mu <= 1.0))
        throw ValidationError(path + ".mu", "must be in [0, 1]");
      if (sigma < 0.0) throw ValidationError(path + ".sigma", "must be >= 0");
      if (sigma > 0.0) {
        if (!(mu > 0.0 && mu < 1.0))
          throw ValidationError(path + ".mu", "must be in (0, 1) when sigma > 0");
        try {
          beta_shape_from_moments(mu, sigma);
        } catch (const Error& e) {
          throw ValidationError(path, e.what());
        }
      }
    } else if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) {
      throw ValidationError(path, "Beta shapes must be > 0");
    }
  }
};

struct ScenarioFlags {
  bool charge_is_cost = false;   // flip the printed sign of the charge term
  bool ess_exclusivity = false;  // forbid simultaneous charge and discharge
};

struct Scenario {
  std::string name;
  int horizon = 0;     // periods, 1 h each
  double step_q = 0.0; // kW, discretization step
  double alpha = 0.0;  // chance-constraint confidence
  std::vector<MtUnit> units;
  EssParams ess;
  WtParams turbine{3.0, 15.0, 25.0, 60.0};
  std::vector<WeibullParams> wind;   // per period
  double pv_p_max = 0.0;             // kW
  std::vector<PvBlock> pv;           // per period
  std::vector<NormalParams> load;    // per period
  std::vector<double> cnload_max;    // kW per period
  double cnload_price = 0.0;         // $/kWh served controllable load
  ScenarioFlags flags;

  // Largest power the system could conceivably move in one period; the
  // discretization step must not exceed it.
  double system_power_scale() const {
    double s = ess.p_dc_max + turbine.p_star + pv_p_max;
    for (const auto& u : units) s += u.p_max;
    return s;
  }

  void validate() const {
    if (horizon < 1) throw ValidationError("horizon", "must be >= 1");
    if (!(alpha > 0.0 && alpha <= 1.0))
      throw ValidationError("alpha", "must be in (0, 1]");
    if (!(step_q > 0.0)) throw ValidationError("step_q_kw", "must be > 0");
    if (units.empty()) throw ValidationError("units", "at least one MT unit required");
    for (std::size_t n = 0; n < units.size(); ++n)
      units[n].validate("units[" + std::to_string(n) + "]");
    ess.validate("ess");
    try {
      turbine.validate();
    } catch (const Error& e) {
      throw ValidationError("wind_turbine", e.what());
    }
    if (!(pv_p_max >= 0.0)) throw ValidationError("pv.p_max_kw", "must be >= 0");
    const auto check_len = [&](std::size_t got, const char* field) {
      if (got != static_cast<std::size_t>(horizon))
        throw ValidationError(field, "length must equal horizon (" +
                                         std::to_string(horizon) + "), got " +
                                         std::to_string(got));
    };
    check_len(wind.size(), "wind");
    check_len(pv.size(), "pv.periods");
    check_len(load.size(), "load");
    check_len(cnload_max.size(), "cnload_max_kw");
    for (int t = 0; t < horizon; ++t) {
      const std::string ts = std::to_string(t);
      try {
        wind[t].validate();
      } catch (const Error& e) {
        throw ValidationError("wind[" + ts + "]", e.what());
      }
      pv[t].validate("pv.periods[" + ts + "]");
      try {
        load[t].validate();
      } catch (const Error& e) {
        throw ValidationError("load[" + ts + "]", e.what());
      }
      if (cnload_max[t] < 0.0)
        throw ValidationError("cnload_max_kw[" + ts + "]", "must be >= 0");
    }
    if (cnload_price < 0.0) throw ValidationError("cnload_price", "must be >= 0");
    if (step_q > system_power_scale())
      throw ValidationError("step_q_kw",
                            "exceeds the system power scale of " +
                                std::to_string(system_power_scale()) + " kW");
  }

  MixedDistribution wind_dist(int t) const {
    return wt_output_distribution(wind[t], turbine);
  }

  MixedDistribution pv_dist(int t) const {
    const PvBlock& b = pv[t];
    if (b.use_moments) {
      if (b.sigma == 0.0) return point_mass_distribution(b.mu * pv_p_max);
      const auto [l1, l2] = beta_shape_from_moments(b.mu, b.sigma);
      return pv_output_distribution(BetaParams{l1, l2, pv_p_max});
    }
    return pv_output_distribution(BetaParams{b.lambda1, b.lambda2, pv_p_max});
  }

  MixedDistribution load_dist(int t) const { return load_distribution(load[t]); }
};

}  // namespace mgsched
