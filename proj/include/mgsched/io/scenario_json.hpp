#pragma once

// JSON scenario schema: parse with field-path errors, dump in normalized
// form. The dump re-parses to an identical Scenario (round-trip contract).

#include <string>
#include <utility>

#include <json.hpp>

#include "mgsched/scenario.hpp"

namespace mgsched::io {

using ordered_json = nlohmann::ordered_json;

namespace detail {

inline const ordered_json& require(const ordered_json& obj,
                                   const std::string& key,
                                   const std::string& path) {
  if (!obj.is_object() || !obj.contains(key))
    throw ValidationError(path.empty() ? key : path + "." + key,
                          "missing required field");
  return obj.at(key);
}

inline double num_at(const ordered_json& obj, const std::string& key,
                     const std::string& path) {
  const ordered_json& v = require(obj, key, path);
  if (!v.is_number())
    throw ValidationError(path.empty() ? key : path + "." + key,
                          "expected a number");
  return v.get<double>();
}

inline double num_or(const ordered_json& obj, const std::string& key,
                     double fallback, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  return num_at(obj, key, path);
}

inline bool bool_or(const ordered_json& obj, const std::string& key,
                    bool fallback, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  const ordered_json& v = obj.at(key);
  if (!v.is_boolean())
    throw ValidationError(path + "." + key, "expected a boolean");
  return v.get<bool>();
}

inline const ordered_json& array_at(const ordered_json& obj,
                                    const std::string& key,
                                    const std::string& path) {
  const ordered_json& v = require(obj, key, path);
  if (!v.is_array())
    throw ValidationError(path.empty() ? key : path + "." + key,
                          "expected an array");
  return v;
}

}  // namespace detail

inline Scenario parse_scenario(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("document", std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object())
    throw ValidationError("document", "top level must be a JSON object");

  using namespace detail;
  Scenario sc;
  sc.name = doc.value("name", std::string("scenario"));
  {
    const ordered_json& h = require(doc, "horizon", "");
    if (!h.is_number_integer())
      throw ValidationError("horizon", "expected an integer");
    sc.horizon = h.get<int>();
  }
  sc.step_q = num_at(doc, "step_q_kw", "");
  sc.alpha = num_at(doc, "alpha", "");

  const ordered_json& units = array_at(doc, "units", "");
  for (std::size_t i = 0; i < units.size(); ++i) {
    const std::string path = "units[" + std::to_string(i) + "]";
    const ordered_json& u = units[i];
    if (!u.is_object()) throw ValidationError(path, "expected an object");
    MtUnit mt;
    mt.name = u.value("name", "MT" + std::to_string(i + 1));
    mt.p_min = num_at(u, "p_min_kw", path);
    mt.p_max = num_at(u, "p_max_kw", path);
    mt.fixed_cost = num_at(u, "fixed_cost", path);
    mt.fuel_slope = num_at(u, "fuel_slope", path);
    mt.startup_cost = num_at(u, "startup_cost", path);
    mt.reserve_price = num_at(u, "reserve_price", path);
    sc.units.push_back(std::move(mt));
  }

  {
    const ordered_json& e = require(doc, "ess", "");
    sc.ess.c_min = num_at(e, "c_min_kwh", "ess");
    sc.ess.c_max = num_at(e, "c_max_kwh", "ess");
    sc.ess.c_init = num_at(e, "c_init_kwh", "ess");
    sc.ess.p_ch_max = num_at(e, "p_ch_max_kw", "ess");
    sc.ess.p_dc_max = num_at(e, "p_dc_max_kw", "ess");
    sc.ess.eta_ch = num_at(e, "eta_ch", "ess");
    sc.ess.eta_dc = num_at(e, "eta_dc", "ess");
    sc.ess.charge_price = num_at(e, "charge_price", "ess");
    sc.ess.discharge_price = num_at(e, "discharge_price", "ess");
  }
  {
    const ordered_json& w = require(doc, "wind_turbine", "");
    sc.turbine.v_in = num_at(w, "v_in_ms", "wind_turbine");
    sc.turbine.v_star = num_at(w, "v_star_ms", "wind_turbine");
    sc.turbine.v_out = num_at(w, "v_out_ms", "wind_turbine");
    sc.turbine.p_star = num_at(w, "p_star_kw", "wind_turbine");
  }

  const ordered_json& wind = array_at(doc, "wind", "");
  for (std::size_t t = 0; t < wind.size(); ++t) {
    const std::string path = "wind[" + std::to_string(t) + "]";
    sc.wind.push_back(WeibullParams{num_at(wind[t], "k", path),
                                    num_at(wind[t], "gamma_ms", path)});
  }

  {
    const ordered_json& pv = require(doc, "pv", "");
    sc.pv_p_max = num_at(pv, "p_max_kw", "pv");
    const ordered_json& periods = array_at(pv, "periods", "pv");
    for (std::size_t t = 0; t < periods.size(); ++t) {
      const std::string path = "pv.periods[" + std::to_string(t) + "]";
      const ordered_json& b = periods[t];
      if (!b.is_object()) throw ValidationError(path, "expected an object");
      PvBlock pb;
      if (b.contains("lambda1") || b.contains("lambda2")) {
        pb.use_moments = false;
        pb.lambda1 = num_at(b, "lambda1", path);
        pb.lambda2 = num_at(b, "lambda2", path);
      } else {
        pb.mu = num_at(b, "mu", path);
        pb.sigma = num_or(b, "sigma", 0.0, path);
      }
      sc.pv.push_back(pb);
    }
  }

  const ordered_json& load = array_at(doc, "load", "");
  for (std::size_t t = 0; t < load.size(); ++t) {
    const std::string path = "load[" + std::to_string(t) + "]";
    sc.load.push_back(NormalParams{num_at(load[t], "mu_kw", path),
                                   num_at(load[t], "sigma_kw", path)});
  }

  if (doc.contains("cnload_max_kw")) {
    const ordered_json& cn = doc.at("cnload_max_kw");
    if (cn.is_number()) {
      sc.cnload_max.assign(std::max(sc.horizon, 0), cn.get<double>());
    } else if (cn.is_array()) {
      for (const auto& v : cn) {
        if (!v.is_number())
          throw ValidationError("cnload_max_kw", "expected numbers");
        sc.cnload_max.push_back(v.get<double>());
      }
    } else {
      throw ValidationError("cnload_max_kw", "expected a number or array");
    }
  } else {
    sc.cnload_max.assign(std::max(sc.horizon, 0), 0.0);
  }
  sc.cnload_price = detail::num_or(doc, "cnload_price", 0.0, "");

  if (doc.contains("flags")) {
    const ordered_json& f = doc.at("flags");
    sc.flags.charge_is_cost =
        detail::bool_or(f, "charge_is_cost", false, "flags");
    sc.flags.ess_exclusivity =
        detail::bool_or(f, "ess_exclusivity", false, "flags");
  }

  sc.validate();
  return sc;
}

inline std::string dump_scenario(const Scenario& sc) {
  ordered_json doc;
  doc["name"] = sc.name;
  doc["horizon"] = sc.horizon;
  doc["step_q_kw"] = sc.step_q;
  doc["alpha"] = sc.alpha;
  doc["units"] = ordered_json::array();
  for (const auto& u : sc.units)
    doc["units"].push_back(ordered_json{{"name", u.name},
                                        {"p_min_kw", u.p_min},
                                        {"p_max_kw", u.p_max},
                                        {"fixed_cost", u.fixed_cost},
                                        {"fuel_slope", u.fuel_slope},
                                        {"startup_cost", u.startup_cost},
                                        {"reserve_price", u.reserve_price}});
  doc["ess"] = ordered_json{{"c_min_kwh", sc.ess.c_min},
                            {"c_max_kwh", sc.ess.c_max},
                            {"c_init_kwh", sc.ess.c_init},
                            {"p_ch_max_kw", sc.ess.p_ch_max},
                            {"p_dc_max_kw", sc.ess.p_dc_max},
                            {"eta_ch", sc.ess.eta_ch},
                            {"eta_dc", sc.ess.eta_dc},
                            {"charge_price", sc.ess.charge_price},
                            {"discharge_price", sc.ess.discharge_price}};
  doc["wind_turbine"] = ordered_json{{"v_in_ms", sc.turbine.v_in},
                                     {"v_star_ms", sc.turbine.v_star},
                                     {"v_out_ms", sc.turbine.v_out},
                                     {"p_star_kw", sc.turbine.p_star}};
  doc["wind"] = ordered_json::array();
  for (const auto& w : sc.wind)
    doc["wind"].push_back(ordered_json{{"k", w.k}, {"gamma_ms", w.gamma}});
  doc["pv"]["p_max_kw"] = sc.pv_p_max;
  doc["pv"]["periods"] = ordered_json::array();
  for (const auto& b : sc.pv) {
    if (b.use_moments)
      doc["pv"]["periods"].push_back(
          ordered_json{{"mu", b.mu}, {"sigma", b.sigma}});
    else
      doc["pv"]["periods"].push_back(
          ordered_json{{"lambda1", b.lambda1}, {"lambda2", b.lambda2}});
  }
  doc["load"] = ordered_json::array();
  for (const auto& l : sc.load)
    doc["load"].push_back(
        ordered_json{{"mu_kw", l.mu}, {"sigma_kw", l.sigma}});
  doc["cnload_max_kw"] = sc.cnload_max;
  doc["cnload_price"] = sc.cnload_price;
  doc["flags"] = ordered_json{{"charge_is_cost", sc.flags.charge_is_cost},
                              {"ess_exclusivity", sc.flags.ess_exclusivity}};
  return doc.dump(2) + "\n";
}

}  // namespace mgsched::io
