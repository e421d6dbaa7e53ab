#pragma once

// Shared scenario fixtures. make_reference_scenario() must stay in sync with
// data/ornl_decc.json — the round-trip test enforces it.

#include <cmath>
#include <vector>

#include "mgsched/scenario.hpp"

namespace fixtures {

inline mgsched::Scenario make_reference_scenario() {
  using namespace mgsched;
  Scenario sc;
  sc.name = "ornl-decc";
  sc.horizon = 24;
  sc.step_q = 2.5;
  sc.alpha = 0.95;
  sc.units = {
      {"MT1", 5.0, 30.0, 1.2, 0.35, 1.6, 0.04},
      {"MT2", 5.0, 30.0, 1.2, 0.35, 1.6, 0.04},
      {"MT3", 10.0, 65.0, 1.0, 0.26, 3.5, 0.04},
  };
  sc.ess = EssParams{32.0, 160.0, 80.0, 40.0, 40.0, 0.9, 0.9, 0.3, 0.5};
  sc.turbine = WtParams{3.0, 14.0, 25.0, 80.0};
  const double gamma[24] = {9.0, 9.2, 9.5, 9.4, 9.0, 8.6, 8.0, 7.4,
                            6.8, 6.2, 5.8, 5.5, 5.3, 5.2, 5.4, 5.8,
                            6.3, 6.9, 7.4, 7.9, 8.3, 8.6, 8.8, 9.0};
  const double pv_mu[24] = {0.0,  0.0,  0.0,  0.0,  0.0,  0.02, 0.08, 0.18,
                            0.28, 0.38, 0.45, 0.50, 0.50, 0.46, 0.40, 0.30,
                            0.20, 0.10, 0.03, 0.0,  0.0,  0.0,  0.0,  0.0};
  const double load_mu[24] = {80.0,  76.0,  72.0,  70.0,  70.0,  74.0,
                              82.0,  92.0,  100.0, 105.0, 108.0, 110.0,
                              112.0, 110.0, 108.0, 106.0, 108.0, 112.0,
                              115.0, 113.0, 105.0, 96.0,  88.0,  83.0};
  sc.pv_p_max = 120.0;
  for (int t = 0; t < 24; ++t) {
    sc.wind.push_back(WeibullParams{2.0, gamma[t]});
    PvBlock pb;
    pb.mu = pv_mu[t];
    pb.sigma = pv_mu[t] > 0.0
                   ? 0.35 * std::sqrt(pv_mu[t] * (1.0 - pv_mu[t]))
                   : 0.0;
    sc.pv.push_back(pb);
    sc.load.push_back(NormalParams{load_mu[t], 0.10 * load_mu[t]});
    sc.cnload_max.push_back(50.0);
  }
  sc.cnload_price = 0.0;
  return sc;
}

// Small, quick-to-solve scenario for property tests.
inline mgsched::Scenario make_small_scenario() {
  using namespace mgsched;
  Scenario sc;
  sc.name = "small";
  sc.horizon = 4;
  sc.step_q = 5.0;
  sc.alpha = 0.95;
  sc.units = {
      {"A", 5.0, 30.0, 1.2, 0.35, 1.6, 0.04},
      {"B", 10.0, 65.0, 1.0, 0.26, 3.5, 0.04},
  };
  sc.ess = EssParams{32.0, 160.0, 80.0, 40.0, 40.0, 0.9, 0.9, 0.3, 0.5};
  sc.turbine = WtParams{3.0, 14.0, 25.0, 80.0};
  const double gamma[4] = {9.0, 8.0, 6.0, 7.0};
  const double pv_mu[4] = {0.0, 0.3, 0.5, 0.1};
  const double load_mu[4] = {80.0, 95.0, 110.0, 90.0};
  sc.pv_p_max = 80.0;
  for (int t = 0; t < 4; ++t) {
    sc.wind.push_back(WeibullParams{2.0, gamma[t]});
    PvBlock pb;
    pb.mu = pv_mu[t];
    pb.sigma = pv_mu[t] > 0.0
                   ? 0.35 * std::sqrt(pv_mu[t] * (1.0 - pv_mu[t]))
                   : 0.0;
    sc.pv.push_back(pb);
    sc.load.push_back(NormalParams{load_mu[t], 0.10 * load_mu[t]});
    sc.cnload_max.push_back(30.0);
  }
  sc.cnload_price = 0.0;
  return sc;
}

}  // namespace fixtures
