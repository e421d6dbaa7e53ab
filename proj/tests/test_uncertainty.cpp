#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mgsched/sampling.hpp"
#include "mgsched/seqops.hpp"
#include "mgsched/uncertainty.hpp"

using namespace mgsched;

namespace {
const WeibullParams kWind{2.0, 8.0};
const WtParams kTurbine{3.0, 15.0, 25.0, 60.0};
}  // namespace

TEST_CASE("weibull pdf and cdf match closed forms") {
  CHECK(weibull_pdf(8.0, kWind) == Catch::Approx(0.09196986029286058).epsilon(1e-13));
  CHECK(weibull_cdf(8.0, kWind) == Catch::Approx(0.6321205588285577).epsilon(1e-13));
  CHECK(weibull_cdf(0.0, kWind) == 0.0);
  CHECK(weibull_pdf(0.0, WeibullParams{1.0, 5.0}) == Catch::Approx(0.2));
  CHECK_THROWS_AS(weibull_pdf(-1.0, kWind), ParameterError);
  CHECK_THROWS_AS(weibull_pdf(1.0, WeibullParams{0.0, 8.0}), ParameterError);
}

TEST_CASE("wt power curve follows the four segments") {
  CHECK(wt_power_curve(0.0, kTurbine) == 0.0);
  CHECK(wt_power_curve(2.999, kTurbine) == 0.0);
  CHECK(wt_power_curve(3.0, kTurbine) == 0.0);
  CHECK(wt_power_curve(9.0, kTurbine) == Catch::Approx(30.0));
  CHECK(wt_power_curve(15.0, kTurbine) == 60.0);
  CHECK(wt_power_curve(24.999, kTurbine) == 60.0);
  CHECK(wt_power_curve(25.0, kTurbine) == 0.0);
  CHECK(wt_power_curve(40.0, kTurbine) == 0.0);
  CHECK_THROWS_AS(wt_power_curve(5.0, WtParams{15.0, 3.0, 25.0, 60.0}), ParameterError);
}

TEST_CASE("wt output law splits mass between the curve segments") {
  const MixedDistribution d = wt_output_distribution(kWind, kTurbine);
  REQUIRE(d.point_masses.size() == 2);
  CHECK(d.point_masses[0].first == 0.0);
  CHECK(d.point_masses[0].second == Catch::Approx(0.1312423346258963).epsilon(1e-13));
  CHECK(d.point_masses[1].first == 60.0);
  CHECK(d.point_masses[1].second == Catch::Approx(0.029671825497419313).epsilon(1e-13));
  CHECK(d.continuous_density(30.0) == Catch::Approx(0.015866041032777122).epsilon(1e-12));
  CHECK(d.continuous_density(0.0) == 0.0);
  CHECK(d.continuous_density(60.0) == 0.0);

  // Total mass closes to 1: the ramp segment carries F(v*) - F(v_in).
  const double cont = detail::integrate_bin(d.continuous_density, 0.0, 60.0);
  CHECK(cont == Catch::Approx(0.8390858398766844).epsilon(1e-9));
  CHECK(cont + d.point_masses[0].second + d.point_masses[1].second ==
        Catch::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("beta shapes recover from moments") {
  const auto [l1, l2] = beta_shape_from_moments(0.5, std::sqrt(0.05));
  CHECK(l1 == Catch::Approx(2.0).epsilon(1e-12));
  CHECK(l2 == Catch::Approx(2.0).epsilon(1e-12));
  const auto [a, b] = beta_shape_from_moments(0.2, 0.1);
  CHECK(a / (a + b) == Catch::Approx(0.2).epsilon(1e-12));
  CHECK(a * b / ((a + b) * (a + b) * (a + b + 1.0)) == Catch::Approx(0.01).epsilon(1e-12));
  CHECK_THROWS_AS(beta_shape_from_moments(0.5, 0.5), InfeasibleMomentsError);
  CHECK_THROWS_AS(beta_shape_from_moments(0.0, 0.1), ParameterError);
}

TEST_CASE("pv output pdf is the rescaled beta density") {
  const BetaParams b{2.0, 2.0, 120.0};
  CHECK(pv_output_pdf(60.0, b) == Catch::Approx(0.0125).epsilon(1e-12));
  CHECK(pv_output_pdf(-1.0, b) == 0.0);
  CHECK(pv_output_pdf(121.0, b) == 0.0);

  // Uniform special case stays finite at the endpoints.
  const BetaParams uni{1.0, 1.0, 120.0};
  CHECK(pv_output_pdf(0.0, uni) == Catch::Approx(1.0 / 120.0).epsilon(1e-12));
  CHECK(pv_output_pdf(120.0, uni) == Catch::Approx(1.0 / 120.0).epsilon(1e-12));

  // Random shapes integrate to 1 even with endpoint singularities.
  rng64 rng(mix_seed(41));
  for (int it = 0; it < 20; ++it) {
    const BetaParams r{0.5 + 9.5 * uniform01(rng), 0.5 + 9.5 * uniform01(rng), 120.0};
    const MixedDistribution d = pv_output_distribution(r);
    const double mass = detail::integrate_bin(d.continuous_density, 0.0, 120.0);
    CHECK(mass == Catch::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("pv output scales irradiance by the panel train") {
  const PvPanel panel{1.0, 1300.0, 0.093, 1.0};
  CHECK(pv_output_from_irradiance(1.0, panel) == Catch::Approx(120.9).epsilon(1e-12));
  CHECK(pv_output_from_irradiance(0.0, panel) == 0.0);
  CHECK_THROWS_AS(pv_output_from_irradiance(-0.1, panel), ParameterError);
}

TEST_CASE("load law folds the 4-sigma tails into boundary masses") {
  CHECK(load_pdf(100.0, NormalParams{100.0, 10.0}) ==
        Catch::Approx(0.039894228040143274).epsilon(1e-13));

  const MixedDistribution d = load_distribution(NormalParams{100.0, 10.0});
  CHECK(d.support_max == Catch::Approx(140.0));
  REQUIRE(d.point_masses.size() == 2);
  CHECK(d.point_masses[0].first == Catch::Approx(60.0));
  CHECK(d.point_masses[0].second == Catch::Approx(3.167124183311986e-05).epsilon(1e-9));
  CHECK(d.point_masses[1].second == Catch::Approx(3.167124183311986e-05).epsilon(1e-9));
  const double cont = detail::integrate_bin(d.continuous_density, 60.0, 140.0);
  CHECK(cont + d.point_masses[0].second + d.point_masses[1].second ==
        Catch::Approx(1.0).epsilon(1e-10));

  // Mean clipped below zero: the lower boundary sits at 0.
  const MixedDistribution low = load_distribution(NormalParams{5.0, 10.0});
  CHECK(low.point_masses[0].first == 0.0);

  // Deterministic load collapses to a point mass.
  const MixedDistribution fixed = load_distribution(NormalParams{80.0, 0.0});
  REQUIRE(fixed.point_masses.size() == 1);
  CHECK(fixed.point_masses[0] == std::pair<double, double>{80.0, 1.0});
}

TEST_CASE("samplers reproduce the analytic laws") {
  rng64 rng(mix_seed(7, 3));
  const int n = 200000;

  SECTION("weibull moments") {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += sample_weibull(rng, kWind);
    const double mean = s / n;
    // E = gamma * Gamma(1 + 1/k) = 8 * Gamma(1.5)
    const double expect = 8.0 * std::tgamma(1.5);
    CHECK(std::abs(mean - expect) < 0.05);
  }

  SECTION("wt point masses appear at the empirical rate") {
    int zeros = 0, rated = 0;
    for (int i = 0; i < n; ++i) {
      const double p = sample_wt_power(rng, kWind, kTurbine);
      if (p == 0.0) ++zeros;
      if (p == 60.0) ++rated;
    }
    const double se0 = std::sqrt(0.1312 * 0.8688 / n);
    const double ser = std::sqrt(0.0297 * 0.9703 / n);
    CHECK(std::abs(zeros / double(n) - 0.1312423346258963) < 4.0 * se0);
    CHECK(std::abs(rated / double(n) - 0.029671825497419313) < 4.0 * ser);
  }

  SECTION("beta mean and variance") {
    double s = 0.0, s2 = 0.0;
    const BetaParams b{2.0, 2.0, 120.0};
    for (int i = 0; i < n; ++i) {
      const double v = sample_pv_power(rng, b);
      s += v;
      s2 += v * v;
    }
    const double mean = s / n;
    const double var = s2 / n - mean * mean;
    CHECK(std::abs(mean - 60.0) < 0.3);                  // exact 60
    CHECK(std::abs(var - 120.0 * 120.0 * 0.05) < 8.0);   // exact 720
  }

  SECTION("load clamps to the folded support") {
    const NormalParams np{20.0, 10.0};
    double mn = 1e9, mx = -1e9;
    for (int i = 0; i < n; ++i) {
      const double v = sample_load(rng, np);
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
    CHECK(mn >= 0.0);
    CHECK(mx <= 60.0);
  }

  SECTION("sampling is reproducible for equal seeds") {
    rng64 a(mix_seed(11, 2)), b(mix_seed(11, 2));
    for (int i = 0; i < 100; ++i)
      REQUIRE(sample_load(a, NormalParams{50.0, 5.0}) ==
              sample_load(b, NormalParams{50.0, 5.0}));
  }
}
