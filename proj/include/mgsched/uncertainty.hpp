#pragma once

// Probability models for wind turbine output, PV output and load power.
// All power quantities are kW, speeds m/s, irradiance kW/m^2.

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "mgsched/common.hpp"

namespace mgsched {

struct WeibullParams {
  double k;      // shape factor (dimensionless)
  double gamma;  // scale factor (m/s)

  void validate() const {
    if (!(k > 0.0) || !(gamma > 0.0))
      throw ParameterError("Weibull parameters require k > 0 and gamma > 0");
  }
};

struct WtParams {
  double v_in;    // cut-in speed (m/s)
  double v_star;  // rated speed (m/s)
  double v_out;   // cut-out speed (m/s)
  double p_star;  // rated power (kW)

  void validate() const {
    if (!(0.0 < v_in && v_in < v_star && v_star < v_out))
      throw ParameterError("WT speeds require 0 < v_in < v_star < v_out");
    if (!(p_star > 0.0)) throw ParameterError("WT rated power must be > 0");
  }
};

struct BetaParams {
  double lambda1;  // shape
  double lambda2;  // shape
  double p_max;    // maximum PV power (kW)

  void validate() const {
    if (!(lambda1 > 0.0) || !(lambda2 > 0.0))
      throw ParameterError("Beta shapes must be > 0");
    if (!(p_max > 0.0)) throw ParameterError("PV maximum power must be > 0");
  }
};

struct PvPanel {
  double eta_m;      // MPPT efficiency (p.u.)
  double a_pv;       // radiation area (m^2)
  double eta_pv;     // conversion efficiency (p.u.)
  double cos_theta;  // incidence-angle cosine (p.u.)

  void validate() const {
    if (!(eta_m > 0.0 && eta_m <= 1.0) || !(eta_pv > 0.0 && eta_pv <= 1.0) ||
        !(cos_theta > 0.0 && cos_theta <= 1.0) || !(a_pv > 0.0))
      throw ParameterError("PV panel parameters out of range");
  }
};

struct NormalParams {
  double mu;     // mean load (kW)
  double sigma;  // standard deviation (kW)

  void validate() const {
    if (!(mu >= 0.0) || !(sigma >= 0.0))
      throw ParameterError("load parameters require mu >= 0 and sigma >= 0");
  }
};

// Law of a power variable with a continuous density plus point masses.
// The WT output is the canonical example: the power curve maps whole
// speed intervals onto the single powers 0 and p_star.
struct MixedDistribution {
  std::function<double(double)> continuous_density;  // kW -> 1/kW, 0 outside support
  std::vector<std::pair<double, double>> point_masses;  // (power kW, probability)
  double support_max = 0.0;                             // kW
};

inline double weibull_pdf(double v, const WeibullParams& p) {
  p.validate();
  if (v < 0.0) throw ParameterError("wind speed must be >= 0");
  const double z = v / p.gamma;
  return (p.k / p.gamma) * std::pow(z, p.k - 1.0) * std::exp(-std::pow(z, p.k));
}

inline double weibull_cdf(double v, const WeibullParams& p) {
  p.validate();
  if (v <= 0.0) return 0.0;
  return 1.0 - std::exp(-std::pow(v / p.gamma, p.k));
}

// Piecewise power curve: zero outside [v_in, v_out), linear ramp up to the
// rated speed, flat at p_star afterwards.
inline double wt_power_curve(double v, const WtParams& w) {
  w.validate();
  if (v < 0.0) throw ParameterError("wind speed must be >= 0");
  if (v < w.v_in || v >= w.v_out) return 0.0;
  if (v < w.v_star) return w.p_star * (v - w.v_in) / (w.v_star - w.v_in);
  return w.p_star;
}

// Mixed law of the WT output. The continuous part on (0, p_star) is the
// pushforward of the Weibull law through the ramp segment; the masses at 0
// and p_star collect the speed intervals the curve maps to those powers.
inline MixedDistribution wt_output_distribution(const WeibullParams& p,
                                                const WtParams& w) {
  p.validate();
  w.validate();
  const double h = w.v_star / w.v_in - 1.0;
  const double mass_zero =
      weibull_cdf(w.v_in, p) + (1.0 - weibull_cdf(w.v_out, p));
  const double mass_rated = weibull_cdf(w.v_out, p) - weibull_cdf(w.v_star, p);

  MixedDistribution d;
  d.support_max = w.p_star;
  d.point_masses = {{0.0, mass_zero}, {w.p_star, mass_rated}};
  d.continuous_density = [p, w, h](double power) -> double {
    if (power <= 0.0 || power >= w.p_star) return 0.0;
    const double v = (1.0 + h * power / w.p_star) * w.v_in;  // inverse ramp
    const double z = v / p.gamma;
    const double dv_dp = h * w.v_in / w.p_star;
    return (p.k / p.gamma) * std::pow(z, p.k - 1.0) *
           std::exp(-std::pow(z, p.k)) * dv_dp;
  };
  return d;
}

// Beta shapes from per-unit irradiance moments:
//   lambda1 = mu*(mu*(1-mu)/sigma^2 - 1),  lambda2 = (1-mu)*(...)
inline std::pair<double, double> beta_shape_from_moments(double mu_pv,
                                                         double sigma_pv) {
  if (!(mu_pv > 0.0 && mu_pv < 1.0))
    throw ParameterError("beta moments require 0 < mu < 1");
  const double var = sigma_pv * sigma_pv;
  if (!(var > 0.0))
    throw ParameterError("beta moments require sigma > 0");
  if (!(var < mu_pv * (1.0 - mu_pv)))
    throw InfeasibleMomentsError(
        "beta moments require sigma^2 < mu*(1-mu)");
  const double common = mu_pv * (1.0 - mu_pv) / var - 1.0;
  return {mu_pv * common, (1.0 - mu_pv) * common};
}

inline double pv_output_from_irradiance(double xi, const PvPanel& panel) {
  panel.validate();
  if (xi < 0.0) throw ParameterError("irradiance must be >= 0");
  return xi * panel.eta_m * panel.a_pv * panel.eta_pv * panel.cos_theta;
}

// Beta density rescaled onto [0, p_max]; zero outside the support.
inline double pv_output_pdf(double power, const BetaParams& b) {
  b.validate();
  if (power < 0.0 || power > b.p_max) return 0.0;
  const double x = power / b.p_max;
  const double log_norm = std::lgamma(b.lambda1 + b.lambda2) -
                          std::lgamma(b.lambda1) - std::lgamma(b.lambda2);
  double log_pdf = log_norm;
  if (b.lambda1 != 1.0) {
    log_pdf += (b.lambda1 - 1.0) * std::log(x);
  }
  if (b.lambda2 != 1.0) {
    log_pdf += (b.lambda2 - 1.0) * std::log1p(-x);
  }
  return std::exp(log_pdf) / b.p_max;
}

inline MixedDistribution pv_output_distribution(const BetaParams& b) {
  b.validate();
  MixedDistribution d;
  d.support_max = b.p_max;
  d.continuous_density = [b](double power) { return pv_output_pdf(power, b); };
  return d;
}

inline double load_pdf(double power, const NormalParams& n) {
  n.validate();
  if (!(n.sigma > 0.0))
    throw ParameterError("load_pdf requires sigma > 0; use a point mass");
  const double z = (power - n.mu) / n.sigma;
  return std::exp(-0.5 * z * z) / (n.sigma * std::sqrt(2.0 * M_PI));
}

inline double normal_cdf(double x, double mu, double sigma) {
  return 0.5 * std::erfc(-(x - mu) / (sigma * std::sqrt(2.0)));
}

// Degenerate law: all mass at a single power value.
inline MixedDistribution point_mass_distribution(double power) {
  if (power < 0.0) throw ParameterError("point mass must be at power >= 0");
  MixedDistribution d;
  d.support_max = power;
  d.point_masses = {{power, 1.0}};
  d.continuous_density = [](double) { return 0.0; };
  return d;
}

// Normal load truncated to [max(0, mu-4s), mu+4s]; the clipped tails become
// point masses on the boundaries so the total stays exactly 1.
inline MixedDistribution load_distribution(const NormalParams& n) {
  n.validate();
  if (n.sigma == 0.0) return point_mass_distribution(n.mu);
  const double lo = std::max(0.0, n.mu - 4.0 * n.sigma);
  const double hi = n.mu + 4.0 * n.sigma;
  MixedDistribution d;
  d.support_max = hi;
  d.point_masses = {{lo, normal_cdf(lo, n.mu, n.sigma)},
                    {hi, 1.0 - normal_cdf(hi, n.mu, n.sigma)}};
  d.continuous_density = [n, lo, hi](double power) -> double {
    if (power < lo || power > hi) return 0.0;
    return load_pdf(power, n);
  };
  return d;
}

}  // namespace mgsched
