#pragma once

// Seed-deterministic samplers for the uncertainty models. Implemented from
// uniforms directly (inverse transform, Box-Muller, Marsaglia-Tsang) so a
// fixed seed reproduces the same stream on any standard library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "mgsched/uncertainty.hpp"

namespace mgsched {

using rng64 = std::mt19937_64;

// Stable mixing of a base seed with stream labels (run, period, draw, ...).
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b = 0,
                              std::uint64_t c = 0) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1) +
                    0xbf58476d1ce4e5b9ULL * (c + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline double uniform01(std::mt19937_64& rng) {
  // strictly inside (0, 1)
  const double u = ((rng() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  return u;
}

inline double sample_normal(std::mt19937_64& rng) {
  const double u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline double sample_weibull(std::mt19937_64& rng, const WeibullParams& p) {
  return p.gamma * std::pow(-std::log(uniform01(rng)), 1.0 / p.k);
}

// Marsaglia-Tsang; the shape < 1 case boosts through shape + 1.
inline double sample_gamma(std::mt19937_64& rng, double shape) {
  if (shape < 1.0) {
    const double u = uniform01(rng);
    return sample_gamma(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = sample_normal(rng);
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = uniform01(rng);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

inline double sample_beta(std::mt19937_64& rng, double lambda1,
                          double lambda2) {
  const double g1 = sample_gamma(rng, lambda1);
  const double g2 = sample_gamma(rng, lambda2);
  return g1 / (g1 + g2);
}

inline double sample_wt_power(std::mt19937_64& rng, const WeibullParams& p,
                              const WtParams& w) {
  return wt_power_curve(sample_weibull(rng, p), w);
}

inline double sample_pv_power(std::mt19937_64& rng, const BetaParams& b) {
  return b.p_max * sample_beta(rng, b.lambda1, b.lambda2);
}

// Load draw clamped to the same 4-sigma window the discretization uses.
inline double sample_load(std::mt19937_64& rng, const NormalParams& n) {
  if (n.sigma == 0.0) return n.mu;
  const double lo = std::max(0.0, n.mu - 4.0 * n.sigma);
  const double hi = n.mu + 4.0 * n.sigma;
  const double x = n.mu + n.sigma * sample_normal(rng);
  return std::clamp(x, lo, hi);
}

}  // namespace mgsched
