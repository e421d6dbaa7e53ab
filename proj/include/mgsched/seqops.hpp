#pragma once

// Probabilistic sequences: the discretized laws of power variables, and the
// operations on them (expectation, addition- and subtraction-type
// convolution, quantile lookup) that drive the deterministic transformation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "mgsched/common.hpp"
#include "mgsched/uncertainty.hpp"

namespace mgsched {

// A finite nonnegative sequence over indices 0..N with fixed step q (kW per
// index), summing to 1. Entry i is the probability that the variable falls
// in the bin centered at i*q.
struct ProbSeq {
  double step_q = 0.0;        // kW per index
  std::vector<double> probs;  // indices 0..N

  int max_index() const { return static_cast<int>(probs.size()) - 1; }

  void validate() const {
    if (!(step_q > 0.0)) throw ParameterError("sequence step must be > 0");
    if (probs.empty()) throw ParameterError("sequence must not be empty");
    double sum = 0.0;
    for (double p : probs) {
      if (p < 0.0) throw ParameterError("sequence entries must be >= 0");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw ParameterError("sequence probabilities must sum to 1");
  }
};

namespace detail {

inline double integrate_bin(const std::function<double(double)>& f, double lo,
                            double hi) {
  if (!(hi > lo)) return 0.0;
  // tanh-sinh copes with the integrable endpoint singularities a Beta
  // density with shape < 1 produces.
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(f, lo, hi, 1e-10);
}

}  // namespace detail

// Discretize a mixed law into a probabilistic sequence with step q.
// Bin 0 covers [0, q/2), interior bin i covers [i*q - q/2, i*q + q/2) and
// the last bin runs out to support_max. Point masses go to the bin whose
// interval contains them. The result is renormalized to sum exactly 1.
inline ProbSeq discretize(const MixedDistribution& d, double q) {
  if (!(q > 0.0)) throw ParameterError("discretization step must be > 0");
  if (d.support_max < 0.0) throw ParameterError("support_max must be >= 0");

  const int n = static_cast<int>(
      std::ceil(d.support_max / q - 1e-12 * std::max(1.0, d.support_max / q)));
  ProbSeq seq;
  seq.step_q = q;
  seq.probs.assign(static_cast<std::size_t>(std::max(n, 0)) + 1, 0.0);
  const int last = seq.max_index();

  if (d.continuous_density) {
    for (int i = 0; i <= last; ++i) {
      const double lo = std::max(0.0, i * q - q / 2.0);
      const double hi = std::min(i * q + q / 2.0, d.support_max);
      seq.probs[i] = std::max(0.0, detail::integrate_bin(d.continuous_density, lo, hi));
    }
  }
  for (const auto& [power, mass] : d.point_masses) {
    if (mass < 0.0) throw ParameterError("point masses must be >= 0");
    int i = static_cast<int>(std::floor(power / q + 0.5));
    i = std::clamp(i, 0, last);
    seq.probs[i] += mass;
  }

  const double total = std::accumulate(seq.probs.begin(), seq.probs.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-6)
    throw ParameterError("distribution mass is not 1; cannot discretize");
  for (double& p : seq.probs) p /= total;
  return seq;
}

// Expected value in kW: q * sum_i i*probs[i].
inline double expectation(const ProbSeq& s) {
  double acc = 0.0;
  for (std::size_t i = 1; i < s.probs.size(); ++i)
    acc += static_cast<double>(i) * s.probs[i];
  return s.step_q * acc;
}

inline void check_steps(const ProbSeq& a, const ProbSeq& b) {
  if (a.step_q != b.step_q)
    throw StepMismatchError("sequence step sizes differ");
}

// Addition-type convolution: the law of the sum of two independent
// sequence-valued variables. Output length is N_a + N_b + 1.
inline ProbSeq atc(const ProbSeq& a, const ProbSeq& b) {
  check_steps(a, b);
  ProbSeq out;
  out.step_q = a.step_q;
  out.probs.assign(a.probs.size() + b.probs.size() - 1, 0.0);
  for (std::size_t ia = 0; ia < a.probs.size(); ++ia) {
    if (a.probs[ia] == 0.0) continue;
    for (std::size_t ib = 0; ib < b.probs.size(); ++ib)
      out.probs[ia + ib] += a.probs[ia] * b.probs[ib];
  }
  return out;
}

// Subtraction-type convolution: the law of a - b with every nonpositive
// difference folded into index 0. Output length is N_a + 1.
inline ProbSeq stc(const ProbSeq& a, const ProbSeq& b) {
  check_steps(a, b);
  ProbSeq out;
  out.step_q = a.step_q;
  out.probs.assign(a.probs.size(), 0.0);
  for (std::size_t ia = 0; ia < a.probs.size(); ++ia) {
    if (a.probs[ia] == 0.0) continue;
    for (std::size_t ib = 0; ib < b.probs.size(); ++ib) {
      const std::size_t i = ia > ib ? ia - ib : 0;
      out.probs[i] += a.probs[ia] * b.probs[ib];
    }
  }
  return out;
}

// Equivalent-load sequence: load minus the joint wind+PV law, e = d - (a + b).
inline ProbSeq equivalent_load_seq(const ProbSeq& d, const ProbSeq& a,
                                   const ProbSeq& b) {
  return stc(d, atc(a, b));
}

// Smallest index whose cumulative probability reaches alpha. If rounding
// keeps the running sum just short of alpha, the last index carrying mass
// is returned.
inline int quantile_index(const ProbSeq& s, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw ParameterError("quantile level must be in (0, 1]");
  double cum = 0.0;
  int last_support = 0;
  for (std::size_t i = 0; i < s.probs.size(); ++i) {
    cum += s.probs[i];
    if (s.probs[i] > 0.0) last_support = static_cast<int>(i);
    if (cum >= alpha - 1e-12) return static_cast<int>(i);
  }
  return last_support;
}

}  // namespace mgsched
