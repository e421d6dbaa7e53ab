#pragma once

// Revised simplex for bounded-variable LPs with an explicit basis inverse.
//
// Cold solves run the classic two-phase primal method (artificial start).
// Warm solves, used by branch-and-bound child nodes, restore the parent
// basis and run the dual simplex: a node differs from its parent by one
// variable bound, so the parent basis stays dual feasible and typically
// needs only a handful of pivots. Dantzig pricing with a Bland fallback on
// stall; the inverse is refactorized periodically and whenever residuals
// drift.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "mgsched/milp/problem.hpp"

namespace mgsched::milp {

class SimplexSolver {
 public:
  enum class VarState : std::uint8_t { Basic, AtLo, AtUp, FreeNB };

  struct BasisSnapshot {
    std::vector<int> basis;
    std::vector<VarState> state;
    std::vector<double> art_sign;
  };

  explicit SimplexSolver(const MilpProblem& p) : prob_(p) {
    p.validate();
    m_ = static_cast<int>(p.rows.size());
    n_struct_ = static_cast<int>(p.vars.size());
    n_cols_ = n_struct_ + m_;  // structural + one slack per row
    n_all_ = n_cols_ + m_;     // ... + one artificial per row
    cols_.resize(n_cols_);
    for (int i = 0; i < m_; ++i) {
      for (const auto& [j, c] : p.rows[i].coeffs)
        if (c != 0.0) add_coeff(cols_[j], i, c);
      cols_[n_struct_ + i].push_back({i, 1.0});
    }
    b_.resize(m_);
    slack_lo_.resize(m_);
    slack_hi_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      b_[i] = p.rows[i].rhs;
      switch (p.rows[i].rel) {
        case Relation::LessEq: slack_lo_[i] = 0.0; slack_hi_[i] = kInf; break;
        case Relation::GreaterEq: slack_lo_[i] = -kInf; slack_hi_[i] = 0.0; break;
        case Relation::Equal: slack_lo_[i] = 0.0; slack_hi_[i] = 0.0; break;
      }
    }
    const double sense = p.minimize ? 1.0 : -1.0;
    cost_.assign(n_all_, 0.0);
    for (int j = 0; j < n_struct_; ++j) cost_[j] = sense * p.objective[j];
    cmax_ = 1.0;
    for (double c : cost_) cmax_ = std::max(cmax_, std::abs(c));
    bscale_ = 1.0;
    for (double v : b_) bscale_ = std::max(bscale_, std::abs(v));
  }

  LpSolution solve() {
    std::vector<double> lo(n_struct_), hi(n_struct_);
    for (int j = 0; j < n_struct_; ++j) {
      lo[j] = prob_.vars[j].lo;
      hi[j] = prob_.vars[j].hi;
    }
    return solve(lo, hi);
  }

  // Cold solve with overridden structural bounds.
  LpSolution solve(const std::vector<double>& lo, const std::vector<double>& hi) {
    LpSolution out;
    if (!setup_bounds(lo, hi)) {
      out.status = SolveStatus::Infeasible;
      return out;
    }
    if (m_ == 0) return solve_box_only(out);

    x_.assign(n_all_, 0.0);
    state_.assign(n_all_, VarState::AtLo);
    for (int j = 0; j < n_cols_; ++j) set_nonbasic_start(j);

    // Artificial signs follow the start residual so every artificial begins
    // basic at a nonnegative value.
    std::vector<double> r = b_;
    for (int j = 0; j < n_cols_; ++j)
      if (x_[j] != 0.0)
        for (const auto& [i, v] : cols_[j]) r[i] -= v * x_[j];
    art_sign_.assign(m_, 1.0);
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      const int aj = n_cols_ + i;
      art_sign_[i] = (r[i] >= 0.0) ? 1.0 : -1.0;
      basis_[i] = aj;
      state_[aj] = VarState::Basic;
      x_[aj] = std::abs(r[i]);
      lo_[aj] = 0.0;
      hi_[aj] = kInf;
    }
    binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) binv_[static_cast<std::size_t>(i) * m_ + i] = art_sign_[i];
    pivots_since_refactor_ = 0;
    bland_ = false;
    iterations_ = 0;

    phase1_ = true;
    dual_tol_ = 1e-9;
    PhaseResult pr = run_phase();
    if (pr == PhaseResult::IterationLimit)
      throw NumericalError("simplex iteration limit in phase 1");
    if (pr == PhaseResult::Unbounded)
      throw NumericalError("phase 1 reported an unbounded direction");
    double art_mass = 0.0;
    for (int i = 0; i < m_; ++i)
      if (basis_[i] >= n_cols_) art_mass += std::abs(x_[basis_[i]]);
    if (art_mass > 1e-7 * (1.0 + bscale_)) {
      out.status = SolveStatus::Infeasible;
      out.iterations = iterations_;
      return out;
    }
    expel_artificials();
    freeze_artificials();

    phase1_ = false;
    dual_tol_ = 1e-9 * cmax_;
    pr = run_phase();
    if (pr == PhaseResult::IterationLimit)
      throw NumericalError("simplex iteration limit in phase 2");
    if (pr == PhaseResult::Unbounded) {
      out.status = SolveStatus::Unbounded;
      out.iterations = iterations_;
      return out;
    }
    return finalize(out);
  }

  // Warm solve from a parent-optimal basis after bound tightening.
  // Falls back to a cold solve internally if the dual iteration budget runs
  // out or numerics degrade.
  LpSolution solve_warm(const std::vector<double>& lo, const std::vector<double>& hi,
                        const BasisSnapshot& snap) {
    LpSolution out;
    if (!setup_bounds(lo, hi)) {
      out.status = SolveStatus::Infeasible;
      return out;
    }
    if (m_ == 0) return solve_box_only(out);
    try {
      basis_ = snap.basis;
      state_ = snap.state;
      art_sign_ = snap.art_sign;
      freeze_artificials();
      x_.assign(n_all_, 0.0);
      for (int j = 0; j < n_all_; ++j) {
        if (state_[j] == VarState::Basic) continue;
        switch (state_[j]) {
          case VarState::AtLo: x_[j] = lo_[j]; break;
          case VarState::AtUp: x_[j] = hi_[j]; break;
          default: x_[j] = 0.0; break;
        }
        if (!std::isfinite(x_[j])) {  // bound vanished; should not happen in b&b
          throw NumericalError("warm start state references infinite bound");
        }
      }
      pivots_since_refactor_ = 0;
      bland_ = false;
      iterations_ = 0;
      phase1_ = false;
      dual_tol_ = 1e-9 * cmax_;
      refactor();

      const DualResult dr = run_dual();
      if (dr == DualResult::Infeasible) {
        out.status = SolveStatus::Infeasible;
        out.iterations = iterations_;
        return out;
      }
      if (dr == DualResult::GiveUp) return solve(lo, hi);

      // Primal cleanup: confirms optimality or repairs dual drift.
      const PhaseResult pr = run_phase();
      if (pr == PhaseResult::IterationLimit)
        throw NumericalError("simplex iteration limit in warm cleanup");
      if (pr == PhaseResult::Unbounded) {
        out.status = SolveStatus::Unbounded;
        out.iterations = iterations_;
        return out;
      }
      return finalize(out);
    } catch (const NumericalError&) {
      return solve(lo, hi);
    }
  }

  BasisSnapshot snapshot() const { return BasisSnapshot{basis_, state_, art_sign_}; }

 private:
  enum class PhaseResult { Optimal, Unbounded, IterationLimit };
  enum class DualResult { Feasible, Infeasible, GiveUp };

  static void add_coeff(std::vector<std::pair<int, double>>& col, int i, double c) {
    for (auto& e : col)
      if (e.first == i) {
        e.second += c;
        return;
      }
    col.push_back({i, c});
  }

  bool setup_bounds(const std::vector<double>& lo, const std::vector<double>& hi) {
    lo_.assign(n_all_, 0.0);
    hi_.assign(n_all_, 0.0);
    for (int j = 0; j < n_struct_; ++j) {
      if (lo[j] > hi[j] + 1e-12) return false;
      lo_[j] = lo[j];
      hi_[j] = std::max(lo[j], hi[j]);
    }
    for (int i = 0; i < m_; ++i) {
      lo_[n_struct_ + i] = slack_lo_[i];
      hi_[n_struct_ + i] = slack_hi_[i];
    }
    return true;
  }

  void freeze_artificials() {
    for (int j = n_cols_; j < n_all_; ++j) {
      lo_[j] = 0.0;
      hi_[j] = 0.0;
      if (state_[j] != VarState::Basic) x_[j] = 0.0;
    }
  }

  void set_nonbasic_start(int j) {
    if (std::isfinite(lo_[j]) && std::isfinite(hi_[j])) {
      const bool pick_lo = std::abs(lo_[j]) <= std::abs(hi_[j]);
      state_[j] = pick_lo ? VarState::AtLo : VarState::AtUp;
      x_[j] = pick_lo ? lo_[j] : hi_[j];
    } else if (std::isfinite(lo_[j])) {
      state_[j] = VarState::AtLo;
      x_[j] = lo_[j];
    } else if (std::isfinite(hi_[j])) {
      state_[j] = VarState::AtUp;
      x_[j] = hi_[j];
    } else {
      state_[j] = VarState::FreeNB;
      x_[j] = 0.0;
    }
  }

  LpSolution solve_box_only(LpSolution out) {
    out.x.resize(n_struct_);
    for (int j = 0; j < n_struct_; ++j) {
      const double c = cost_[j];
      double v;
      if (c > 0.0) v = lo_[j];
      else if (c < 0.0) v = hi_[j];
      else v = std::isfinite(lo_[j]) ? lo_[j] : (std::isfinite(hi_[j]) ? hi_[j] : 0.0);
      if (!std::isfinite(v)) {
        out.status = SolveStatus::Unbounded;
        return out;
      }
      out.x[j] = v;
    }
    double obj = prob_.objective_offset;
    for (int j = 0; j < n_struct_; ++j) obj += prob_.objective[j] * out.x[j];
    out.objective = obj;
    out.status = SolveStatus::Optimal;
    return out;
  }

  LpSolution finalize(LpSolution out) {
    check_residuals();
    out.status = SolveStatus::Optimal;
    out.iterations = iterations_;
    out.x.resize(n_struct_);
    for (int j = 0; j < n_struct_; ++j) out.x[j] = std::clamp(x_[j], lo_[j], hi_[j]);
    double obj = prob_.objective_offset;
    for (int j = 0; j < n_struct_; ++j) obj += prob_.objective[j] * out.x[j];
    out.objective = obj;
    return out;
  }

  // w = Binv * A_j
  void ftran(int j, std::vector<double>& w) const {
    std::fill(w.begin(), w.end(), 0.0);
    if (j >= n_cols_) {
      const int i = j - n_cols_;
      const double s = art_sign_[i];
      for (int k = 0; k < m_; ++k) w[k] = binv_[static_cast<std::size_t>(k) * m_ + i] * s;
      return;
    }
    for (const auto& [i, v] : cols_[j])
      for (int k = 0; k < m_; ++k) w[k] += binv_[static_cast<std::size_t>(k) * m_ + i] * v;
  }

  // y = Binv^T * c_B
  void btran(std::vector<double>& y) const {
    std::fill(y.begin(), y.end(), 0.0);
    for (int k = 0; k < m_; ++k) {
      const double ck = phase_cost(basis_[k]);
      if (ck == 0.0) continue;
      const double* row = &binv_[static_cast<std::size_t>(k) * m_];
      for (int i = 0; i < m_; ++i) y[i] += ck * row[i];
    }
  }

  double phase_cost(int j) const {
    if (phase1_) return j >= n_cols_ ? 1.0 : 0.0;
    return cost_[j];
  }

  double reduced_cost(int j, const std::vector<double>& y) const {
    double d = phase_cost(j);
    if (j >= n_cols_) {
      d -= y[j - n_cols_] * art_sign_[j - n_cols_];
    } else {
      for (const auto& [i, v] : cols_[j]) d -= y[i] * v;
    }
    return d;
  }

  void refactor() {
    const std::size_t mm = static_cast<std::size_t>(m_);
    std::vector<double> B(mm * mm, 0.0);
    for (int k = 0; k < m_; ++k) {
      const int j = basis_[k];
      if (j >= n_cols_) {
        B[(j - n_cols_) * mm + k] = art_sign_[j - n_cols_];
      } else {
        for (const auto& [i, v] : cols_[j]) B[i * mm + k] = v;
      }
    }
    std::vector<double> inv(mm * mm, 0.0);
    for (int i = 0; i < m_; ++i) inv[i * mm + i] = 1.0;
    for (int c = 0; c < m_; ++c) {
      int piv = -1;
      double best = 1e-12;
      for (int r = c; r < m_; ++r) {
        const double a = std::abs(B[r * mm + c]);
        if (a > best) {
          best = a;
          piv = r;
        }
      }
      if (piv < 0) throw NumericalError("singular basis during refactorization");
      if (piv != c)
        for (int t = 0; t < m_; ++t) {
          std::swap(B[piv * mm + t], B[c * mm + t]);
          std::swap(inv[piv * mm + t], inv[c * mm + t]);
        }
      const double d = B[c * mm + c];
      for (int t = 0; t < m_; ++t) {
        B[c * mm + t] /= d;
        inv[c * mm + t] /= d;
      }
      for (int r = 0; r < m_; ++r) {
        if (r == c) continue;
        const double f = B[r * mm + c];
        if (f == 0.0) continue;
        for (int t = 0; t < m_; ++t) {
          B[r * mm + t] -= f * B[c * mm + t];
          inv[r * mm + t] -= f * inv[c * mm + t];
        }
      }
    }
    binv_.swap(inv);
    pivots_since_refactor_ = 0;
    recompute_basics();
  }

  void residual_into(std::vector<double>& res) const {
    res = b_;
    for (int j = 0; j < n_all_; ++j) {
      if (x_[j] == 0.0) continue;
      if (j >= n_cols_) {
        res[j - n_cols_] -= art_sign_[j - n_cols_] * x_[j];
      } else {
        for (const auto& [i, v] : cols_[j]) res[i] -= v * x_[j];
      }
    }
  }

  void recompute_basics() {
    std::vector<double> rhs = b_;
    for (int j = 0; j < n_all_; ++j) {
      if (state_[j] == VarState::Basic || x_[j] == 0.0) continue;
      if (j >= n_cols_) {
        rhs[j - n_cols_] -= art_sign_[j - n_cols_] * x_[j];
      } else {
        for (const auto& [i, v] : cols_[j]) rhs[i] -= v * x_[j];
      }
    }
    for (int k = 0; k < m_; ++k) {
      double s = 0.0;
      const double* row = &binv_[static_cast<std::size_t>(k) * m_];
      for (int i = 0; i < m_; ++i) s += row[i] * rhs[i];
      x_[basis_[k]] = s;
    }
  }

  void check_residuals() {
    std::vector<double> res;
    residual_into(res);
    const double tol = 1e-7 * (1.0 + bscale_);
    double worst = 0.0;
    for (double e : res) worst = std::max(worst, std::abs(e));
    if (worst <= tol) return;
    refactor();
    residual_into(res);
    worst = 0.0;
    for (double e : res) worst = std::max(worst, std::abs(e));
    if (worst > tol)
      throw NumericalError("simplex residuals exceed tolerance after refactorization");
  }

  // Basis change: entering j moves sigma*t, basic in row r leaves to a bound.
  void pivot(int j, int r, const std::vector<double>& w, double t, double sigma,
             bool leave_at_upper) {
    const int leaving = basis_[r];
    for (int k = 0; k < m_; ++k)
      if (k != r) x_[basis_[k]] -= sigma * t * w[k];
    x_[j] += sigma * t;
    x_[leaving] = leave_at_upper ? hi_[leaving] : lo_[leaving];
    state_[leaving] = leave_at_upper ? VarState::AtUp : VarState::AtLo;
    state_[j] = VarState::Basic;
    basis_[r] = j;

    const double piv = w[r];
    double* rowr = &binv_[static_cast<std::size_t>(r) * m_];
    const double inv_piv = 1.0 / piv;
    for (int i = 0; i < m_; ++i) rowr[i] *= inv_piv;
    for (int k = 0; k < m_; ++k) {
      if (k == r || w[k] == 0.0) continue;
      const double f = w[k];
      double* rowk = &binv_[static_cast<std::size_t>(k) * m_];
      for (int i = 0; i < m_; ++i) rowk[i] -= f * rowr[i];
    }
    if (++pivots_since_refactor_ >= 120) refactor();
  }

  bool entering_eligible(int j, double d) const {
    switch (state_[j]) {
      case VarState::AtLo: return d < -dual_tol_ && hi_[j] > lo_[j];
      case VarState::AtUp: return d > dual_tol_ && hi_[j] > lo_[j];
      case VarState::FreeNB: return std::abs(d) > dual_tol_;
      case VarState::Basic: return false;
    }
    return false;
  }

  PhaseResult run_phase() {
    const long iter_cap = 50000 + 200L * (m_ + n_cols_);
    const long stall_cap = 10L * (m_ + n_cols_) + 200;
    long stalled = 0;
    double best_obj = kInf;
    std::vector<double> y(m_), w(m_);
    for (;;) {
      if (++iterations_ > iter_cap) return PhaseResult::IterationLimit;
      btran(y);
      const int last_col = phase1_ ? n_all_ : n_cols_;
      int enter = -1;
      double enter_d = 0.0;
      if (!bland_) {
        double best = 0.0;
        for (int j = 0; j < last_col; ++j) {
          if (state_[j] == VarState::Basic) continue;
          const double d = reduced_cost(j, y);
          if (entering_eligible(j, d) && std::abs(d) > best) {
            best = std::abs(d);
            enter = j;
            enter_d = d;
          }
        }
      } else {
        for (int j = 0; j < last_col; ++j) {
          if (state_[j] == VarState::Basic) continue;
          const double d = reduced_cost(j, y);
          if (entering_eligible(j, d)) {
            enter = j;
            enter_d = d;
            break;
          }
        }
      }
      if (enter < 0) {
        if (pivots_since_refactor_ > 0) {
          // Confirm optimality on a fresh factorization before returning.
          refactor();
          btran(y);
          bool again = false;
          for (int j = 0; j < last_col && !again; ++j) {
            if (state_[j] == VarState::Basic) continue;
            again = entering_eligible(j, reduced_cost(j, y));
          }
          if (again) continue;
        }
        return PhaseResult::Optimal;
      }

      const double sigma =
          (state_[enter] == VarState::AtUp || (state_[enter] == VarState::FreeNB && enter_d > 0.0))
              ? -1.0
              : 1.0;
      ftran(enter, w);

      // Ratio test: nearest blocking basic bound vs the entering bound flip.
      const double piv_tol = 1e-9;
      double t_basic = kInf;
      int leave_row = -1;
      bool leave_upper = false;
      for (int k = 0; k < m_; ++k) {
        const double wk = sigma * w[k];
        const int bj = basis_[k];
        double t_k;
        bool at_upper;
        if (wk > piv_tol) {
          if (!std::isfinite(lo_[bj])) continue;
          t_k = (x_[bj] - lo_[bj]) / wk;
          at_upper = false;
        } else if (wk < -piv_tol) {
          if (!std::isfinite(hi_[bj])) continue;
          t_k = (hi_[bj] - x_[bj]) / (-wk);
          at_upper = true;
        } else {
          continue;
        }
        if (t_k < 0.0) t_k = 0.0;
        if (t_k < t_basic - 1e-12) {
          t_basic = t_k;
          leave_row = k;
          leave_upper = at_upper;
        } else if (leave_row >= 0 && t_k <= t_basic + 1e-12 && ratio_tie_prefers(k, leave_row, w)) {
          leave_row = k;
          leave_upper = at_upper;
        }
      }

      const double t_flip =
          (state_[enter] == VarState::FreeNB) ? kInf : hi_[enter] - lo_[enter];
      if (leave_row < 0 || t_basic >= t_flip - 1e-12) {
        if (!std::isfinite(t_flip)) {
          if (leave_row >= 0) {
            pivot(enter, leave_row, w, t_basic, sigma, leave_upper);
          } else {
            if (phase1_) throw NumericalError("phase 1 direction unbounded");
            return PhaseResult::Unbounded;
          }
        } else {
          for (int k = 0; k < m_; ++k) x_[basis_[k]] -= sigma * t_flip * w[k];
          x_[enter] = (sigma > 0.0) ? hi_[enter] : lo_[enter];
          state_[enter] = (sigma > 0.0) ? VarState::AtUp : VarState::AtLo;
        }
      } else {
        pivot(enter, leave_row, w, t_basic, sigma, leave_upper);
      }

      double obj = 0.0;
      for (int k = 0; k < m_; ++k) obj += phase_cost(basis_[k]) * x_[basis_[k]];
      for (int j = 0; j < last_col; ++j)
        if (state_[j] != VarState::Basic && x_[j] != 0.0) obj += phase_cost(j) * x_[j];
      if (obj < best_obj - 1e-12 * (1.0 + std::abs(best_obj))) {
        best_obj = obj;
        stalled = 0;
      } else if (++stalled > stall_cap) {
        bland_ = true;
      }
    }
  }

  // Ratio-test tie break: larger pivot magnitude for stability, smallest
  // basic index once Bland's rule is active.
  bool ratio_tie_prefers(int k, int cur, const std::vector<double>& w) const {
    if (bland_) return basis_[k] < basis_[cur];
    return std::abs(w[k]) > std::abs(w[cur]);
  }

  DualResult run_dual() {
    const long iter_cap = 2000 + 20L * m_;
    const double feas_tol = 1e-9 * (1.0 + bscale_);
    std::vector<double> y(m_), w(m_);
    long stalled = 0;
    double best_inf = kInf;
    for (long it = 0; it < iter_cap; ++it) {
      ++iterations_;
      int r = -1;
      double worst = feas_tol;
      bool above = false;
      double total_inf = 0.0;
      for (int k = 0; k < m_; ++k) {
        const int bj = basis_[k];
        const double below = lo_[bj] - x_[bj];
        const double over = x_[bj] - hi_[bj];
        if (below > 0.0) total_inf += below;
        if (over > 0.0) total_inf += over;
        if (below > worst) {
          worst = below;
          r = k;
          above = false;
        }
        if (over > worst) {
          worst = over;
          r = k;
          above = true;
        }
      }
      if (r < 0) return DualResult::Feasible;
      if (total_inf < best_inf - 1e-12 * (1.0 + best_inf)) {
        best_inf = total_inf;
        stalled = 0;
      } else if (++stalled > 5 * m_ + 100) {
        return DualResult::GiveUp;
      }

      btran(y);
      const double* rho = &binv_[static_cast<std::size_t>(r) * m_];
      // Basic value must move up when below its lower bound, down otherwise;
      // d(x_Br)/d(x_j) = -alpha_j with alpha_j = rho . A_j.
      int enter = -1;
      double best_theta = kInf, best_alpha = 0.0;
      for (int j = 0; j < n_cols_; ++j) {
        if (state_[j] == VarState::Basic || hi_[j] - lo_[j] < 1e-15) continue;
        double alpha = 0.0;
        for (const auto& [i, v] : cols_[j]) alpha += rho[i] * v;
        if (std::abs(alpha) < 1e-9) continue;
        bool ok;
        if (!above) {  // x_Br below lo: needs to increase
          ok = (state_[j] == VarState::AtLo && alpha < 0.0) ||
               (state_[j] == VarState::AtUp && alpha > 0.0) ||
               (state_[j] == VarState::FreeNB);
        } else {  // x_Br above hi: needs to decrease
          ok = (state_[j] == VarState::AtLo && alpha > 0.0) ||
               (state_[j] == VarState::AtUp && alpha < 0.0) ||
               (state_[j] == VarState::FreeNB);
        }
        if (!ok) continue;
        const double d = reduced_cost(j, y);
        const double theta = std::abs(d) / std::abs(alpha);
        bool take = enter < 0 || theta < best_theta - 1e-12;
        if (!take && theta <= best_theta + 1e-12 && !bland_ &&
            std::abs(alpha) > std::abs(best_alpha))
          take = true;  // bland mode keeps the lowest index seen first
        if (take) {
          best_theta = std::min(best_theta, theta);
          best_alpha = alpha;
          enter = j;
        }
      }
      if (enter < 0) return DualResult::Infeasible;

      ftran(enter, w);
      if (std::abs(w[r]) < 1e-11) {
        refactor();
        continue;
      }
      const double target = above ? hi_[basis_[r]] : lo_[basis_[r]];
      // Solve x_Br - sigma*t*w_r = target with sigma fixed by the entering
      // variable's movable direction.
      double sigma;
      if (state_[enter] == VarState::AtUp) sigma = -1.0;
      else if (state_[enter] == VarState::AtLo) sigma = 1.0;
      else sigma = ((x_[basis_[r]] - target) / w[r] >= 0.0) ? 1.0 : -1.0;
      double t = (x_[basis_[r]] - target) / (sigma * w[r]);
      if (t < 0.0) t = 0.0;
      pivot(enter, r, w, t, sigma, above);
    }
    return DualResult::GiveUp;
  }

  void expel_artificials() {
    std::vector<double> w(m_);
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < n_cols_) continue;
      const double* rho = &binv_[static_cast<std::size_t>(r) * m_];
      int pick = -1;
      double best = 1e-7;
      for (int j = 0; j < n_cols_; ++j) {
        if (state_[j] == VarState::Basic) continue;
        double alpha = 0.0;
        for (const auto& [i, v] : cols_[j]) alpha += rho[i] * v;
        if (std::abs(alpha) > best) {
          best = std::abs(alpha);
          pick = j;
        }
      }
      if (pick >= 0) {
        ftran(pick, w);
        pivot(pick, r, w, 0.0, 1.0, false);
      }
      // No pivot candidate means the row is redundant; the artificial stays
      // basic and its [0,0] bounds keep it at zero.
    }
  }

  const MilpProblem& prob_;
  int m_ = 0, n_struct_ = 0, n_cols_ = 0, n_all_ = 0;
  std::vector<std::vector<std::pair<int, double>>> cols_;
  std::vector<double> b_, slack_lo_, slack_hi_, cost_;
  std::vector<double> lo_, hi_, x_, binv_, art_sign_;
  std::vector<int> basis_;
  std::vector<VarState> state_;
  double cmax_ = 1.0, bscale_ = 1.0, dual_tol_ = 1e-9;
  bool phase1_ = true, bland_ = false;
  int pivots_since_refactor_ = 0;
  long iterations_ = 0;
};

inline LpSolution solve_lp_relaxation(const MilpProblem& p) {
  SimplexSolver s(p);
  return s.solve();
}

}  // namespace mgsched::milp
