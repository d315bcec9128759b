// Copyright 2026 The entcap developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ENTCAP_SDP_SOLVER_HPP
#define ENTCAP_SDP_SOLVER_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "entcap/eig.hpp"
#include "entcap/sdp_model.hpp"

namespace entcap {
namespace sdp {

// Primal-dual path-following solver for the inequality-form program
//
//   minimize   g . u
//   subject to M_i(u) = B_i + sum_t u_t A_{i,t}  >= 0,
//
// after scalar equalities have been eliminated by pivoting. Slacks S_i track
// M_i(u); multipliers Z_i >= 0 satisfy sum_i <A_{i,t}, Z_i> = g_t at
// optimality. Directions use Nesterov-Todd scaling with Mehrotra
// predictor-corrector steps; the per-iteration Schur complement is assembled
// from the closed form  <A_t, W^-1 A_l W^-1> = 2 Re tr(h_t W^-1 h_l W^-1)
// over the matrix-unit expansions of the columns. Hermitian blocks are
// iterated directly; inner products carry the factor 2 of the real-symmetric
// embedding, so the run is step-for-step the embedded real iteration.
//
// Duality bookkeeping: the dual objective is -sum_i <B_i, Z_i>; once the
// iterates are near-feasible the complementarity gap sum_i <S_i, Z_i> is kept
// non-increasing by backtracking the combined step (infeasible-start
// iterations may grow it while the residuals shrink).

struct SolveOptions;
struct SdpSolution;

struct SolveOptions {
  double gap_tol = 1e-7;
  double feas_tol = 1e-8;
  int max_iter = 200;
  // Backend seam: an external solver can be plugged in behind the same
  // contract; the embedded solver runs when this is empty.
  std::function<SdpSolution(const ConicProgram&, const SolveOptions&)> backend;
  // Uniform slack added to every PSD block. Several of the capability
  // programs have single-point feasible sets (rank-one chi forces
  // chi_tilde = t*chi); the shift restores a strict interior so the central
  // path exists, at an objective perturbation of order shift * ||Z*||.
  double shift = 1e-9;
};

namespace detail {

inline bool chol_lower(const CMatrix& a, CMatrix& l) {
  const std::size_t n = a.rows();
  l = CMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      cxd s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      if (i == j) {
        double re = s.real();
        if (!(re > 0.0)) return false;
        l(i, i) = std::sqrt(re);
      } else {
        l(i, j) = s / l(j, j).real();
      }
    }
  }
  return true;
}

/// X with L X = B (L lower triangular).
inline CMatrix solve_lower(const CMatrix& l, const CMatrix& b) {
  const std::size_t n = l.rows();
  CMatrix x = b;
  for (std::size_t c = 0; c < b.cols(); ++c)
    for (std::size_t i = 0; i < n; ++i) {
      cxd s = x(i, c);
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * x(k, c);
      x(i, c) = s / l(i, i).real();
    }
  return x;
}

/// X with L^dag X = B.
inline CMatrix solve_lower_adj(const CMatrix& l, const CMatrix& b) {
  const std::size_t n = l.rows();
  CMatrix x = b;
  for (std::size_t c = 0; c < b.cols(); ++c)
    for (std::size_t i = n; i-- > 0;) {
      cxd s = x(i, c);
      for (std::size_t k = i + 1; k < n; ++k) s -= std::conj(l(k, i)) * x(k, c);
      x(i, c) = s / l(i, i).real();
    }
  return x;
}

/// L^-1 M L^-dag for Hermitian M.
inline CMatrix congruence_by_inverse(const CMatrix& l, const CMatrix& m) {
  CMatrix c1 = solve_lower(l, m);
  CMatrix c2 = solve_lower(l, c1.adjoint()).adjoint();
  c2.hermitize();
  return c2;
}

/// Largest step alpha with M + alpha*D >= 0, given the Cholesky factor of M.
inline double max_step(const CMatrix& l, const CMatrix& d) {
  CMatrix scaled = congruence_by_inverse(l, d);
  double lam = hermitian_eig(scaled).eigenvalues.front();
  if (lam >= -1e-14) return 1.0;
  return std::min(1.0, -1.0 / lam);
}

/// Dense LDL^T-free Cholesky solve with escalating ridge for the Schur system.
inline bool spd_solve(std::vector<double>& h, std::size_t n, std::vector<double>& rhs1,
                      std::vector<double>& rhs2, bool two_rhs) {
  double tracescale = 0.0;
  for (std::size_t i = 0; i < n; ++i) tracescale += h[i * n + i];
  tracescale = std::max(tracescale / static_cast<double>(n), 1e-300);
  double ridge = 0.0;
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::vector<double> l(h);
    if (ridge > 0.0)
      for (std::size_t i = 0; i < n; ++i) l[i * n + i] += ridge;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        double s = l[i * n + j];
        for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
        if (i == j) {
          if (!(s > 0.0)) {
            ok = false;
            break;
          }
          l[i * n + i] = std::sqrt(s);
        } else {
          l[i * n + j] = s / l[j * n + j];
        }
      }
    }
    if (!ok) {
      ridge = (ridge == 0.0) ? 1e-14 * tracescale : ridge * 100.0;
      continue;
    }
    auto solve_inplace = [&](std::vector<double>& b) {
      for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l[i * n + k] * b[k];
        b[i] = s / l[i * n + i];
      }
      for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= l[k * n + i] * b[k];
        b[i] = s / l[i * n + i];
      }
    };
    solve_inplace(rhs1);
    if (two_rhs) solve_inplace(rhs2);
    return true;
  }
  return false;
}

struct CompiledBlock {
  std::size_t dim = 0;
  CMatrix B;
  std::vector<int> active;                // compact parameter indices used
  std::vector<std::vector<Term>> cols;    // parallel to active
  std::vector<CMatrix> dense_cols;        // materialized columns (heavy blocks)
  bool dense = false;
  double bnorm = 1.0;
};

struct ElimStep {
  std::size_t pivot;
  double rhs;
  std::vector<std::pair<std::size_t, double>> deps;  // u_pivot = rhs - sum c*u_j
};

inline void coalesce(std::vector<Term>& col) {
  if (col.size() < 2) return;
  std::sort(col.begin(), col.end(), [](const Term& a, const Term& b) {
    return a.r != b.r ? a.r < b.r : a.c < b.c;
  });
  std::vector<Term> out;
  for (const Term& t : col) {
    if (!out.empty() && out.back().r == t.r && out.back().c == t.c)
      out.back().coeff += t.coeff;
    else
      out.push_back(t);
  }
  col.clear();
  for (const Term& t : out)
    if (std::abs(t.coeff) > 1e-300) col.push_back(t);
}

}  // namespace detail

class Solver {
 public:
  Solver(const ConicProgram& prog, SolveOptions opt) : prog_(prog), opt_(opt) {}

  SdpSolution run() {
    SdpSolution sol;
    if (!compile(sol)) return finish(sol);
    if (!iterate(sol)) return finish(sol);
    return finish(sol);
  }

 private:
  // --- compile: eliminate equalities, compact parameters ---------------------

  bool compile(SdpSolution& sol) {
    const std::size_t np = prog_.nparams();
    std::vector<std::vector<std::vector<Term>>> cols;  // per constraint, per param
    consts_.clear();
    for (const auto& c : prog_.psd_constraints()) {
      consts_.push_back(c.constant);
      cols.push_back(c.cols);
    }
    obj_ = prog_.objective();
    if (obj_.coeffs.empty()) obj_.coeffs.assign(np, 0.0);

    std::vector<char> eliminated(np, 0);
    std::vector<ScalarAffine> eqs = prog_.eq_constraints();
    for (std::size_t r = 0; r < eqs.size(); ++r) {
      auto& eq = eqs[r];
      std::size_t piv = np;
      double best = 0.0;
      for (std::size_t t = 0; t < np; ++t)
        if (!eliminated[t] && std::abs(eq.coeffs[t]) > best) {
          best = std::abs(eq.coeffs[t]);
          piv = t;
        }
      if (piv == np) {
        if (std::abs(eq.constant) > 1e-9) {
          sol.status = SolveStatus::infeasible;
          return false;
        }
        continue;  // redundant row
      }
      detail::ElimStep step;
      step.pivot = piv;
      double cp = eq.coeffs[piv];
      step.rhs = -eq.constant / cp;  // eq: constant + sum c u = 0
      for (std::size_t t = 0; t < np; ++t)
        if (t != piv && eq.coeffs[t] != 0.0) step.deps.emplace_back(t, eq.coeffs[t] / cp);
      // substitute u_piv = rhs - sum deps into constraints and objective
      for (std::size_t ci = 0; ci < cols.size(); ++ci) {
        auto pivotcol = cols[ci][piv];
        if (pivotcol.empty()) continue;
        for (const Term& term : pivotcol) consts_[ci](term.r, term.c) += step.rhs * term.coeff;
        for (const auto& [t, w] : step.deps)
          for (const Term& term : pivotcol)
            cols[ci][t].push_back({term.r, term.c, -w * term.coeff});
        cols[ci][piv].clear();
      }
      double gp = obj_.coeffs[piv];
      if (gp != 0.0) {
        obj_.constant += gp * step.rhs;
        for (const auto& [t, w] : step.deps) obj_.coeffs[t] -= gp * w;
        obj_.coeffs[piv] = 0.0;
      }
      for (std::size_t r2 = r + 1; r2 < eqs.size(); ++r2) {
        double c2 = eqs[r2].coeffs[piv];
        if (c2 == 0.0) continue;
        eqs[r2].constant += c2 * step.rhs;
        for (const auto& [t, w] : step.deps) eqs[r2].coeffs[t] -= c2 * w;
        eqs[r2].coeffs[piv] = 0.0;
      }
      eliminated[piv] = 1;
      elim_.push_back(std::move(step));
    }

    for (auto& percons : cols)
      for (auto& col : percons) detail::coalesce(col);

    // params appearing in no constraint: fix at zero (or declare unbounded)
    std::vector<char> used(np, 0);
    for (const auto& percons : cols)
      for (std::size_t t = 0; t < np; ++t)
        if (!percons[t].empty()) used[t] = 1;
    compact_.assign(np, -1);
    for (std::size_t t = 0; t < np; ++t) {
      if (eliminated[t]) continue;
      if (!used[t]) {
        if (std::abs(obj_.coeffs[t]) > 1e-12) {
          sol.status = SolveStatus::unbounded;
          return false;
        }
        continue;
      }
      compact_[t] = static_cast<int>(nact_++);
    }
    g_.assign(nact_, 0.0);
    for (std::size_t t = 0; t < np; ++t)
      if (compact_[t] >= 0) g_[compact_[t]] = obj_.coeffs[t];

    blocks_.clear();
    for (std::size_t ci = 0; ci < cols.size(); ++ci) {
      detail::CompiledBlock b;
      b.dim = consts_[ci].rows();
      b.B = consts_[ci];
      b.B.hermitize();
      for (std::size_t r2 = 0; r2 < b.dim; ++r2) b.B(r2, r2) += opt_.shift;
      b.bnorm = 1.0 + b.B.frobenius_norm();
      for (std::size_t t = 0; t < np; ++t)
        if (compact_[t] >= 0 && !cols[ci][t].empty()) {
          b.active.push_back(compact_[t]);
          b.cols.push_back(cols[ci][t]);
        }
      // term-pair Schur assembly is quadratic in the term count; materialize
      // heavy columns and use congruence products instead
      double pair_work = 0.0;
      for (const auto& col : b.cols) pair_work += static_cast<double>(col.size());
      b.dense = pair_work * pair_work > 2.0e5 * std::max<std::size_t>(b.active.size(), 1);
      if (b.dense) {
        for (const auto& col : b.cols) {
          CMatrix m(b.dim, b.dim);
          for (const Term& t2 : col) m(t2.r, t2.c) += t2.coeff;
          b.dense_cols.push_back(std::move(m));
        }
      }
      blocks_.push_back(std::move(b));
    }
    return true;
  }

  // --- per-block helpers -----------------------------------------------------

  static void add_linear(const detail::CompiledBlock& b, const std::vector<double>& u,
                         CMatrix& m) {
    for (std::size_t j = 0; j < b.active.size(); ++j) {
      double uj = u[b.active[j]];
      if (uj == 0.0) continue;
      for (const Term& t : b.cols[j]) m(t.r, t.c) += uj * t.coeff;
    }
  }

  /// <A_t, M> = 2 Re sum conj(c) M(r, c) accumulated into out.
  static void add_adjoint_dot(const detail::CompiledBlock& b, const CMatrix& m,
                              std::vector<double>& out, double sign) {
    for (std::size_t j = 0; j < b.active.size(); ++j) {
      cxd acc = 0.0;
      for (const Term& t : b.cols[j]) acc += std::conj(t.coeff) * m(t.r, t.c);
      out[b.active[j]] += sign * 2.0 * acc.real();
    }
  }

  // --- main loop --------------------------------------------------------------

  bool iterate(SdpSolution& sol) {
    const std::size_t nb = blocks_.size();
    const std::size_t p = nact_;
    if (p == 0) {  // constant problem
      sol.status = SolveStatus::optimal;
      u_.assign(0, 0.0);
      double worst = 0.0;
      for (const auto& b : blocks_) worst = std::max(worst, -min_eigenvalue(b.B));
      if (worst > opt_.feas_tol) sol.status = SolveStatus::infeasible;
      return true;
    }

    std::vector<CMatrix> S(nb), Z(nb);
    double nu = 0.0;
    for (std::size_t i = 0; i < nb; ++i) {
      double tau = blocks_[i].bnorm;
      S[i] = CMatrix::identity(blocks_[i].dim);
      S[i] *= cxd(tau, 0.0);
      Z[i] = CMatrix::identity(blocks_[i].dim);
      nu += 2.0 * static_cast<double>(blocks_[i].dim);
    }
    u_.assign(p, 0.0);

    double gnorm = 1.0;
    for (double v : g_) gnorm = std::max(gnorm, std::abs(v));

    std::vector<CMatrix> Rp(nb), Winv(nb), G(nb), Gi(nb), Rc(nb), dS(nb), dZ(nb), dSc(nb),
        dZc(nb), Ls(nb), Lz(nb);
    std::vector<std::vector<double>> sigma(nb);
    std::vector<double> rd(p), rhs(p), rhs2(p), du(p), duc(p);
    std::vector<double> h(p * p);

    double best_gap = 1e300, best_dinf = 1e300;
    int stall = 0;

    for (int it = 0; it < opt_.max_iter; ++it) {
      // residuals
      double pinf = 0.0;
      for (std::size_t i = 0; i < nb; ++i) {
        Rp[i] = blocks_[i].B;
        add_linear(blocks_[i], u_, Rp[i]);
        Rp[i].hermitize();
        Rp[i] -= S[i];
        pinf = std::max(pinf, Rp[i].frobenius_norm() / blocks_[i].bnorm);
      }
      std::fill(rd.begin(), rd.end(), 0.0);
      for (std::size_t i = 0; i < nb; ++i) add_adjoint_dot(blocks_[i], Z[i], rd, -1.0);
      for (std::size_t t = 0; t < p; ++t) rd[t] += g_[t];
      double dinf = 0.0;
      for (double v : rd) dinf = std::max(dinf, std::abs(v) / gnorm);

      double gap = 0.0, dobj = 0.0;
      for (std::size_t i = 0; i < nb; ++i) {
        gap += 2.0 * hs_inner(S[i], Z[i]).real();
        dobj -= 2.0 * hs_inner(blocks_[i].B, Z[i]).real();
      }
      double pobj = obj_.constant;
      for (std::size_t t = 0; t < p; ++t) pobj += g_[t] * u_[t];
      double relgap = gap / (1.0 + std::abs(pobj) + std::abs(dobj));

      bool near_feasible = pinf <= 1e2 * opt_.feas_tol && dinf <= 1e2 * opt_.feas_tol;
      sol.iterations = it;
      sol.gap = relgap;
      sol.primal_residual = pinf;
      sol.dual_residual = dinf;
      // the duality gap only means anything near feasibility; infeasible-start
      // iterations may legitimately grow <S,Z> while the residuals shrink
      if (near_feasible) sol.gap_history.push_back(gap);
      sol.optimal_value = pobj;
      dobj_ = dobj + obj_.constant;

      if (pinf <= opt_.feas_tol && dinf <= opt_.feas_tol && relgap <= opt_.gap_tol) {
        sol.status = SolveStatus::optimal;
        return true;
      }

      // divergence certificates
      double znorm = 0.0;
      for (std::size_t i = 0; i < nb; ++i) znorm += Z[i].frobenius_norm();
      if (znorm > 1.0) {
        double statn = 0.0, bz = 0.0;
        std::vector<double> az(p, 0.0);
        for (std::size_t i = 0; i < nb; ++i) {
          add_adjoint_dot(blocks_[i], Z[i], az, 1.0);
          bz += 2.0 * hs_inner(blocks_[i].B, Z[i]).real();
        }
        for (double v : az) statn = std::max(statn, std::abs(v));
        if (statn / znorm < 1e-9 && bz / znorm < -1e-7) {
          sol.status = SolveStatus::infeasible;
          return true;
        }
      }
      double unorm = 0.0;
      for (double v : u_) unorm = std::max(unorm, std::abs(v));
      if ((pobj < -1e4 * (1.0 + std::abs(obj_.constant)) || unorm > 1e6) &&
          ray_unbounded(u_)) {
        sol.status = SolveStatus::unbounded;
        return true;
      }

      if (gap < best_gap * (1.0 - 1e-10) || dinf < best_dinf * (1.0 - 1e-6))
        stall = 0;
      else if (++stall > 12) {
        // Degenerate optima (single-point feasible sets) keep the dual from
        // attaining its optimum; the primal side and the complementarity gap
        // still certify the value, which is what status=optimal promises.
        if (ray_unbounded(u_)) {
          sol.status = SolveStatus::unbounded;
          return true;
        }
        sol.status = (pinf <= opt_.feas_tol && relgap <= opt_.gap_tol && dinf <= 1e-3)
                         ? SolveStatus::optimal
                         : SolveStatus::max_iterations;
        return true;
      }
      best_gap = std::min(best_gap, gap);
      best_dinf = std::min(best_dinf, dinf);

      double mu = gap / nu;

      // Nesterov-Todd scaling per block
      bool scaled_ok = true;
      for (std::size_t i = 0; i < nb; ++i) {
        const std::size_t d = blocks_[i].dim;
        if (!chol_with_jitter(S[i], Ls[i]) || !chol_with_jitter(Z[i], Lz[i])) {
          scaled_ok = false;
          break;
        }
        CMatrix t = Ls[i].adjoint() * Z[i] * Ls[i];
        t.hermitize();
        HermitianEig eig = hermitian_eig(t);
        sigma[i].resize(d);
        CMatrix vs(d, d), vsi(d, d);
        for (std::size_t k = 0; k < d; ++k) {
          double lam = std::max(eig.eigenvalues[k], 1e-280);
          double s = std::sqrt(lam);  // sigma_k
          sigma[i][k] = s;
          double si = 1.0 / std::sqrt(s), sp = std::sqrt(s);
          for (std::size_t r = 0; r < d; ++r) {
            vs(r, k) = eig.eigenvectors(r, k) * si;   // V diag(sigma^-1/2)
            vsi(r, k) = eig.eigenvectors(r, k) * sp;  // V diag(sigma^1/2)
          }
        }
        G[i] = Ls[i] * vs;
        CMatrix linv = detail::solve_lower(Ls[i], CMatrix::identity(d));
        Gi[i] = vsi.adjoint() * linv;
        Winv[i] = Gi[i].adjoint() * Gi[i];
        Winv[i].hermitize();
      }
      if (!scaled_ok) {
        sol.status = SolveStatus::max_iterations;
        return true;
      }

      // Schur complement H_tl = sum_i 2 Re tr(h_t Winv h_l Winv)
      std::fill(h.begin(), h.end(), 0.0);
      for (std::size_t i = 0; i < nb; ++i) {
        const auto& blk = blocks_[i];
        const CMatrix& w = Winv[i];
        const std::size_t na = blk.active.size();
        if (blk.dense) {
          for (std::size_t aj = 0; aj < na; ++aj) {
            int tj = blk.active[aj];
            CMatrix k = w * blk.dense_cols[aj] * w;
            for (std::size_t al = 0; al <= aj; ++al) {
              int tl = blk.active[al];
              const CMatrix& a = blk.dense_cols[al];
              cxd acc = 0.0;
              for (std::size_t r2 = 0; r2 < blk.dim; ++r2)
                for (std::size_t c2 = 0; c2 < blk.dim; ++c2)
                  acc += a(r2, c2) * k(c2, r2);
              double v = 2.0 * acc.real();
              h[tj * p + tl] += v;
              if (tj != tl) h[tl * p + tj] += v;
            }
          }
          continue;
        }
        for (std::size_t aj = 0; aj < na; ++aj) {
          int tj = blk.active[aj];
          for (std::size_t al = 0; al <= aj; ++al) {
            int tl = blk.active[al];
            cxd acc = 0.0;
            for (const Term& tm : blk.cols[aj])
              for (const Term& tn : blk.cols[al])
                acc += tm.coeff * tn.coeff * w(tm.c, tn.r) * w(tn.c, tm.r);
            double v = 2.0 * acc.real();
            h[tj * p + tl] += v;
            if (tj != tl) h[tl * p + tj] += v;
          }
        }
      }

      // predictor (affine) direction: Rc = -S
      auto build_rhs = [&](const std::vector<CMatrix>& rc, std::vector<double>& out) {
        std::fill(out.begin(), out.end(), 0.0);
        for (std::size_t t = 0; t < p; ++t) out[t] -= rd[t];
        for (std::size_t i = 0; i < nb; ++i) {
          CMatrix m = rc[i] - Rp[i];
          m = Winv[i] * m * Winv[i];
          m.hermitize();
          add_adjoint_dot(blocks_[i], m, out, 1.0);
        }
      };
      for (std::size_t i = 0; i < nb; ++i) {
        Rc[i] = S[i];
        Rc[i] *= cxd(-1.0, 0.0);
      }
      build_rhs(Rc, rhs);
      std::vector<double> hcopy(h);
      std::vector<double> dummy;
      if (!detail::spd_solve(hcopy, p, rhs, dummy, false)) {
        sol.status = SolveStatus::max_iterations;
        return true;
      }
      du = rhs;
      compute_dirs(du, Rc, Rp, Winv, dS, dZ);

      double aS = 1.0, aZ = 1.0;
      for (std::size_t i = 0; i < nb; ++i) {
        aS = std::min(aS, detail::max_step(Ls[i], dS[i]));
        aZ = std::min(aZ, detail::max_step(Lz[i], dZ[i]));
      }
      const double tau0 = 0.99;
      double gap_aff = 0.0;
      for (std::size_t i = 0; i < nb; ++i) {
        CMatrix sa = S[i];
        CMatrix t1 = dS[i];
        t1 *= cxd(tau0 * aS, 0.0);
        sa += t1;
        CMatrix za = Z[i];
        CMatrix t2 = dZ[i];
        t2 *= cxd(tau0 * aZ, 0.0);
        za += t2;
        gap_aff += 2.0 * hs_inner(sa, za).real();
      }
      double sigma_c = std::pow(std::max(gap_aff, 0.0) / gap, 3.0);
      sigma_c = std::min(1.0, std::max(1e-10, sigma_c));

      // corrector: Rc = G [ Lyap^-1(sigma mu I - Sigma^2 - Ha) ] G^dag
      for (std::size_t i = 0; i < nb; ++i) {
        const std::size_t d = blocks_[i].dim;
        CMatrix dshat = Gi[i] * dS[i] * Gi[i].adjoint();
        CMatrix dzhat = G[i].adjoint() * dZ[i] * G[i];
        CMatrix ha = dshat * dzhat + dzhat * dshat;
        ha *= cxd(0.5, 0.0);
        ha.hermitize();
        CMatrix rhs_scaled(d, d);
        for (std::size_t a = 0; a < d; ++a)
          for (std::size_t b2 = 0; b2 < d; ++b2) {
            cxd val = -ha(a, b2);
            if (a == b2) val += sigma_c * mu - sigma[i][a] * sigma[i][a];
            rhs_scaled(a, b2) = 2.0 * val / (sigma[i][a] + sigma[i][b2]);
          }
        Rc[i] = G[i] * rhs_scaled * G[i].adjoint();
        Rc[i].hermitize();
      }
      build_rhs(Rc, rhs2);
      if (!detail::spd_solve(h, p, rhs2, dummy, false)) {
        sol.status = SolveStatus::max_iterations;
        return true;
      }
      duc = rhs2;
      compute_dirs(duc, Rc, Rp, Winv, dSc, dZc);

      double bS = 1.0, bZ = 1.0;
      for (std::size_t i = 0; i < nb; ++i) {
        bS = std::min(bS, detail::max_step(Ls[i], dSc[i]));
        bZ = std::min(bZ, detail::max_step(Lz[i], dZc[i]));
      }
      double tau = 0.98;
      double alphaS = tau * bS, alphaZ = tau * bZ;

      // keep the complementarity gap monotone
      double c0 = 0.0, cS = 0.0, cZ = 0.0, cSZ = 0.0;
      for (std::size_t i = 0; i < nb; ++i) {
        c0 += 2.0 * hs_inner(S[i], Z[i]).real();
        cS += 2.0 * hs_inner(dSc[i], Z[i]).real();
        cZ += 2.0 * hs_inner(S[i], dZc[i]).real();
        cSZ += 2.0 * hs_inner(dSc[i], dZc[i]).real();
      }
      int bt = 0;
      while (near_feasible &&
             c0 + alphaS * cS + alphaZ * cZ + alphaS * alphaZ * cSZ > gap * (1.0 + 1e-12) &&
             bt++ < 40) {
        alphaS *= 0.8;
        alphaZ *= 0.8;
      }

      for (std::size_t t = 0; t < p; ++t) u_[t] += alphaS * duc[t];
      for (std::size_t i = 0; i < nb; ++i) {
        CMatrix t1 = dSc[i];
        t1 *= cxd(alphaS, 0.0);
        S[i] += t1;
        S[i].hermitize();
        CMatrix t2 = dZc[i];
        t2 *= cxd(alphaZ, 0.0);
        Z[i] += t2;
        Z[i].hermitize();
      }
    }
    if (ray_unbounded(u_)) {
      sol.status = SolveStatus::unbounded;
      return true;
    }
    sol.status = (sol.primal_residual <= opt_.feas_tol && sol.gap <= opt_.gap_tol &&
                  sol.dual_residual <= 1e-3)
                     ? SolveStatus::optimal
                     : SolveStatus::max_iterations;
    return true;
  }

  /// True when d (after normalization) is an improving feasible ray:
  /// g.d < 0 and A_i(d) >= 0 for every block, certifying unboundedness.
  bool ray_unbounded(const std::vector<double>& d) const {
    double nrm = 0.0;
    for (double v : d) nrm = std::max(nrm, std::abs(v));
    if (nrm < 1e-8) return false;
    double gd = 0.0;
    for (std::size_t t = 0; t < d.size() && t < g_.size(); ++t) gd += g_[t] * d[t];
    gd /= nrm;
    if (gd > -1e-9) return false;
    for (const auto& b : blocks_) {
      CMatrix m(b.dim, b.dim);
      for (std::size_t j = 0; j < b.active.size(); ++j) {
        double v = d[b.active[j]] / nrm;
        if (v == 0.0) continue;
        for (const Term& t : b.cols[j]) m(t.r, t.c) += v * t.coeff;
      }
      m.hermitize();
      if (min_eigenvalue(m) < -1e-8 * (1.0 + m.frobenius_norm())) return false;
    }
    return true;
  }

  bool chol_with_jitter(CMatrix m, CMatrix& l) {
    double scale = 1.0 + m.trace().real() / static_cast<double>(m.rows());
    double jit = 0.0;
    for (int k = 0; k < 12; ++k) {
      if (jit > 0.0) {
        CMatrix j = CMatrix::identity(m.rows());
        j *= cxd(jit, 0.0);
        m += j;
      }
      if (detail::chol_lower(m, l)) return true;
      jit = (jit == 0.0) ? 1e-14 * std::abs(scale) : jit * 100.0;
    }
    return false;
  }

  void compute_dirs(const std::vector<double>& du, const std::vector<CMatrix>& rc,
                    const std::vector<CMatrix>& rp, const std::vector<CMatrix>& winv,
                    std::vector<CMatrix>& ds, std::vector<CMatrix>& dz) {
    const std::size_t nb = blocks_.size();
    ds.resize(nb);
    dz.resize(nb);
    for (std::size_t i = 0; i < nb; ++i) {
      CMatrix adu(blocks_[i].dim, blocks_[i].dim);
      add_linear_du(blocks_[i], du, adu);
      adu.hermitize();
      ds[i] = adu + rp[i];           // dS = A(du) + Rp
      CMatrix m = rc[i] - ds[i];     // dZ = Winv (Rc - dS) Winv
      dz[i] = winv[i] * m * winv[i];
      dz[i].hermitize();
    }
  }

  static void add_linear_du(const detail::CompiledBlock& b, const std::vector<double>& du,
                            CMatrix& m) {
    for (std::size_t j = 0; j < b.active.size(); ++j) {
      double v = du[b.active[j]];
      if (v == 0.0) continue;
      for (const Term& t : b.cols[j]) m(t.r, t.c) += v * t.coeff;
    }
  }

  SdpSolution finish(SdpSolution sol) {
    // expand compacted solution back to the full parameter vector
    const std::size_t np = prog_.nparams();
    std::vector<double> full(np, 0.0);
    for (std::size_t t = 0; t < np; ++t)
      if (compact_.size() == np && compact_[t] >= 0 &&
          static_cast<std::size_t>(compact_[t]) < u_.size())
        full[t] = u_[compact_[t]];
    for (auto it = elim_.rbegin(); it != elim_.rend(); ++it) {
      double v = it->rhs;
      for (const auto& [t, w] : it->deps) v -= w * full[t];
      full[it->pivot] = v;
    }
    full_u_ = full;
    sol.full_parameters = full;
    sol.dual_objective = dobj_;
    sol.optimal_value = prog_.objective().coeffs.empty()
                            ? prog_.objective().constant
                            : prog_.objective().eval(full);
    for (const auto& v : prog_.variables())
      sol.variable_values.push_back(layout::assemble(v.dim, full.data() + v.offset));
    return sol;
  }

 public:
  const std::vector<double>& full_solution() const { return full_u_; }
  double dual_objective() const { return dobj_; }

 private:
  const ConicProgram& prog_;
  SolveOptions opt_;
  std::vector<CMatrix> consts_;
  std::vector<detail::CompiledBlock> blocks_;
  std::vector<detail::ElimStep> elim_;
  std::vector<int> compact_;
  std::size_t nact_ = 0;
  ScalarAffine obj_;
  std::vector<double> g_;
  std::vector<double> u_;
  std::vector<double> full_u_;
  double dobj_ = 0.0;
};

inline SdpSolution solve(const ConicProgram& prog, SolveOptions opt = {}) {
  if (opt.backend) return opt.backend(prog, opt);
  Solver s(prog, opt);
  return s.run();
}

}  // namespace sdp
}  // namespace entcap

#endif  // ENTCAP_SDP_SOLVER_HPP
