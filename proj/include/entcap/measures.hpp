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

#ifndef ENTCAP_MEASURES_HPP
#define ENTCAP_MEASURES_HPP

#include <optional>
#include <string>
#include <vector>

#include "entcap/channel_reps.hpp"
#include "entcap/qpt.hpp"
#include "entcap/rng.hpp"
#include "entcap/sdp_solver.hpp"

namespace entcap {

// Capability measures for two-qubit processes.
//
// A process is preservation-incapable when every output state is separable,
// i.e. when "partial transpose after the channel" is a positive map (the
// two-qubit PPT criterion). Positivity of a map is not semidefinite-
// representable, so membership is encoded through the stronger certificate
// that the composed map is itself a valid CP process:
//
//   chi_tilde >= 0   and   chi_sep(chi_tilde) >= 0,
//
// where chi_sep is the process matrix of PT_B composed with the channel (an
// index permutation of chi_tilde). This certificate forces every output to
// be PPT. Note the two natural relaxations fail: PSD-plus-PPT checks on the
// 16 tomography outputs alone do not extend to all inputs (a general input
// decomposes over them with negative coefficients, and an SDP readily finds
// a CP channel passing all 16 checks while emitting entangled outputs
// elsewhere), while demanding only positivity would admit channels such as
// full one-sided depolarization whose composed map is positive but not CP.
//
// Creation-incapable processes keep separable inputs separable. That set is
// not exactly SDP-representable; following the tomography feasibility
// argument it is outer-approximated by PSD-ness of the 16 canonical outputs
// plus PPT-ness on a separable discretization set (the 36 Pauli-eigenstate
// products by default, optionally augmented with random pure products).
// Reported creation measures are therefore lower bounds; a sampling audit
// quantifies the gap.

/// chi of the map rho -> PT_B(channel(rho)): swaps the B-side ket bit between
/// row and column indices of chi.
inline CMatrix pt_compose_chi(const CMatrix& chi) {
  if (chi.rows() != 16 || chi.cols() != 16)
    throw std::invalid_argument("pt_compose_chi: two-qubit chi expected");
  CMatrix out(16, 16);
  for (std::size_t r = 0; r < 16; ++r)
    for (std::size_t c = 0; c < 16; ++c) {
      std::size_t rp = (r & ~std::size_t{2}) | (c & std::size_t{2});
      std::size_t cp = (c & ~std::size_t{2}) | (r & std::size_t{2});
      out(rp, cp) = chi(r, c);
    }
  return out;
}

inline sdp::MatrixAffine pt_compose_expr(const sdp::MatrixAffine& e) {
  if (e.dim != 16) throw std::invalid_argument("pt_compose_expr: 16x16 expressions only");
  sdp::MatrixAffine out(16, e.cols.size());
  out.constant = pt_compose_chi(e.constant);
  for (std::size_t t = 0; t < e.cols.size(); ++t)
    for (const sdp::Term& term : e.cols[t]) {
      std::size_t r = static_cast<std::size_t>(term.r), c = static_cast<std::size_t>(term.c);
      std::size_t rp = (r & ~std::size_t{2}) | (c & std::size_t{2});
      std::size_t cp = (c & ~std::size_t{2}) | (r & std::size_t{2});
      out.cols[t].push_back({static_cast<int>(rp), static_cast<int>(cp), term.coeff});
    }
  return out;
}

enum class IncapableFlavor { preservation, creation };

/// Constraint fragment shared by all programs of one flavor.
struct IncapableConstraintSet {
  IncapableFlavor flavor = IncapableFlavor::preservation;
  std::vector<DensityMatrix> creation_inputs;  // PT-constrained states (creation)
  std::vector<DensityMatrix> extra_products;   // optional augmentation (creation)

  static IncapableConstraintSet preservation() {
    return IncapableConstraintSet{IncapableFlavor::preservation, {}, {}};
  }
  static IncapableConstraintSet creation(std::vector<DensityMatrix> extra = {}) {
    IncapableConstraintSet s;
    s.flavor = IncapableFlavor::creation;
    s.creation_inputs = pauli_product_states();
    s.extra_products = std::move(extra);
    return s;
  }

  /// Adds the membership constraints for `x` to `p`.
  void apply(sdp::ConicProgram& p, const sdp::VarHandle& x) const {
    if (flavor == IncapableFlavor::preservation) {
      p.add_psd(p.var_expr(x));
      p.add_psd(pt_compose_expr(p.var_expr(x)));
      return;
    }
    for (const auto& st : qpt_input_set(2).states)
      p.add_psd(p.apply_expr(x, 2, st.matrix()));
    for (const auto& st : creation_inputs)
      p.add_psd(sdp::ConicProgram::transpose_expr(p.apply_expr(x, 2, st.matrix()),
                                                  Subsystem::B));
    for (const auto& st : extra_products)
      p.add_psd(sdp::ConicProgram::transpose_expr(p.apply_expr(x, 2, st.matrix()),
                                                  Subsystem::B));
  }
};

struct SolverDiagnostics {
  std::string status = "unsolved";
  double gap = 0.0;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double replay_violation = 0.0;  // worst constraint violation of the returned point
  double replay_objective_error = 0.0;
};

struct MeasureResult {
  double value = 0.0;
  SolverDiagnostics diag;
  CMatrix optimizer;  // the optimal chi_tilde
  bool optimal() const { return diag.status == "optimal"; }
};

namespace detail {

inline void require_normalized(const ProcessMatrix& chi, const char* who) {
  if (chi.n_qubits() != 2)
    throw std::invalid_argument(std::string(who) + ": two-qubit process required");
  if (std::abs(chi.trace() - 1.0) > 1e-6)
    throw std::invalid_argument(std::string(who) +
                                ": process must be normalized (trace 1); call normalize()");
}

inline SolverDiagnostics diag_of(const sdp::SdpSolution& s) {
  SolverDiagnostics d;
  d.status = sdp::to_string(s.status);
  d.gap = s.gap;
  d.iterations = s.iterations;
  d.primal_residual = s.primal_residual;
  d.dual_residual = s.dual_residual;
  return d;
}

inline MeasureResult run(sdp::ConicProgram& p, double sign, double gap_tol) {
  sdp::SolveOptions opt;
  opt.gap_tol = gap_tol;
  sdp::SdpSolution s = sdp::solve(p, opt);
  MeasureResult r;
  r.value = sign * s.optimal_value;
  r.diag = diag_of(s);
  // certificate replay: the returned point must satisfy the program it came
  // from and reproduce the reported objective
  r.diag.replay_violation = p.max_violation(s.full_parameters);
  r.diag.replay_objective_error = std::abs(p.objective().eval(s.full_parameters) -
                                           s.optimal_value);
  if (!s.variable_values.empty()) r.optimizer = s.variable_values.front();
  return r;
}

}  // namespace detail

namespace detail {

/// For the preservation flavor, 0 <= chi_tilde <= chi confines chi_tilde to
/// the face spanned by chi's eigenvectors. Writing chi_tilde as
/// V sqrt(D) Y sqrt(D) V^dag turns the sandwich into the perfectly scaled
/// box 0 <= Y <= I, which keeps the central path alive both for rank-one chi
/// (unitary gates) and for the nearly-degenerate spectra of weakly damped
/// dynamics. Eigenvalues below 1e-9 * lambda_max carry at most that much
/// trace and are dropped.
inline void scaled_alpha_program(const ProcessMatrix& chi, sdp::ConicProgram& p) {
  CMatrix h = chi.chi();
  h.hermitize();
  HermitianEig eig = hermitian_eig(h);
  double lmax = std::max(eig.eigenvalues.back(), 0.0);
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < 16; ++k)
    if (eig.eigenvalues[k] > 1e-9 * std::max(lmax, 1.0)) keep.push_back(k);
  std::size_t r = keep.size();
  if (r == 0) throw std::invalid_argument("alpha: zero process matrix");

  auto y = p.add_hermitian(r, "face");
  sdp::MatrixAffine lift(16, p.nparams());
  sdp::layout::for_each_param(r, [&](std::size_t t, std::vector<sdp::Term> terms) {
    std::vector<sdp::Term> out;
    for (const sdp::Term& term : terms) {
      double sr = std::sqrt(eig.eigenvalues[keep[term.r]]);
      double sc = std::sqrt(eig.eigenvalues[keep[term.c]]);
      for (std::size_t a = 0; a < 16; ++a)
        for (std::size_t b = 0; b < 16; ++b) {
          cxd v = term.coeff * sr * sc * eig.eigenvectors(a, keep[term.r]) *
                  std::conj(eig.eigenvectors(b, keep[term.c]));
          if (std::abs(v) > 1e-16)
            out.push_back({static_cast<int>(a), static_cast<int>(b), v});
        }
    }
    sdp::detail::coalesce(out);
    lift.cols[y.offset + t] = std::move(out);
  });

  p.add_psd(p.var_expr(y));  // Y >= 0  <=>  chi_tilde >= 0 on the face
  sdp::MatrixAffine upper(r, p.nparams());
  for (std::size_t k = 0; k < r; ++k) upper.constant(k, k) = 1.0;
  upper = upper - p.var_expr(y);
  p.add_psd(upper);          // Y <= I  <=>  chi - chi_tilde >= 0
  p.add_psd(pt_compose_expr(lift));
  sdp::ScalarAffine obj(p.nparams());
  obj.constant = 1.0;
  for (std::size_t k = 0; k < r; ++k) obj.coeffs[y.offset + k] = -eig.eigenvalues[keep[k]];
  p.minimize(obj);
}

}  // namespace detail

/// Smallest weight of capable process in any convex split of chi.
inline MeasureResult alpha_measure(const ProcessMatrix& chi, const IncapableConstraintSet& set,
                                   double gap_tol = 1e-7) {
  detail::require_normalized(chi, "alpha");
  if (set.flavor == IncapableFlavor::preservation) {
    sdp::ConicProgram p;
    detail::scaled_alpha_program(chi, p);
    return detail::run(p, 1.0, gap_tol);
  }
  sdp::ConicProgram p;
  auto x = p.add_hermitian(16, "chi_tilde");
  p.add_psd(p.const_expr(chi.chi()) - p.var_expr(x));
  set.apply(p, x);
  p.minimize(p.scalar_const(1.0) - p.trace_expr(x));
  return detail::run(p, 1.0, gap_tol);
}

/// Least admixture of noise that lands chi inside the incapable set.
inline MeasureResult beta_measure(const ProcessMatrix& chi, const IncapableConstraintSet& set,
                                  double gap_tol = 1e-7) {
  detail::require_normalized(chi, "beta");
  sdp::ConicProgram p;
  auto x = p.add_hermitian(16, "chi_tilde");
  p.add_psd(p.var_expr(x) - p.const_expr(chi.chi()));
  p.add_scalar_ineq(p.trace_expr(x) - p.scalar_const(1.0));
  set.apply(p, x);
  p.minimize(p.trace_expr(x) - p.scalar_const(1.0));
  return detail::run(p, 1.0, gap_tol);
}

inline MeasureResult alpha_pre(const ProcessMatrix& chi, double gap_tol = 1e-7) {
  return alpha_measure(chi, IncapableConstraintSet::preservation(), gap_tol);
}
inline MeasureResult beta_pre(const ProcessMatrix& chi, double gap_tol = 1e-7) {
  return beta_measure(chi, IncapableConstraintSet::preservation(), gap_tol);
}
inline MeasureResult alpha_cre(const ProcessMatrix& chi,
                               std::vector<DensityMatrix> extra = {}, double gap_tol = 1e-7) {
  return alpha_measure(chi, IncapableConstraintSet::creation(std::move(extra)), gap_tol);
}
inline MeasureResult beta_cre(const ProcessMatrix& chi, std::vector<DensityMatrix> extra = {},
                              double gap_tol = 1e-7) {
  return beta_measure(chi, IncapableConstraintSet::creation(std::move(extra)), gap_tol);
}

/// Process fidelity tr(chi_a chi_b) of normalized process matrices.
inline double f_expt(const ProcessMatrix& chi, const ProcessMatrix& target) {
  if (chi.dim() != target.dim()) throw std::invalid_argument("f_expt: dimension mismatch");
  return hs_inner(chi.chi(), target.chi()).real();
}

/// Best process fidelity any preservation-incapable process reaches on the
/// target; exceeding it certifies preservability.
inline MeasureResult f_threshold(const ProcessMatrix& target, double gap_tol = 1e-7) {
  detail::require_normalized(target, "f_threshold");
  sdp::ConicProgram p;
  auto x = p.add_hermitian(16, "chi_tilde");
  IncapableConstraintSet::preservation().apply(p, x);
  p.add_eq(p.trace_expr(x) - p.scalar_const(1.0));
  p.minimize(-1.0 * p.trace_product_expr(x, target.chi()));
  return detail::run(p, -1.0, gap_tol);
}

/// Direct incapability membership test (no SDP): the process and its
/// PT-composed process matrix are both PSD, so every output is PPT.
inline bool is_incapable(const ProcessMatrix& chi, double tol = 1e-7) {
  detail::require_normalized(chi, "is_incapable");
  CMatrix sep = pt_compose_chi(chi.chi());
  sep.hermitize();
  return min_eigenvalue(sep) >= -tol;
}

/// Worst PT eigenvalue of the optimizer's outputs over sampled pure product
/// inputs; audits the creation-set discretization (values below -tol expose
/// the lower-bound gap).
struct CreationAudit {
  double worst_pt_eigenvalue = 0.0;
  int samples = 0;
  std::uint64_t seed = 0;
};

inline CreationAudit audit_creation_optimizer(const CMatrix& chi_tilde, int samples = 10000,
                                              std::uint64_t seed = 20509) {
  Rng rng(seed);
  CreationAudit audit;
  audit.samples = samples;
  audit.seed = seed;
  double worst = 1e300;
  for (int i = 0; i < samples; ++i) {
    CMatrix rho = projector(tensor(random_qubit_ket(rng), random_qubit_ket(rng)));
    CMatrix out = apply_chi(chi_tilde, 2, rho);
    out.hermitize();
    worst = std::min(worst, min_eigenvalue(partial_transpose(out, Subsystem::B)));
  }
  audit.worst_pt_eigenvalue = worst;
  return audit;
}

struct MeasureReport {
  double alpha_pre = 0.0, beta_pre = 0.0;
  std::optional<double> f_expt, f_threshold;
  std::optional<double> alpha_cre, beta_cre, alpha_pre_prime;
  SolverDiagnostics alpha_pre_diag, beta_pre_diag, f_threshold_diag, alpha_cre_diag,
      beta_cre_diag;
  std::optional<CreationAudit> creation_audit;

  bool all_optimal() const {
    auto ok = [](const SolverDiagnostics& d) {
      return d.status == "optimal" || d.status == "unsolved";
    };
    return ok(alpha_pre_diag) && ok(beta_pre_diag) && ok(f_threshold_diag) &&
           ok(alpha_cre_diag) && ok(beta_cre_diag);
  }

  /// Name of the first non-optimal quantity, empty when everything solved.
  std::string first_failure() const {
    auto bad = [](const SolverDiagnostics& d) {
      return d.status != "optimal" && d.status != "unsolved";
    };
    if (bad(alpha_pre_diag)) return "alpha_pre";
    if (bad(beta_pre_diag)) return "beta_pre";
    if (bad(f_threshold_diag)) return "f_threshold";
    if (bad(alpha_cre_diag)) return "alpha_cre";
    if (bad(beta_cre_diag)) return "beta_cre";
    return "";
  }
};

struct MeasureOptions {
  bool creation = false;
  int creation_extra_samples = 0;
  std::uint64_t seed = 20509;
  double gap_tol = 1e-7;
  const ProcessMatrix* target = nullptr;
  bool audit = true;
};

/// Runs the requested measures on a normalized two-qubit process.
inline MeasureReport evaluate_measures(const ProcessMatrix& chi, const MeasureOptions& opt) {
  MeasureReport rep;
  MeasureResult a = alpha_pre(chi, opt.gap_tol);
  rep.alpha_pre = a.value;
  rep.alpha_pre_diag = a.diag;
  MeasureResult b = beta_pre(chi, opt.gap_tol);
  rep.beta_pre = b.value;
  rep.beta_pre_diag = b.diag;
  if (opt.target) {
    rep.f_expt = f_expt(chi, *opt.target);
    MeasureResult ft = f_threshold(*opt.target, opt.gap_tol);
    rep.f_threshold = ft.value;
    rep.f_threshold_diag = ft.diag;
  }
  if (opt.creation) {
    std::vector<DensityMatrix> extra;
    if (opt.creation_extra_samples > 0) {
      Rng rng(opt.seed);
      for (int i = 0; i < opt.creation_extra_samples; ++i)
        extra.push_back(DensityMatrix(
            projector(tensor(random_qubit_ket(rng), random_qubit_ket(rng))), "sampled"));
    }
    MeasureResult ac = alpha_cre(chi, extra, opt.gap_tol);
    rep.alpha_cre = ac.value;
    rep.alpha_cre_diag = ac.diag;
    MeasureResult bc = beta_cre(chi, extra, opt.gap_tol);
    rep.beta_cre = bc.value;
    rep.beta_cre_diag = bc.diag;
    double prime = rep.alpha_pre - *rep.alpha_cre;
    rep.alpha_pre_prime = (prime < 0.0 && prime >= -1e-6) ? 0.0 : prime;
    if (opt.audit) rep.creation_audit = audit_creation_optimizer(ac.optimizer, 10000, opt.seed);
  }
  return rep;
}

}  // namespace entcap

#endif  // ENTCAP_MEASURES_HPP
