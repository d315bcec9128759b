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

#ifndef ENTCAP_SDP_MODEL_HPP
#define ENTCAP_SDP_MODEL_HPP

#include <string>
#include <vector>

#include "entcap/channel_reps.hpp"
#include "entcap/cmatrix.hpp"

namespace entcap {
namespace sdp {

// A block-structured conic program over Hermitian matrix variables:
//
//   minimize   objective(u)
//   subject to constant_i + sum_t u_t * D_{i,t}  >= 0   (PSD, per block i)
//              eq_r(u) = 0
//
// where u is the real parameter vector of all Hermitian variables. Each
// parameter's derivative matrix D_{i,t} is stored as a short list of
// matrix-unit terms; everything the measures build (variable occurrences,
// channel outputs, partial transposes) stays 1-2 terms per parameter.

struct Term {
  int r, c;
  cxd coeff;
};

struct VarHandle {
  int index = -1;
  std::size_t dim = 0;
  std::size_t offset = 0;  // first parameter of this variable
  std::size_t params() const { return dim * dim; }
};

// Parameter layout of one Hermitian variable of dimension d:
//   t in [0, d)                : diagonal entries H(a, a)
//   then for each a < b (row-major pair order): re and im parameters with
//   basis elements (U_ab + U_ba)/sqrt(2) and i(U_ab - U_ba)/sqrt(2).
namespace layout {

inline std::size_t pair_base(std::size_t dim) { return dim; }

inline std::size_t param_count(std::size_t dim) { return dim * dim; }

template <typename F>
void for_each_param(std::size_t dim, F&& f) {
  // f(t, terms) with terms the matrix-unit expansion of basis element t
  const double s = 1.0 / std::sqrt(2.0);
  std::size_t t = 0;
  for (std::size_t a = 0; a < dim; ++a)
    f(t++, std::vector<Term>{{static_cast<int>(a), static_cast<int>(a), 1.0}});
  for (std::size_t a = 0; a < dim; ++a)
    for (std::size_t b = a + 1; b < dim; ++b) {
      f(t++, std::vector<Term>{{static_cast<int>(a), static_cast<int>(b), s},
                               {static_cast<int>(b), static_cast<int>(a), s}});
      f(t++, std::vector<Term>{{static_cast<int>(a), static_cast<int>(b), cxd(0.0, s)},
                               {static_cast<int>(b), static_cast<int>(a), cxd(0.0, -s)}});
    }
}

/// Hermitian matrix from a parameter vector slice.
inline CMatrix assemble(std::size_t dim, const double* u) {
  CMatrix m(dim, dim);
  std::size_t t = 0;
  const double s = 1.0 / std::sqrt(2.0);
  for (std::size_t a = 0; a < dim; ++a) m(a, a) = u[t++];
  for (std::size_t a = 0; a < dim; ++a)
    for (std::size_t b = a + 1; b < dim; ++b) {
      double re = u[t++], im = u[t++];
      m(a, b) = cxd(re * s, im * s);
      m(b, a) = std::conj(m(a, b));
    }
  return m;
}

}  // namespace layout

struct ScalarAffine {
  double constant = 0.0;
  std::vector<double> coeffs;  // over the program's full parameter vector

  ScalarAffine() = default;
  explicit ScalarAffine(std::size_t nparams) : coeffs(nparams, 0.0) {}

  double eval(const std::vector<double>& u) const {
    double v = constant;
    for (std::size_t t = 0; t < coeffs.size(); ++t) v += coeffs[t] * u[t];
    return v;
  }

  friend ScalarAffine operator+(ScalarAffine a, const ScalarAffine& b) {
    a.constant += b.constant;
    for (std::size_t t = 0; t < a.coeffs.size(); ++t) a.coeffs[t] += b.coeffs[t];
    return a;
  }
  friend ScalarAffine operator-(ScalarAffine a, const ScalarAffine& b) {
    a.constant -= b.constant;
    for (std::size_t t = 0; t < a.coeffs.size(); ++t) a.coeffs[t] -= b.coeffs[t];
    return a;
  }
  friend ScalarAffine operator*(double s, ScalarAffine a) {
    a.constant *= s;
    for (auto& c : a.coeffs) c *= s;
    return a;
  }
};

struct MatrixAffine {
  std::size_t dim = 0;
  CMatrix constant;
  std::vector<std::vector<Term>> cols;  // per program parameter

  MatrixAffine() = default;
  MatrixAffine(std::size_t d, std::size_t nparams)
      : dim(d), constant(d, d), cols(nparams) {}

  CMatrix eval(const std::vector<double>& u) const {
    CMatrix m = constant;
    for (std::size_t t = 0; t < cols.size(); ++t) {
      if (cols[t].empty() || u[t] == 0.0) continue;
      for (const Term& term : cols[t]) m(term.r, term.c) += u[t] * term.coeff;
    }
    return m;
  }

  friend MatrixAffine operator+(MatrixAffine a, const MatrixAffine& b) {
    if (a.dim != b.dim) throw std::invalid_argument("MatrixAffine: dimension mismatch");
    a.constant += b.constant;
    for (std::size_t t = 0; t < a.cols.size(); ++t)
      a.cols[t].insert(a.cols[t].end(), b.cols[t].begin(), b.cols[t].end());
    return a;
  }
  friend MatrixAffine operator-(MatrixAffine a, const MatrixAffine& b) {
    if (a.dim != b.dim) throw std::invalid_argument("MatrixAffine: dimension mismatch");
    a.constant -= b.constant;
    for (std::size_t t = 0; t < a.cols.size(); ++t)
      for (const Term& term : b.cols[t])
        a.cols[t].push_back({term.r, term.c, -term.coeff});
    return a;
  }
};

enum class SolveStatus { optimal, infeasible, unbounded, max_iterations };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    default: return "max_iterations";
  }
}

struct SdpSolution {
  SolveStatus status = SolveStatus::max_iterations;
  double optimal_value = 0.0;
  std::vector<CMatrix> variable_values;
  double gap = 0.0;  // relative duality gap at exit
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double dual_objective = 0.0;      // lower bound when the dual residual is small
  std::vector<double> full_parameters;  // solution in program coordinates
  std::vector<double> gap_history;  // complementarity <S,Z> per accepted iteration
};

class ConicProgram {
 public:
  VarHandle add_hermitian(std::size_t dim, std::string name) {
    VarHandle h;
    h.index = static_cast<int>(vars_.size());
    h.dim = dim;
    h.offset = nparams_;
    vars_.push_back(h);
    names_.push_back(std::move(name));
    nparams_ += h.params();
    return h;
  }

  std::size_t nparams() const { return nparams_; }
  const std::vector<VarHandle>& variables() const { return vars_; }
  const std::vector<std::string>& variable_names() const { return names_; }
  const std::vector<MatrixAffine>& psd_constraints() const { return psd_; }
  const std::vector<ScalarAffine>& eq_constraints() const { return eq_; }
  const ScalarAffine& objective() const { return obj_; }

  // --- expression builders --------------------------------------------------

  /// The variable itself, scaled.
  MatrixAffine var_expr(const VarHandle& v, double scale = 1.0) const {
    MatrixAffine e(v.dim, nparams_);
    layout::for_each_param(v.dim, [&](std::size_t t, std::vector<Term> terms) {
      for (auto& term : terms) term.coeff *= scale;
      e.cols[v.offset + t] = std::move(terms);
    });
    return e;
  }

  MatrixAffine const_expr(const CMatrix& m) const {
    MatrixAffine e(m.rows(), nparams_);
    e.constant = m;
    return e;
  }

  /// Channel output chi(rho) as an affine function of the variable's
  /// parameters (chi in the trace-1 convention of ProcessMatrix).
  MatrixAffine apply_expr(const VarHandle& v, int n_qubits, const CMatrix& rho) const {
    std::size_t d = basis::hilbert_dim(n_qubits);
    if (v.dim != basis::chi_dim(n_qubits) || rho.rows() != d)
      throw std::invalid_argument("apply_expr: dimension mismatch");
    MatrixAffine e(d, nparams_);
    double scale = static_cast<double>(d);
    layout::for_each_param(v.dim, [&](std::size_t t, std::vector<Term> terms) {
      std::vector<Term> out;
      for (const Term& term : terms) {
        std::size_t k0 = static_cast<std::size_t>(term.r);
        std::size_t j0 = static_cast<std::size_t>(term.c);
        cxd val = scale * term.coeff *
                  rho(basis::bra_index(n_qubits, k0), basis::bra_index(n_qubits, j0));
        if (val == cxd(0.0, 0.0)) continue;
        out.push_back({static_cast<int>(basis::ket_index(n_qubits, k0)),
                       static_cast<int>(basis::ket_index(n_qubits, j0)), val});
      }
      e.cols[v.offset + t] = std::move(out);
    });
    return e;
  }

  /// Partial transpose of a two-qubit matrix expression.
  static MatrixAffine transpose_expr(MatrixAffine e, Subsystem sub) {
    if (e.dim != 4) throw std::invalid_argument("transpose_expr: 4x4 expressions only");
    e.constant = partial_transpose(e.constant, sub);
    auto map = [&](int idx_row, int idx_col, int& out_r, int& out_c) {
      int a = idx_row >> 1, b = idx_row & 1, c = idx_col >> 1, d = idx_col & 1;
      if (sub == Subsystem::B) {
        out_r = 2 * a + d;
        out_c = 2 * c + b;
      } else {
        out_r = 2 * c + b;
        out_c = 2 * a + d;
      }
    };
    for (auto& col : e.cols)
      for (auto& term : col) {
        int r, c;
        map(term.r, term.c, r, c);
        term.r = r;
        term.c = c;
      }
    return e;
  }

  ScalarAffine trace_expr(const VarHandle& v) const {
    ScalarAffine s(nparams_);
    for (std::size_t a = 0; a < v.dim; ++a) s.coeffs[v.offset + a] = 1.0;
    return s;
  }

  /// tr(V * C) for Hermitian constant C (real by symmetry).
  ScalarAffine trace_product_expr(const VarHandle& v, const CMatrix& c) const {
    if (c.rows() != v.dim) throw std::invalid_argument("trace_product_expr: dimension");
    ScalarAffine s(nparams_);
    layout::for_each_param(v.dim, [&](std::size_t t, std::vector<Term> terms) {
      cxd acc = 0.0;
      for (const Term& term : terms) acc += term.coeff * c(term.c, term.r);
      s.coeffs[v.offset + t] = acc.real();
    });
    return s;
  }

  ScalarAffine scalar_const(double v) const {
    ScalarAffine s(nparams_);
    s.constant = v;
    return s;
  }

  // --- constraints and objective ---------------------------------------------

  void add_psd(MatrixAffine e) { psd_.push_back(std::move(e)); }

  /// Scalar inequality expr >= 0, modeled as a 1x1 PSD block.
  void add_scalar_ineq(const ScalarAffine& e) {
    MatrixAffine m(1, nparams_);
    m.constant(0, 0) = e.constant;
    for (std::size_t t = 0; t < e.coeffs.size(); ++t)
      if (e.coeffs[t] != 0.0) m.cols[t].push_back({0, 0, e.coeffs[t]});
    psd_.push_back(std::move(m));
  }

  void add_eq(ScalarAffine e) { eq_.push_back(std::move(e)); }

  void minimize(ScalarAffine obj) { obj_ = std::move(obj); }

  /// Largest constraint violation of a full parameter vector (for
  /// certificate replay): most-negative PSD eigenvalue and |eq| residuals.
  double max_violation(const std::vector<double>& u) const {
    double worst = 0.0;
    for (const auto& c : psd_) {
      CMatrix m = c.eval(u);
      m.hermitize();
      worst = std::max(worst, -min_eigenvalue(m));
    }
    for (const auto& e : eq_) worst = std::max(worst, std::abs(e.eval(u)));
    return worst;
  }

 private:
  std::size_t nparams_ = 0;
  std::vector<VarHandle> vars_;
  std::vector<std::string> names_;
  std::vector<MatrixAffine> psd_;
  std::vector<ScalarAffine> eq_;
  ScalarAffine obj_;
};

}  // namespace sdp
}  // namespace entcap

#endif  // ENTCAP_SDP_MODEL_HPP
