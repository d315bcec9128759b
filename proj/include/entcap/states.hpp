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

#ifndef ENTCAP_STATES_HPP
#define ENTCAP_STATES_HPP

#include <string>
#include <vector>

#include "entcap/cmatrix.hpp"
#include "entcap/eig.hpp"

namespace entcap {

inline constexpr double kPsdTol = 1e-9;

// --- single-qubit operators ---------------------------------------------

inline CMatrix pauli_i() { return CMatrix::identity(2); }
inline CMatrix pauli_x() { return CMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}); }
inline CMatrix pauli_y() {
  return CMatrix::from_rows({{0.0, cxd(0.0, -1.0)}, {cxd(0.0, 1.0), 0.0}});
}
inline CMatrix pauli_z() { return CMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}}); }
inline CMatrix hadamard() {
  double s = 1.0 / std::sqrt(2.0);
  return CMatrix::from_rows({{s, s}, {s, -s}});
}
inline CMatrix t_gate() {
  return CMatrix::from_rows({{1.0, 0.0}, {0.0, std::polar(1.0, M_PI / 4.0)}});
}

// --- two-qubit gates (qubit A is the first tensor factor) ----------------

inline CMatrix cnot_gate() {
  CMatrix u(4, 4);
  u(0, 0) = u(1, 1) = u(2, 3) = u(3, 2) = 1.0;
  return u;
}

inline CMatrix cz_gate() {
  CMatrix u = CMatrix::identity(4);
  u(3, 3) = -1.0;
  return u;
}

// --- kets ------------------------------------------------------------------

using Ket = std::vector<cxd>;

inline Ket ket0() { return {1.0, 0.0}; }
inline Ket ket1() { return {0.0, 1.0}; }
inline Ket ket_plus() { return {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}; }
inline Ket ket_minus() { return {1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0)}; }
inline Ket ket_r() { return {1.0 / std::sqrt(2.0), cxd(0.0, 1.0 / std::sqrt(2.0))}; }
inline Ket ket_l() { return {1.0 / std::sqrt(2.0), cxd(0.0, -1.0 / std::sqrt(2.0))}; }

inline Ket tensor(const Ket& a, const Ket& b) {
  Ket out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  return out;
}

inline CMatrix projector(const Ket& k) {
  CMatrix p(k.size(), k.size());
  for (std::size_t i = 0; i < k.size(); ++i)
    for (std::size_t j = 0; j < k.size(); ++j) p(i, j) = k[i] * std::conj(k[j]);
  return p;
}

inline Ket bell_phi_plus() {
  double s = 1.0 / std::sqrt(2.0);
  return {s, 0.0, 0.0, s};
}
inline Ket bell_phi_plus_i() {
  double s = 1.0 / std::sqrt(2.0);
  return {s, 0.0, 0.0, cxd(0.0, s)};
}
inline Ket bell_psi_plus() {
  double s = 1.0 / std::sqrt(2.0);
  return {0.0, s, s, 0.0};
}
inline Ket bell_psi_plus_i() {
  double s = 1.0 / std::sqrt(2.0);
  return {0.0, s, cxd(0.0, s), 0.0};
}

// --- density matrices -------------------------------------------------------

/// A validated 1- or 2-qubit state. Sub-unit trace is allowed so that outputs
/// of post-selected (non-trace-preserving) channels remain representable.
class DensityMatrix {
 public:
  DensityMatrix(CMatrix m, std::string label = "")
      : matrix_(std::move(m)), label_(std::move(label)) {
    if (matrix_.rows() != matrix_.cols() || (matrix_.rows() != 2 && matrix_.rows() != 4))
      throw std::invalid_argument("DensityMatrix: dimension must be 2 or 4");
    if (!matrix_.is_hermitian(kPsdTol))
      throw std::invalid_argument("DensityMatrix: not Hermitian");
    if (min_eigenvalue(matrix_) < -kPsdTol)
      throw std::invalid_argument("DensityMatrix: not positive semi-definite");
    // Zero trace is allowed: post-selected channels can annihilate a state
    // outright (the ideal fusion maps |psi+> to nothing).
    double tr = matrix_.trace().real();
    if (tr < -kPsdTol || tr > 1.0 + kPsdTol)
      throw std::invalid_argument("DensityMatrix: trace outside [0, 1]");
  }

  static DensityMatrix pure(const Ket& k, std::string label = "") {
    return DensityMatrix(projector(k), std::move(label));
  }

  static DensityMatrix maximally_mixed(std::size_t dim) {
    CMatrix m = CMatrix::identity(dim);
    m *= cxd(1.0 / static_cast<double>(dim), 0.0);
    return DensityMatrix(std::move(m), "maximally_mixed");
  }

  std::size_t dim() const { return matrix_.rows(); }
  int n_qubits() const { return matrix_.rows() == 2 ? 1 : 2; }
  const CMatrix& matrix() const { return matrix_; }
  const std::string& label() const { return label_; }

 private:
  CMatrix matrix_;
  std::string label_;
};

/// Trace distance (1/2)||rho - sigma||_1.
inline double trace_distance(const CMatrix& rho, const CMatrix& sigma) {
  CMatrix diff = rho - sigma;
  diff.hermitize();
  double s = 0.0;
  for (double lam : hermitian_eig(diff).eigenvalues) s += std::abs(lam);
  return 0.5 * s;
}

}  // namespace entcap

#endif  // ENTCAP_STATES_HPP
