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

#ifndef ENTCAP_CHANNEL_REPS_HPP
#define ENTCAP_CHANNEL_REPS_HPP

#include <string>
#include <vector>

#include "entcap/cmatrix.hpp"
#include "entcap/eig.hpp"
#include "entcap/states.hpp"

namespace entcap {

// The operator basis is the matrix-unit family
//   E_k = |k_1 .. k_n><k_{n+1} .. k_{2n}|,   k - 1 = sum_i k_i 2^{i-1},
// with qubit A as the first tensor factor. A channel is stored as the
// coefficient matrix chi of
//   rho_out = 2^n * sum_{k,j} chi_kj E_k rho E_j^dag,
// i.e. chi carries the 1/2^n normalization that makes trace-preserving
// channels have tr(chi) = 1 (so chi can be read as a density matrix).

namespace basis {

inline std::size_t hilbert_dim(int n_qubits) { return std::size_t{1} << n_qubits; }
inline std::size_t chi_dim(int n_qubits) { return std::size_t{1} << (2 * n_qubits); }

/// Hilbert index of the ket side of E_k (k is 0-based here and below).
inline std::size_t ket_index(int n_qubits, std::size_t k0) {
  std::size_t idx = 0;
  for (int i = 0; i < n_qubits; ++i) {
    std::size_t bit = (k0 >> i) & 1u;          // k_{i+1}
    idx |= bit << (n_qubits - 1 - i);          // qubit 1 is the most significant
  }
  return idx;
}

inline std::size_t bra_index(int n_qubits, std::size_t k0) {
  std::size_t idx = 0;
  for (int i = 0; i < n_qubits; ++i) {
    std::size_t bit = (k0 >> (n_qubits + i)) & 1u;  // k_{n+i+1}
    idx |= bit << (n_qubits - 1 - i);
  }
  return idx;
}

/// 0-based basis index of the E with given ket/bra Hilbert indices.
inline std::size_t element_index(int n_qubits, std::size_t ket, std::size_t bra) {
  std::size_t k0 = 0;
  for (int i = 0; i < n_qubits; ++i) {
    std::size_t kb = (ket >> (n_qubits - 1 - i)) & 1u;
    std::size_t bb = (bra >> (n_qubits - 1 - i)) & 1u;
    k0 |= kb << i;
    k0 |= bb << (n_qubits + i);
  }
  return k0;
}

}  // namespace basis

/// The explicit E_k family for one or two qubits.
class OperatorBasis {
 public:
  explicit OperatorBasis(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits != 1 && n_qubits != 2)
      throw std::invalid_argument("OperatorBasis: 1 or 2 qubits only");
    std::size_t d = basis::hilbert_dim(n_qubits);
    std::size_t m = basis::chi_dim(n_qubits);
    elements_.reserve(m);
    for (std::size_t k0 = 0; k0 < m; ++k0)
      elements_.push_back(
          CMatrix::unit(d, basis::ket_index(n_qubits, k0), basis::bra_index(n_qubits, k0)));
  }

  int n_qubits() const { return n_qubits_; }
  const std::vector<CMatrix>& elements() const { return elements_; }
  const CMatrix& element(std::size_t k0) const { return elements_.at(k0); }

 private:
  int n_qubits_;
  std::vector<CMatrix> elements_;
};

/// rho_out = 2^n sum_kj chi_kj E_k rho E_j^dag on a raw matrix (no state
/// validation). The matrix-unit basis makes this a pure index shuffle.
inline CMatrix apply_chi(const CMatrix& chi, int n_qubits, const CMatrix& rho) {
  std::size_t d = basis::hilbert_dim(n_qubits);
  std::size_t m = basis::chi_dim(n_qubits);
  if (rho.rows() != d || rho.cols() != d)
    throw std::invalid_argument("apply_chi: state dimension mismatch");
  if (chi.rows() != m || chi.cols() != m)
    throw std::invalid_argument("apply_chi: chi dimension mismatch");
  double scale = static_cast<double>(d);
  CMatrix out(d, d);
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t rk = basis::ket_index(n_qubits, k), bk = basis::bra_index(n_qubits, k);
    for (std::size_t j = 0; j < m; ++j) {
      cxd c = chi(k, j);
      if (c == cxd(0.0, 0.0)) continue;
      std::size_t rj = basis::ket_index(n_qubits, j), bj = basis::bra_index(n_qubits, j);
      out(rk, rj) += scale * c * rho(bk, bj);
    }
  }
  return out;
}

class ProcessMatrix {
 public:
  ProcessMatrix(int n_qubits, CMatrix chi, bool normalized)
      : n_qubits_(n_qubits), chi_(std::move(chi)), normalized_(normalized) {
    std::size_t m = basis::chi_dim(n_qubits);
    if (n_qubits != 1 && n_qubits != 2)
      throw std::invalid_argument("ProcessMatrix: 1 or 2 qubits only");
    if (chi_.rows() != m || chi_.cols() != m)
      throw std::invalid_argument("ProcessMatrix: chi dimension mismatch");
    if (!chi_.is_hermitian(kPsdTol)) throw std::invalid_argument("ProcessMatrix: not Hermitian");
    if (min_eigenvalue(chi_) < -kPsdTol)
      throw std::invalid_argument("ProcessMatrix: not completely positive");
    if (normalized_ && std::abs(chi_.trace().real() - 1.0) > kPsdTol)
      throw std::invalid_argument("ProcessMatrix: normalized flag requires unit trace");
  }

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return chi_.rows(); }
  const CMatrix& chi() const { return chi_; }
  bool normalized() const { return normalized_; }
  double trace() const { return chi_.trace().real(); }

  /// Entrywise deviation of 2^n sum chi_kj E_j^dag E_k from the identity.
  double tp_residual() const {
    std::size_t d = basis::hilbert_dim(n_qubits_);
    std::size_t m = chi_.rows();
    CMatrix acc(d, d);
    for (std::size_t k = 0; k < m; ++k) {
      std::size_t rk = basis::ket_index(n_qubits_, k), bk = basis::bra_index(n_qubits_, k);
      for (std::size_t j = 0; j < m; ++j) {
        std::size_t rj = basis::ket_index(n_qubits_, j), bj = basis::bra_index(n_qubits_, j);
        if (rk != rj) continue;  // <ket_j|ket_k> = 0 otherwise
        acc(bj, bk) += static_cast<double>(d) * chi_(k, j);
      }
    }
    acc -= CMatrix::identity(d);
    return acc.max_abs();
  }

  /// Checkable predicate (not an invariant).
  bool is_trace_preserving(double tol = 1e-9) const { return tp_residual() <= tol; }

 private:
  int n_qubits_;
  CMatrix chi_;
  bool normalized_;
};

class KrausSet {
 public:
  explicit KrausSet(std::vector<CMatrix> ops) : ops_(std::move(ops)) {
    if (ops_.empty()) throw std::invalid_argument("KrausSet: empty operator list");
    std::size_t d = ops_.front().rows();
    if (d != 2 && d != 4) throw std::invalid_argument("KrausSet: dimension must be 2 or 4");
    CMatrix acc(d, d);
    for (const auto& k : ops_) {
      if (k.rows() != d || k.cols() != d)
        throw std::invalid_argument("KrausSet: inconsistent operator dimensions");
      acc += k.adjoint() * k;
    }
    acc -= CMatrix::identity(d);
    acc.hermitize();
    // sub-normalized sets are allowed: sum K^dag K <= I
    if (hermitian_eig(acc).eigenvalues.back() > 1e-9)
      throw std::invalid_argument("KrausSet: sum K^dag K exceeds identity");
  }

  std::size_t dim() const { return ops_.front().rows(); }
  int n_qubits() const { return dim() == 2 ? 1 : 2; }
  const std::vector<CMatrix>& operators() const { return ops_; }

  CMatrix apply(const CMatrix& rho) const {
    CMatrix out(dim(), dim());
    for (const auto& k : ops_) out += k * rho * k.adjoint();
    return out;
  }

 private:
  std::vector<CMatrix> ops_;
};

/// Channel as a matrix acting on column-stacked density matrices.
class Superoperator {
 public:
  Superoperator(int n_qubits, CMatrix m) : n_qubits_(n_qubits), matrix_(std::move(m)) {
    std::size_t dd = basis::hilbert_dim(n_qubits) * basis::hilbert_dim(n_qubits);
    if (matrix_.rows() != dd || matrix_.cols() != dd)
      throw std::invalid_argument("Superoperator: dimension mismatch");
  }

  int n_qubits() const { return n_qubits_; }
  const CMatrix& matrix() const { return matrix_; }

  CMatrix apply(const CMatrix& rho) const {
    std::size_t d = basis::hilbert_dim(n_qubits_);
    CMatrix out(d, d);
    for (std::size_t rc = 0; rc < d; ++rc)
      for (std::size_t cc = 0; cc < d; ++cc) {
        cxd acc = 0.0;
        for (std::size_t r = 0; r < d; ++r)
          for (std::size_t c = 0; c < d; ++c)
            acc += matrix_(rc + d * cc, r + d * c) * rho(r, c);
        out(rc, cc) = acc;
      }
    return out;
  }

 private:
  int n_qubits_;
  CMatrix matrix_;
};

class ChoiMatrix {
 public:
  ChoiMatrix(int n_qubits, CMatrix m) : n_qubits_(n_qubits), matrix_(std::move(m)) {
    std::size_t dd = basis::hilbert_dim(n_qubits) * basis::hilbert_dim(n_qubits);
    if (matrix_.rows() != dd || matrix_.cols() != dd)
      throw std::invalid_argument("ChoiMatrix: dimension mismatch");
    if (!matrix_.is_hermitian(kPsdTol) || min_eigenvalue(matrix_) < -kPsdTol)
      throw std::invalid_argument("ChoiMatrix: not PSD (map is not completely positive)");
  }

  int n_qubits() const { return n_qubits_; }
  const CMatrix& matrix() const { return matrix_; }

 private:
  int n_qubits_;
  CMatrix matrix_;
};

// --- conversions ----------------------------------------------------------

inline ProcessMatrix kraus_to_process(const KrausSet& ks) {
  int n = ks.n_qubits();
  std::size_t m = basis::chi_dim(n);
  double inv = 1.0 / static_cast<double>(basis::hilbert_dim(n));
  CMatrix chi(m, m);
  for (const auto& op : ks.operators()) {
    std::vector<cxd> c(m);
    for (std::size_t k = 0; k < m; ++k)
      c[k] = op(basis::ket_index(n, k), basis::bra_index(n, k));
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t j = 0; j < m; ++j) chi(k, j) += inv * c[k] * std::conj(c[j]);
  }
  chi.hermitize();
  bool normalized = std::abs(chi.trace().real() - 1.0) <= kPsdTol;
  return ProcessMatrix(n, std::move(chi), normalized);
}

inline ChoiMatrix process_to_choi(const ProcessMatrix& p) {
  int n = p.n_qubits();
  std::size_t d = basis::hilbert_dim(n);
  CMatrix c(d * d, d * d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t u = 0; u < d; ++u)
        for (std::size_t v = 0; v < d; ++v)
          c(a * d + u, b * d + v) = static_cast<double>(d) *
                                    p.chi()(basis::element_index(n, u, a),
                                            basis::element_index(n, v, b));
  return ChoiMatrix(n, std::move(c));
}

inline ProcessMatrix choi_to_process(const ChoiMatrix& c) {
  int n = c.n_qubits();
  std::size_t d = basis::hilbert_dim(n);
  std::size_t m = d * d;
  CMatrix chi(m, m);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t u = 0; u < d; ++u)
        for (std::size_t v = 0; v < d; ++v)
          chi(basis::element_index(n, u, a), basis::element_index(n, v, b)) =
              c.matrix()(a * d + u, b * d + v) / static_cast<double>(d);
  chi.hermitize();
  bool normalized = std::abs(chi.trace().real() - 1.0) <= kPsdTol;
  return ProcessMatrix(n, std::move(chi), normalized);
}

inline Superoperator process_to_super(const ProcessMatrix& p) {
  int n = p.n_qubits();
  std::size_t d = basis::hilbert_dim(n);
  std::size_t m = d * d;
  CMatrix s(m, m);
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t rk = basis::ket_index(n, k), bk = basis::bra_index(n, k);
    for (std::size_t j = 0; j < m; ++j) {
      std::size_t rj = basis::ket_index(n, j), bj = basis::bra_index(n, j);
      // vec(E_k rho E_j^dag) term: conj(E_j) (x) E_k is again a matrix unit
      s(rk + d * rj, bk + d * bj) += static_cast<double>(d) * p.chi()(k, j);
    }
  }
  return Superoperator(n, std::move(s));
}

/// Extracts chi from a superoperator. The map must be Hermiticity-preserving
/// (which Lindblad evolution and all physical channels are); complete
/// positivity is then checked by the ProcessMatrix constructor.
inline ProcessMatrix super_to_process(const Superoperator& s) {
  int n = s.n_qubits();
  std::size_t d = basis::hilbert_dim(n);
  std::size_t m = d * d;
  CMatrix chi(m, m);
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t rk = basis::ket_index(n, k), bk = basis::bra_index(n, k);
    for (std::size_t j = 0; j < m; ++j) {
      std::size_t rj = basis::ket_index(n, j), bj = basis::bra_index(n, j);
      chi(k, j) = s.matrix()(rk + d * rj, bk + d * bj) / static_cast<double>(d);
    }
  }
  chi.hermitize();
  bool normalized = std::abs(chi.trace().real() - 1.0) <= kPsdTol;
  return ProcessMatrix(n, std::move(chi), normalized);
}

inline KrausSet choi_to_kraus(const ChoiMatrix& c, double cutoff = 1e-10) {
  std::size_t d = basis::hilbert_dim(c.n_qubits());
  CMatrix h = c.matrix();
  h.hermitize();
  HermitianEig eig = hermitian_eig(h);
  std::vector<CMatrix> ops;
  for (std::size_t idx = 0; idx < eig.eigenvalues.size(); ++idx) {
    double lam = eig.eigenvalues[idx];
    if (lam <= cutoff) continue;
    CMatrix k(d, d);
    double s = std::sqrt(lam);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t r = 0; r < d; ++r) k(r, a) = s * eig.eigenvectors(a * d + r, idx);
    ops.push_back(std::move(k));
  }
  if (ops.empty()) ops.push_back(CMatrix::zero(d, d));
  return KrausSet(std::move(ops));
}

inline ProcessMatrix normalize(const ProcessMatrix& p) {
  double tr = p.trace();
  if (tr <= 1e-12) throw std::invalid_argument("normalize: zero-trace process");
  CMatrix chi = p.chi();
  chi *= cxd(1.0 / tr, 0.0);
  return ProcessMatrix(p.n_qubits(), std::move(chi), true);
}

/// Two single-qubit processes acting independently on qubits A and B.
inline ProcessMatrix tensor_extend(const ProcessMatrix& p1, const ProcessMatrix& p2) {
  if (p1.n_qubits() != 1 || p2.n_qubits() != 1)
    throw std::invalid_argument("tensor_extend: both factors must be single-qubit");
  const CMatrix s1 = process_to_super(p1).matrix();
  const CMatrix s2 = process_to_super(p2).matrix();
  CMatrix s(16, 16);
  for (std::size_t ar = 0; ar < 2; ++ar)
    for (std::size_t br = 0; br < 2; ++br)
      for (std::size_t ac = 0; ac < 2; ++ac)
        for (std::size_t bc = 0; bc < 2; ++bc)
          for (std::size_t arp = 0; arp < 2; ++arp)
            for (std::size_t brp = 0; brp < 2; ++brp)
              for (std::size_t acp = 0; acp < 2; ++acp)
                for (std::size_t bcp = 0; bcp < 2; ++bcp) {
                  cxd v = s1(ar + 2 * ac, arp + 2 * acp) * s2(br + 2 * bc, brp + 2 * bcp);
                  if (v == cxd(0.0, 0.0)) continue;
                  std::size_t row = (2 * ar + br) + 4 * (2 * ac + bc);
                  std::size_t col = (2 * arp + brp) + 4 * (2 * acp + bcp);
                  s(row, col) = v;
                }
  return super_to_process(Superoperator(2, std::move(s)));
}

/// Concatenation: `after` is applied to the outputs of `before`.
inline ProcessMatrix compose(const ProcessMatrix& after, const ProcessMatrix& before) {
  if (after.n_qubits() != before.n_qubits())
    throw std::invalid_argument("compose: qubit count mismatch");
  CMatrix s = process_to_super(after).matrix() * process_to_super(before).matrix();
  return super_to_process(Superoperator(after.n_qubits(), std::move(s)));
}

/// Convex mixture of process matrices.
inline ProcessMatrix mix(const std::vector<double>& probs,
                         const std::vector<ProcessMatrix>& parts) {
  if (probs.size() != parts.size() || parts.empty())
    throw std::invalid_argument("mix: length mismatch");
  CMatrix chi(parts.front().dim(), parts.front().dim());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].dim() != chi.rows()) throw std::invalid_argument("mix: dimension mismatch");
    CMatrix term = parts[i].chi();
    term *= cxd(probs[i], 0.0);
    chi += term;
  }
  bool normalized = std::abs(chi.trace().real() - 1.0) <= kPsdTol;
  return ProcessMatrix(parts.front().n_qubits(), std::move(chi), normalized);
}

inline DensityMatrix apply_process(const ProcessMatrix& p, const DensityMatrix& rho) {
  if (p.n_qubits() != rho.n_qubits())
    throw std::invalid_argument("apply_process: qubit count mismatch");
  CMatrix out = apply_chi(p.chi(), p.n_qubits(), rho.matrix());
  out.hermitize();
  return DensityMatrix(std::move(out), rho.label());
}

/// Identity process on n qubits.
inline ProcessMatrix identity_process(int n_qubits) {
  return kraus_to_process(KrausSet({CMatrix::identity(basis::hilbert_dim(n_qubits))}));
}

}  // namespace entcap

#endif  // ENTCAP_CHANNEL_REPS_HPP
