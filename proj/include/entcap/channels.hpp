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

#ifndef ENTCAP_CHANNELS_HPP
#define ENTCAP_CHANNELS_HPP

#include <map>
#include <string>
#include <vector>

#include "entcap/channel_reps.hpp"
#include "entcap/qpt.hpp"

namespace entcap {

namespace detail {

/// Gaussian elimination with partial pivoting; solves A X = B in place.
inline CMatrix gauss_solve(CMatrix a, CMatrix b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.rows() != n) throw std::invalid_argument("gauss_solve: shape");
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::abs(a(col, col));
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > best) {
        best = std::abs(a(r, col));
        piv = r;
      }
    if (best < 1e-300) throw std::runtime_error("gauss_solve: singular matrix");
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(col, c), a(piv, c));
      for (std::size_t c = 0; c < b.cols(); ++c) std::swap(b(col, c), b(piv, c));
    }
    cxd d = a(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      cxd f = a(r, col) / d;
      if (f == cxd(0.0, 0.0)) continue;
      for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      for (std::size_t c = 0; c < b.cols(); ++c) b(r, c) -= f * b(col, c);
    }
  }
  for (std::size_t col = n; col-- > 0;) {
    cxd d = a(col, col);
    for (std::size_t c = 0; c < b.cols(); ++c) {
      cxd s = b(col, c);
      for (std::size_t k = col + 1; k < n; ++k) s -= a(col, k) * b(k, c);
      b(col, c) = s / d;
    }
  }
  return b;
}

}  // namespace detail

/// Matrix exponential by scaling-and-squaring with a degree-13 Pade
/// approximant.
inline CMatrix expm(const CMatrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("expm: non-square input");
  double norm1 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::abs(a(i, j));
    norm1 = std::max(norm1, s);
  }
  const double theta13 = 5.371920351148152;
  int squarings = 0;
  if (norm1 > theta13) squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
  CMatrix as = a;
  as *= cxd(std::pow(2.0, -squarings), 0.0);

  static const double b[14] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                               1187353796428800.0,  129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,       1323241920.0,
                               40840800.0,          960960.0,            16380.0,
                               182.0,               1.0};
  CMatrix id = CMatrix::identity(n);
  CMatrix a2 = as * as;
  CMatrix a4 = a2 * a2;
  CMatrix a6 = a2 * a4;
  CMatrix u = as * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                    b[3] * a2 + b[1] * id);
  CMatrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 +
              b[0] * id;
  CMatrix r = detail::gauss_solve(v - u, v + u);
  for (int s = 0; s < squarings; ++s) r = r * r;
  return r;
}

// --- named gates -------------------------------------------------------------

inline ProcessMatrix build_gate(const std::string& name) {
  CMatrix u;
  if (name == "I") u = pauli_i();
  else if (name == "X") u = pauli_x();
  else if (name == "Y") u = pauli_y();
  else if (name == "Z") u = pauli_z();
  else if (name == "H") u = hadamard();
  else if (name == "T") u = t_gate();
  else if (name == "CNOT") u = cnot_gate();
  else if (name == "CZ") u = cz_gate();
  else throw std::invalid_argument("build_gate: unknown gate " + name);
  return kraus_to_process(KrausSet({u}));
}

// --- photon fusion -----------------------------------------------------------

/// Post-selected polarizing-beam-splitter fusion, |H> = |0>, |V> = |1>. The
/// ideal operator is M = |00><00| + |11><11|; timing mismatch replaces the
/// coherent sum by the two projectors separately.
inline ProcessMatrix build_fusion(double p_noise) {
  if (!(p_noise >= 0.0 && p_noise <= 1.0))
    throw std::invalid_argument("build_fusion: p_noise must lie in [0, 1]");
  CMatrix m00 = CMatrix::unit(4, 0, 0);
  CMatrix m11 = CMatrix::unit(4, 3, 3);
  ProcessMatrix fusion = kraus_to_process(KrausSet({m00 + m11}));
  ProcessMatrix noise = kraus_to_process(KrausSet({m00, m11}));
  return mix({1.0 - p_noise, p_noise}, {fusion, noise});
}

// --- local operations with shared randomness --------------------------------

inline ProcessMatrix build_losr(const std::vector<double>& probs,
                                const std::vector<std::pair<KrausSet, KrausSet>>& local_pairs) {
  if (probs.size() != local_pairs.size() || probs.empty())
    throw std::invalid_argument("build_losr: probability/pair length mismatch");
  double sum = 0.0;
  for (double p : probs) {
    if (p < -1e-12) throw std::invalid_argument("build_losr: negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("build_losr: probabilities must sum to 1");
  std::vector<ProcessMatrix> parts;
  for (const auto& [ka, kb] : local_pairs)
    parts.push_back(tensor_extend(kraus_to_process(ka), kraus_to_process(kb)));
  return mix(probs, parts);
}

/// Single-qubit depolarizing channel of strength p (p = 1 maps everything to
/// I/2).
inline ProcessMatrix build_depolarize_1q(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("build_depolarize_1q: strength must lie in [0, 1]");
  std::vector<CMatrix> ops;
  ops.push_back(std::sqrt(1.0 - 3.0 * p / 4.0) * pauli_i());
  ops.push_back(std::sqrt(p / 4.0) * pauli_x());
  ops.push_back(std::sqrt(p / 4.0) * pauli_y());
  ops.push_back(std::sqrt(p / 4.0) * pauli_z());
  return kraus_to_process(KrausSet(std::move(ops)));
}

inline ProcessMatrix build_depolarize_tensor_id(double p) {
  return tensor_extend(build_depolarize_1q(p), identity_process(1));
}

// --- measure-and-prepare example ---------------------------------------------

/// Projective outcome |00> prepares |phi+>; every other outcome prepares the
/// maximally mixed state on the complement of |phi+>. Destroys most
/// entanglement yet maps |00> to a Bell state, so it is capable.
inline ProcessMatrix build_example_eq8() {
  std::vector<CMatrix> ops;
  Ket phip = bell_phi_plus();
  CMatrix k1(4, 4);
  for (std::size_t i = 0; i < 4; ++i) k1(i, 0) = phip[i];  // |phi+><00|
  ops.push_back(k1);
  double s = 1.0 / std::sqrt(3.0);
  Ket phim = {1.0 / std::sqrt(2.0), 0.0, 0.0, -1.0 / std::sqrt(2.0)};
  Ket psim = {0.0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0};
  std::vector<Ket> prepared = {phim, bell_psi_plus(), psim};
  for (std::size_t v = 1; v < 4; ++v)
    for (const auto& b : prepared) {
      CMatrix k(4, 4);
      for (std::size_t i = 0; i < 4; ++i) k(i, v) = s * b[i];
      ops.push_back(k);
    }
  return kraus_to_process(KrausSet(std::move(ops)));
}

// --- coupled qubits under depolarization ------------------------------------

/// Ising-type coupling (units hbar = h_int = 1) plus a single-qubit
/// depolarizing dissipator on qubit B at rate gamma.
struct LindbladGenerator {
  CMatrix hamiltonian;       // 4x4
  double jump_rate;          // gamma
  Superoperator liouvillian; // 16x16, acts on column-stacked rho
};

inline LindbladGenerator make_lindblad_generator(double gamma) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("lindblad: gamma must be >= 0");
  CMatrix h(4, 4);
  h(0, 0) = h(1, 1) = h(2, 2) = 0.5;
  h(3, 3) = -0.5;
  CMatrix id4 = CMatrix::identity(4);
  CMatrix l(16, 16);
  // -i [H, rho]  ->  -i (I (x) H - H^T (x) I) on vec(rho)
  CMatrix comm = kron(id4, h) - kron(h.transpose(), id4);
  comm *= cxd(0.0, -1.0);
  l += comm;
  for (const CMatrix& p : {pauli_x(), pauli_y(), pauli_z()}) {
    CMatrix kp = kron(CMatrix::identity(2), p);
    CMatrix term = kron(kp.conjugate(), kp);
    term *= cxd(gamma / 2.0, 0.0);
    l += term;
  }
  CMatrix damp = CMatrix::identity(16);
  damp *= cxd(-1.5 * gamma, 0.0);
  l += damp;
  return LindbladGenerator{h, gamma, Superoperator(2, std::move(l))};
}

inline ProcessMatrix build_lindblad_process(double tau, double gamma) {
  if (!std::isfinite(tau) || tau < 0.0)
    throw std::invalid_argument("lindblad: tau must be finite and >= 0");
  LindbladGenerator gen = make_lindblad_generator(gamma);
  CMatrix lt = gen.liouvillian.matrix();
  lt *= cxd(tau, 0.0);
  return super_to_process(Superoperator(2, expm(lt)));
}

// --- declarative channel description -----------------------------------------

struct ChannelSpec {
  std::string kind;
  std::string gate_name;                                   // gate
  double p_noise = 0.0;                                    // fusion_noisy
  double tau = 0.0, gamma = 0.0;                           // lindblad
  double strength = 1.0;                                   // depolarize_tensor_id
  std::vector<double> probs;                               // losr
  std::vector<std::pair<std::vector<CMatrix>, std::vector<CMatrix>>> losr_pairs;
  std::vector<CMatrix> kraus_ops;                          // custom_kraus
  CMatrix chi;                                             // custom_chi
  int chi_qubits = 2;
  bool chi_normalized = false;
};

/// Builds the channel a ChannelSpec describes. Single-qubit results (gates,
/// custom 1q channels) are returned as-is; callers decide about extension.
inline ProcessMatrix build_channel(const ChannelSpec& spec) {
  if (spec.kind == "gate") return build_gate(spec.gate_name);
  if (spec.kind == "fusion") return build_fusion(0.0);
  if (spec.kind == "fusion_noisy") return build_fusion(spec.p_noise);
  if (spec.kind == "example_eq8") return build_example_eq8();
  if (spec.kind == "lindblad") return build_lindblad_process(spec.tau, spec.gamma);
  if (spec.kind == "depolarize_tensor_id") return build_depolarize_tensor_id(spec.strength);
  if (spec.kind == "losr") {
    std::vector<std::pair<KrausSet, KrausSet>> pairs;
    for (const auto& [a, b] : spec.losr_pairs) pairs.emplace_back(KrausSet(a), KrausSet(b));
    return build_losr(spec.probs, pairs);
  }
  if (spec.kind == "custom_kraus") return kraus_to_process(KrausSet(spec.kraus_ops));
  if (spec.kind == "custom_chi")
    return ProcessMatrix(spec.chi_qubits, spec.chi, spec.chi_normalized);
  throw std::invalid_argument("build_channel: unknown kind " + spec.kind);
}

}  // namespace entcap

#endif  // ENTCAP_CHANNELS_HPP
