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

#ifndef ENTCAP_QPT_HPP
#define ENTCAP_QPT_HPP

#include <array>
#include <map>
#include <string>
#include <vector>

#include "entcap/channel_reps.hpp"
#include "entcap/rng.hpp"

namespace entcap {

// Process tomography over the matrix-unit basis. A two-qubit process is fixed
// by its action on 16 preparable inputs: the four computational products, eight
// products with one qubit in |+> or |R>, and four maximally entangled states.
// Coherence elements |0><1| and |1><0| are recovered from |+>, |R> outputs via
//   |0><1| = P_+ + i P_R - e^{i pi/4} (P_0 + P_1) / sqrt(2)
// and Bell combinations handle the doubly off-diagonal elements.

inline const std::vector<std::string>& qpt_input_labels_2q() {
  static const std::vector<std::string> labels = {
      "00", "01", "10", "11", "0+", "0R", "1+", "1R",
      "+1", "+0", "R1", "R0", "phi+", "phi+i", "psi+", "psi+i"};
  return labels;
}

inline const std::vector<std::string>& qpt_input_labels_1q() {
  static const std::vector<std::string> labels = {"0", "1", "+", "R"};
  return labels;
}

inline Ket single_qubit_ket(char c) {
  switch (c) {
    case '0': return ket0();
    case '1': return ket1();
    case '+': return ket_plus();
    case '-': return ket_minus();
    case 'R': return ket_r();
    case 'L': return ket_l();
    default: throw std::invalid_argument(std::string("unknown ket symbol: ") + c);
  }
}

inline DensityMatrix qpt_input_state(const std::string& label) {
  if (label == "phi+") return DensityMatrix::pure(bell_phi_plus(), label);
  if (label == "phi+i") return DensityMatrix::pure(bell_phi_plus_i(), label);
  if (label == "psi+") return DensityMatrix::pure(bell_psi_plus(), label);
  if (label == "psi+i") return DensityMatrix::pure(bell_psi_plus_i(), label);
  if (label.size() == 1) return DensityMatrix::pure(single_qubit_ket(label[0]), label);
  if (label.size() == 2)
    return DensityMatrix::pure(
        tensor(single_qubit_ket(label[0]), single_qubit_ket(label[1])), label);
  throw std::invalid_argument("unknown input state label: " + label);
}

struct QptInputSet {
  int n_qubits;
  std::vector<DensityMatrix> states;
};

inline const QptInputSet& qpt_input_set(int n_qubits) {
  static const QptInputSet one = [] {
    QptInputSet s{1, {}};
    for (const auto& l : qpt_input_labels_1q()) s.states.push_back(qpt_input_state(l));
    return s;
  }();
  static const QptInputSet two = [] {
    QptInputSet s{2, {}};
    for (const auto& l : qpt_input_labels_2q()) s.states.push_back(qpt_input_state(l));
    return s;
  }();
  if (n_qubits == 1) return one;
  if (n_qubits == 2) return two;
  throw std::invalid_argument("qpt_input_set: 1 or 2 qubits only");
}

/// The 36 products of single-qubit Pauli eigenstates, all separable.
inline const std::vector<std::string>& pauli_product_labels() {
  static const std::vector<std::string> labels = [] {
    const char syms[6] = {'0', '1', '+', '-', 'R', 'L'};
    std::vector<std::string> out;
    for (char a : syms)
      for (char b : syms) out.push_back(std::string{a, b});
    return out;
  }();
  return labels;
}

inline const std::vector<DensityMatrix>& pauli_product_states() {
  static const std::vector<DensityMatrix> states = [] {
    std::vector<DensityMatrix> out;
    for (const auto& l : pauli_product_labels()) out.push_back(qpt_input_state(l));
    return out;
  }();
  return states;
}

namespace detail {

// chi (in the trace-1 convention) from the exact channel outputs of the
// canonical input list; outputs may be sub-normalized for non-TP channels.
inline CMatrix qpt_assemble_2q(const std::vector<CMatrix>& out) {
  const cxd phase = std::polar(1.0 / std::sqrt(2.0), M_PI / 4.0);  // e^{i pi/4}/sqrt(2)
  const cxd i1(0.0, 1.0);
  auto idx = [](const char* label) {
    const auto& labels = qpt_input_labels_2q();
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == label) return i;
    throw std::logic_error("bad label");
  };
  auto rho = [&](const std::string& l) { return out[idx(l.c_str())]; };

  CMatrix chi(16, 16);
  for (std::size_t k0 = 0; k0 < 16; ++k0) {
    std::size_t k1 = k0 & 1u, k2 = (k0 >> 1) & 1u, k3 = (k0 >> 2) & 1u, k4 = (k0 >> 3) & 1u;
    CMatrix r(4, 4);
    char a = static_cast<char>('0' + k1);
    char b = static_cast<char>('0' + k2);
    if (k1 == k3 && k2 == k4) {
      r = rho(std::string{a, b});
    } else if (k1 == k3) {
      // B factor off-diagonal, A diagonal at value a
      CMatrix base = rho(std::string{a, '0'}) + rho(std::string{a, '1'});
      if (k2 == 0)  // |0><1| on B
        r = rho(std::string{a, '+'}) + i1 * rho(std::string{a, 'R'}) - phase * base;
      else
        r = rho(std::string{a, '+'}) - i1 * rho(std::string{a, 'R'}) - std::conj(phase) * base;
    } else if (k2 == k4) {
      CMatrix base = rho(std::string{'0', b}) + rho(std::string{'1', b});
      if (k1 == 0)
        r = rho(std::string{'+', b}) + i1 * rho(std::string{'R', b}) - phase * base;
      else
        r = rho(std::string{'+', b}) - i1 * rho(std::string{'R', b}) - std::conj(phase) * base;
    } else if (k1 == 0 && k2 == 0) {  // |00><11|
      CMatrix base = rho("00") + rho("11");
      r = rho("phi+") + i1 * rho("phi+i") - phase * base;
    } else if (k1 == 1 && k2 == 1) {  // |11><00|
      CMatrix base = rho("00") + rho("11");
      r = rho("phi+") - i1 * rho("phi+i") - std::conj(phase) * base;
    } else if (k1 == 0 && k2 == 1) {  // |01><10|
      CMatrix base = rho("01") + rho("10");
      r = rho("psi+") + i1 * rho("psi+i") - phase * base;
    } else {  // |10><01|
      CMatrix base = rho("01") + rho("10");
      r = rho("psi+") - i1 * rho("psi+i") - std::conj(phase) * base;
    }
    std::size_t ket = basis::ket_index(2, k0), bra = basis::bra_index(2, k0);
    for (std::size_t u = 0; u < 4; ++u)
      for (std::size_t v = 0; v < 4; ++v)
        chi(basis::element_index(2, u, ket), basis::element_index(2, v, bra)) +=
            0.25 * r(u, v);
  }
  chi.hermitize();
  return chi;
}

inline CMatrix qpt_assemble_1q(const std::vector<CMatrix>& out) {
  const cxd phase = std::polar(1.0 / std::sqrt(2.0), M_PI / 4.0);
  const cxd i1(0.0, 1.0);
  const CMatrix& r0 = out[0];
  const CMatrix& r1 = out[1];
  const CMatrix& rp = out[2];
  const CMatrix& rr = out[3];
  CMatrix base = r0 + r1;  // output of the identity operator
  std::array<CMatrix, 4> blocks = {
      r0,                                        // E_1 = |0><0|
      rp - i1 * rr - std::conj(phase) * base,    // E_2 = |1><0|
      rp + i1 * rr - phase * base,               // E_3 = |0><1|
      r1};                                       // E_4 = |1><1|
  CMatrix chi(4, 4);
  for (std::size_t k0 = 0; k0 < 4; ++k0) {
    std::size_t ket = basis::ket_index(1, k0), bra = basis::bra_index(1, k0);
    for (std::size_t u = 0; u < 2; ++u)
      for (std::size_t v = 0; v < 2; ++v)
        chi(basis::element_index(1, u, ket), basis::element_index(1, v, bra)) +=
            0.5 * blocks[k0](u, v);
  }
  chi.hermitize();
  return chi;
}

}  // namespace detail

/// Reconstructs chi from the 16 output states of the canonical input list.
/// Outputs must be ordered as qpt_input_labels_2q().
inline ProcessMatrix qpt_reconstruct_2q(const std::vector<DensityMatrix>& outputs) {
  if (outputs.size() != 16)
    throw std::invalid_argument("qpt_reconstruct_2q: expected 16 output states");
  std::vector<CMatrix> mats;
  mats.reserve(16);
  for (const auto& o : outputs) {
    if (o.dim() != 4) throw std::invalid_argument("qpt_reconstruct_2q: outputs must be 4x4");
    mats.push_back(o.matrix());
  }
  CMatrix chi = detail::qpt_assemble_2q(mats);
  bool normalized = std::abs(chi.trace().real() - 1.0) <= kPsdTol;
  return ProcessMatrix(2, std::move(chi), normalized);
}

/// Single-qubit variant for inputs |0>, |1>, |+>, |R| (in that order).
inline ProcessMatrix qpt_reconstruct_1q(const std::vector<DensityMatrix>& outputs) {
  if (outputs.size() != 4)
    throw std::invalid_argument("qpt_reconstruct_1q: expected 4 output states");
  std::vector<CMatrix> mats;
  for (const auto& o : outputs) {
    if (o.dim() != 2) throw std::invalid_argument("qpt_reconstruct_1q: outputs must be 2x2");
    mats.push_back(o.matrix());
  }
  CMatrix chi = detail::qpt_assemble_1q(mats);
  bool normalized = std::abs(chi.trace().real() - 1.0) <= kPsdTol;
  return ProcessMatrix(1, std::move(chi), normalized);
}

// --- shot-level measurement model ------------------------------------------

/// Raw counts per local Pauli setting. Counts are stored as doubles: sampled
/// records hold integers, exact-frequency records hold expected counts. For
/// post-selected (non-TP) channels a setting's counts may sum to less than
/// shots_per_setting; the shortfall is the no-event rate.
struct TomographyRecord {
  std::string input_label;
  int n_qubits = 2;
  double shots_per_setting = 0;
  std::map<std::string, std::map<std::string, double>> counts;  // setting -> outcome -> n
};

inline const std::vector<std::string>& pauli_settings(int n_qubits) {
  static const std::vector<std::string> one = {"X", "Y", "Z"};
  static const std::vector<std::string> two = [] {
    std::vector<std::string> s;
    for (char a : {'X', 'Y', 'Z'})
      for (char b : {'X', 'Y', 'Z'}) s.push_back(std::string{a, b});
    return s;
  }();
  return n_qubits == 1 ? one : two;
}

inline const std::vector<std::string>& outcome_labels(int n_qubits) {
  static const std::vector<std::string> one = {"+", "-"};
  static const std::vector<std::string> two = {"++", "+-", "-+", "--"};
  return n_qubits == 1 ? one : two;
}

namespace detail {

inline CMatrix pauli_eigenprojector(char setting, int sign) {
  switch (setting) {
    case 'X': return projector(sign > 0 ? ket_plus() : ket_minus());
    case 'Y': return projector(sign > 0 ? ket_r() : ket_l());
    case 'Z': return projector(sign > 0 ? ket0() : ket1());
    default: throw std::invalid_argument("bad Pauli setting");
  }
}

inline CMatrix outcome_projector(const std::string& setting, const std::string& outcome) {
  if (setting.size() == 1) return pauli_eigenprojector(setting[0], outcome[0] == '+' ? 1 : -1);
  return kron(pauli_eigenprojector(setting[0], outcome[0] == '+' ? 1 : -1),
              pauli_eigenprojector(setting[1], outcome[1] == '+' ? 1 : -1));
}

inline std::vector<double> outcome_probabilities(const CMatrix& rho,
                                                 const std::string& setting, int n_qubits) {
  std::vector<double> p;
  for (const auto& o : outcome_labels(n_qubits))
    p.push_back(std::max(0.0, hs_inner(outcome_projector(setting, o), rho).real()));
  return p;
}

}  // namespace detail

/// Born-rule sampling of every local Pauli setting; deterministic per seed.
/// Sub-normalized states lose the missing probability mass to no-event shots.
inline TomographyRecord simulate_counts(const DensityMatrix& rho, long shots,
                                        std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("simulate_counts: shots must be >= 1");
  int n = rho.n_qubits();
  TomographyRecord rec;
  rec.input_label = rho.label();
  rec.n_qubits = n;
  rec.shots_per_setting = static_cast<double>(shots);
  Rng rng(seed);
  for (const auto& setting : pauli_settings(n)) {
    auto probs = detail::outcome_probabilities(rho.matrix(), setting, n);
    auto& bucket = rec.counts[setting];
    for (const auto& o : outcome_labels(n)) bucket[o] = 0.0;
    for (long s = 0; s < shots; ++s) {
      double u = rng.uniform01();
      double acc = 0.0;
      for (std::size_t k = 0; k < probs.size(); ++k) {
        acc += probs[k];
        if (u < acc) {
          bucket[outcome_labels(n)[k]] += 1.0;
          break;
        }
      }
      // u >= acc: no-event shot (post-selection failed)
    }
  }
  return rec;
}

/// Expected (unrounded) counts; the infinite-statistics limit of
/// simulate_counts.
inline TomographyRecord exact_counts(const DensityMatrix& rho, double shots = 1.0) {
  int n = rho.n_qubits();
  TomographyRecord rec;
  rec.input_label = rho.label();
  rec.n_qubits = n;
  rec.shots_per_setting = shots;
  for (const auto& setting : pauli_settings(n)) {
    auto probs = detail::outcome_probabilities(rho.matrix(), setting, n);
    auto& bucket = rec.counts[setting];
    for (std::size_t k = 0; k < probs.size(); ++k)
      bucket[outcome_labels(n)[k]] = probs[k] * shots;
  }
  return rec;
}

/// Linear inversion over the Pauli basis followed by a PSD clip. Exact
/// frequencies reproduce the state exactly (the clip is then a no-op).
inline DensityMatrix state_tomography(const TomographyRecord& rec) {
  int n = rec.n_qubits;
  if (rec.shots_per_setting <= 0)
    throw std::invalid_argument("state_tomography: record has no shots");
  for (const auto& setting : pauli_settings(n))
    if (rec.counts.find(setting) == rec.counts.end())
      throw std::invalid_argument("state_tomography: missing setting " + setting);

  auto freq = [&](const std::string& setting, const std::string& outcome) {
    const auto& bucket = rec.counts.at(setting);
    auto it = bucket.find(outcome);
    return it == bucket.end() ? 0.0 : it->second / rec.shots_per_setting;
  };
  auto pauli = [](char c) {
    switch (c) {
      case 'X': return pauli_x();
      case 'Y': return pauli_y();
      default: return pauli_z();
    }
  };

  if (n == 1) {
    CMatrix rho = CMatrix::zero(2, 2);
    double t = 0.0;
    for (const auto& setting : pauli_settings(1)) t += freq(setting, "+") + freq(setting, "-");
    t /= 3.0;  // estimated trace (1 for TP data, < 1 after post-selection)
    rho += t * CMatrix::identity(2);
    for (const auto& setting : pauli_settings(1)) {
      double e = freq(setting, "+") - freq(setting, "-");
      rho += e * pauli(setting[0]);
    }
    rho *= cxd(0.5, 0.0);
    rho.hermitize();
    double tr = rho.trace().real();
    return DensityMatrix(psd_project(rho, tr > 0.0 ? tr : 0.0), rec.input_label);
  }

  // two qubits: <P (x) Q> from setting PQ directly; marginals averaged over
  // the partner's three settings
  double t = 0.0;
  std::map<char, double> margA, margB;
  CMatrix rho = CMatrix::zero(4, 4);
  for (const auto& setting : pauli_settings(2)) {
    double sum = 0.0, ea = 0.0, eb = 0.0, eab = 0.0;
    for (const auto& o : outcome_labels(2)) {
      double f = freq(setting, o);
      double sa = o[0] == '+' ? 1.0 : -1.0;
      double sb = o[1] == '+' ? 1.0 : -1.0;
      sum += f;
      ea += sa * f;
      eb += sb * f;
      eab += sa * sb * f;
    }
    t += sum;
    margA[setting[0]] += ea;
    margB[setting[1]] += eb;
    rho += eab * kron(pauli(setting[0]), pauli(setting[1]));
  }
  t /= 9.0;
  rho += t * CMatrix::identity(4);
  for (char p : {'X', 'Y', 'Z'}) {
    rho += (margA[p] / 3.0) * kron(pauli(p), CMatrix::identity(2));
    rho += (margB[p] / 3.0) * kron(CMatrix::identity(2), pauli(p));
  }
  rho *= cxd(0.25, 0.0);
  rho.hermitize();
  double tr = rho.trace().real();
  return DensityMatrix(psd_project(rho, tr > 0.0 ? tr : 0.0), rec.input_label);
}

namespace detail {

// 16 real coordinates of a Hermitian 4x4 matrix.
inline std::array<double, 16> herm_coords(const CMatrix& m) {
  std::array<double, 16> v{};
  std::size_t idx = 0;
  for (std::size_t i = 0; i < 4; ++i) v[idx++] = m(i, i).real();
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) {
      v[idx++] = m(i, j).real();
      v[idx++] = m(i, j).imag();
    }
  return v;
}

// Coefficients expressing each canonical QPT input in the 36 Pauli products
// (min-norm least squares; the products span, so the fit is exact).
inline const std::vector<std::array<double, 36>>& product_synthesis_coeffs() {
  static const std::vector<std::array<double, 36>> coeffs = [] {
    const auto& products = pauli_product_states();
    std::vector<std::array<double, 16>> pc;
    for (const auto& s : products) pc.push_back(herm_coords(s.matrix()));
    // Gram matrix G = A A^T (A is 16x36 of product coordinates... transposed here)
    std::array<std::array<double, 16>, 16> g{};
    for (std::size_t i = 0; i < 16; ++i)
      for (std::size_t j = 0; j < 16; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < 36; ++k) s += pc[k][i] * pc[k][j];
        g[i][j] = s;
      }
    // Cholesky of G
    std::array<std::array<double, 16>, 16> l{};
    for (std::size_t i = 0; i < 16; ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        double s = g[i][j];
        for (std::size_t k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
        if (i == j)
          l[i][i] = std::sqrt(s);
        else
          l[i][j] = s / l[j][j];
      }
    auto solve = [&](std::array<double, 16> b) {
      for (std::size_t i = 0; i < 16; ++i) {
        for (std::size_t k = 0; k < i; ++k) b[i] -= l[i][k] * b[k];
        b[i] /= l[i][i];
      }
      for (std::size_t i = 16; i-- > 0;) {
        for (std::size_t k = i + 1; k < 16; ++k) b[i] -= l[k][i] * b[k];
        b[i] /= l[i][i];
      }
      return b;
    };
    std::vector<std::array<double, 36>> out;
    for (const auto& st : qpt_input_set(2).states) {
      auto y = solve(herm_coords(st.matrix()));
      std::array<double, 36> c{};
      for (std::size_t k = 0; k < 36; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < 16; ++i) s += pc[k][i] * y[i];
        c[k] = s;
      }
      out.push_back(c);
    }
    return out;
  }();
  return coeffs;
}

}  // namespace detail

/// Full pipeline from counts to a CP process matrix. Accepts either the 16
/// canonical records or 36 Pauli-product records (separable-only mode, from
/// which the canonical outputs are synthesized linearly). `project` clips the
/// reconstruction onto the PSD cone, keeping the pre-projection trace.
inline ProcessMatrix qpt_from_counts(const std::vector<TomographyRecord>& records,
                                     bool project = true) {
  std::map<std::string, const TomographyRecord*> by_label;
  for (const auto& r : records) {
    if (by_label.count(r.input_label))
      throw std::invalid_argument("qpt_from_counts: duplicate input label " + r.input_label);
    by_label[r.input_label] = &r;
  }

  auto have_all = [&](const std::vector<std::string>& labels, std::string* missing) {
    for (const auto& l : labels)
      if (!by_label.count(l)) {
        if (missing) *missing += (missing->empty() ? "" : ", ") + l;
        return false;
      }
    return true;
  };

  std::vector<CMatrix> outputs;
  if (records.size() == 16 && have_all(qpt_input_labels_2q(), nullptr)) {
    for (const auto& l : qpt_input_labels_2q())
      outputs.push_back(state_tomography(*by_label[l]).matrix());
  } else if (records.size() == 36 && have_all(pauli_product_labels(), nullptr)) {
    std::vector<CMatrix> prod;
    for (const auto& l : pauli_product_labels())
      prod.push_back(state_tomography(*by_label[l]).matrix());
    const auto& coeffs = detail::product_synthesis_coeffs();
    for (std::size_t m = 0; m < 16; ++m) {
      CMatrix acc(4, 4);
      for (std::size_t k = 0; k < 36; ++k) {
        CMatrix term = prod[k];
        term *= cxd(coeffs[m][k], 0.0);
        acc += term;
      }
      outputs.push_back(acc);
    }
  } else {
    std::string missing;
    have_all(records.size() == 36 ? pauli_product_labels() : qpt_input_labels_2q(), &missing);
    throw std::invalid_argument(
        "qpt_from_counts: need the 16 canonical records or the 36 product records; missing: " +
        (missing.empty() ? std::string("(count mismatch)") : missing));
  }

  CMatrix chi = detail::qpt_assemble_2q(outputs);
  if (project) {
    double tr = chi.trace().real();
    chi = psd_project(chi, tr > 0.0 ? tr : 0.0);
  }
  bool normalized = std::abs(chi.trace().real() - 1.0) <= kPsdTol;
  return ProcessMatrix(2, std::move(chi), normalized);
}

}  // namespace entcap

#endif  // ENTCAP_QPT_HPP
