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

#ifndef ENTCAP_TESTS_SUPPORT_HPP
#define ENTCAP_TESTS_SUPPORT_HPP

#include "entcap/channels.hpp"
#include "entcap/measures.hpp"
#include "entcap/qpt.hpp"
#include "entcap/rng.hpp"

namespace entcap::testing {

// Brute-force channel application: explicit matrix products over the full
// operator basis. Slow on purpose; keeps the oracle independent of the
// index-shuffle implementation in the library.
inline CMatrix apply_bruteforce(const CMatrix& chi, int n_qubits, const CMatrix& rho) {
  OperatorBasis basis(n_qubits);
  std::size_t m = chi.rows();
  CMatrix out(rho.rows(), rho.cols());
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t j = 0; j < m; ++j) {
      if (chi(k, j) == cxd(0.0, 0.0)) continue;
      out += chi(k, j) * (basis.element(k) * rho * basis.element(j).adjoint());
    }
  out *= cxd(static_cast<double>(basis::hilbert_dim(n_qubits)), 0.0);
  return out;
}

inline CMatrix random_hermitian(Rng& rng, std::size_t d, double scale = 1.0) {
  CMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = scale * rng.complex_gaussian();
  m.hermitize();
  return m;
}

/// Random sub-normalized Kraus set (sum K^dag K <= I strictly).
inline KrausSet random_subnormalized_kraus(Rng& rng, std::size_t d, int n_ops) {
  std::vector<CMatrix> ops;
  CMatrix acc(d, d);
  for (int i = 0; i < n_ops; ++i) {
    CMatrix g(d, d);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) g(r, c) = rng.complex_gaussian();
    ops.push_back(g);
    acc += g.adjoint() * g;
  }
  acc.hermitize();
  double lam = hermitian_eig(acc).eigenvalues.back();
  double s = 1.0 / std::sqrt(lam * 1.02);
  for (auto& k : ops) k *= cxd(s, 0.0);
  return KrausSet(std::move(ops));
}

/// Random trace-preserving channel from normalized Gaussian Kraus operators.
inline KrausSet random_tp_kraus(Rng& rng, std::size_t d, int n_ops) {
  std::vector<CMatrix> ops;
  CMatrix acc(d, d);
  for (int i = 0; i < n_ops; ++i) {
    CMatrix g(d, d);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) g(r, c) = rng.complex_gaussian();
    ops.push_back(g);
    acc += g.adjoint() * g;
  }
  acc.hermitize();
  HermitianEig eig = hermitian_eig(acc);
  // acc^{-1/2}
  CMatrix inv_sqrt(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    double w = 1.0 / std::sqrt(std::max(eig.eigenvalues[k], 1e-12));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        inv_sqrt(i, j) += w * eig.eigenvectors(i, k) * std::conj(eig.eigenvectors(j, k));
  }
  for (auto& k : ops) k = k * inv_sqrt;
  return KrausSet(std::move(ops));
}

inline DensityMatrix random_state(Rng& rng, std::size_t d, std::size_t rank) {
  return DensityMatrix(random_density(rng, d, rank));
}

/// Measure in a random product basis, reprepare random separable states: a
/// family of processes that annihilate entanglement and carry the composed-map
/// certificate (their outputs are product-diagonal mixtures).
inline ProcessMatrix random_incapable_channel(Rng& rng) {
  // random product measurement basis
  Ket a0 = random_qubit_ket(rng);
  Ket a1 = {-std::conj(a0[1]), std::conj(a0[0])};
  Ket b0 = random_qubit_ket(rng);
  Ket b1 = {-std::conj(b0[1]), std::conj(b0[0])};
  std::vector<Ket> basis;
  for (const Ket& a : {a0, a1})
    for (const Ket& b : {b0, b1}) basis.push_back(tensor(a, b));
  std::vector<CMatrix> ops;
  for (const Ket& v : basis) {
    // prepare a random product state per outcome, as a pure-product Kraus pair
    Ket prep = tensor(random_qubit_ket(rng), random_qubit_ket(rng));
    CMatrix k(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) k(i, j) = prep[i] * std::conj(v[j]);
    ops.push_back(std::move(k));
  }
  return kraus_to_process(KrausSet(std::move(ops)));
}

/// Random capable trace-preserving two-qubit channel (unitary-rich mixture so
/// most draws preserve some entanglement).
inline ProcessMatrix random_capable_channel(Rng& rng, int n_ops = 2) {
  return kraus_to_process(random_tp_kraus(rng, 4, n_ops));
}

struct MpCounts {
  int checked = 0;
  int violations = 0;
  double worst_slack = 0.0;  // most positive violation amount
};

/// MP2 monotonicity: composing with incapable processes cannot increase the
/// measures. Returns violation counts at the given slack.
inline MpCounts mp2_suite(std::uint64_t seed, int n_capable, int n_incapable,
                          double slack = 1e-6) {
  Rng rng(seed);
  std::vector<ProcessMatrix> incapables;
  for (int i = 0; i < n_incapable; ++i) incapables.push_back(random_incapable_channel(rng));
  MpCounts counts;
  for (int i = 0; i < n_capable; ++i) {
    ProcessMatrix chi = random_capable_channel(rng);
    const ProcessMatrix& inc = incapables[i % incapables.size()];
    double a0 = alpha_pre(chi).value;
    double b0 = beta_pre(chi).value;
    ProcessMatrix post = compose(chi, inc);  // chi after an incapable pre-process
    double a1 = alpha_pre(post).value;
    double b1 = beta_pre(post).value;
    counts.checked += 2;
    if (a1 > a0 + slack) { counts.violations++; counts.worst_slack = std::max(counts.worst_slack, a1 - a0); }
    if (b1 > b0 + slack) { counts.violations++; counts.worst_slack = std::max(counts.worst_slack, b1 - b0); }
  }
  return counts;
}

/// MP3 convexity: mixtures cannot exceed the average of the parts.
inline MpCounts mp3_suite(std::uint64_t seed, int n_ensembles, double slack = 1e-6) {
  Rng rng(seed);
  MpCounts counts;
  for (int i = 0; i < n_ensembles; ++i) {
    ProcessMatrix chi = random_capable_channel(rng);
    ProcessMatrix c1 = compose(chi, random_incapable_channel(rng));
    ProcessMatrix c2 = compose(chi, random_incapable_channel(rng));
    double p = 0.2 + 0.6 * rng.uniform01();
    ProcessMatrix mixed = mix({p, 1.0 - p}, {c1, c2});
    double lhs_a = alpha_pre(mixed).value;
    double rhs_a = p * alpha_pre(c1).value + (1.0 - p) * alpha_pre(c2).value;
    double lhs_b = beta_pre(mixed).value;
    double rhs_b = p * beta_pre(c1).value + (1.0 - p) * beta_pre(c2).value;
    counts.checked += 2;
    if (lhs_a > rhs_a + slack) { counts.violations++; counts.worst_slack = std::max(counts.worst_slack, lhs_a - rhs_a); }
    if (lhs_b > rhs_b + slack) { counts.violations++; counts.worst_slack = std::max(counts.worst_slack, lhs_b - rhs_b); }
  }
  return counts;
}

/// MP1 faithfulness on a mixed zoo: measure vanishes exactly on membership.
inline MpCounts mp1_suite(std::uint64_t seed, int n_random, double tol = 1e-6) {
  Rng rng(seed);
  std::vector<ProcessMatrix> zoo;
  zoo.push_back(normalize(build_fusion(0.0)));
  zoo.push_back(normalize(build_fusion(0.4)));
  zoo.push_back(normalize(build_fusion(1.0)));
  zoo.push_back(identity_process(2));
  zoo.push_back(build_gate("CZ"));
  zoo.push_back(build_example_eq8());
  for (int i = 0; i < n_random; ++i) {
    zoo.push_back(random_capable_channel(rng));
    zoo.push_back(random_incapable_channel(rng));
  }
  MpCounts counts;
  for (const auto& chi : zoo) {
    bool member = is_incapable(chi, 1e-7);
    double a = alpha_pre(chi).value;
    double b = beta_pre(chi).value;
    counts.checked += 2;
    if (member != (a <= tol)) counts.violations++;
    if (member != (b <= tol)) counts.violations++;
  }
  return counts;
}

}  // namespace entcap::testing

#endif  // ENTCAP_TESTS_SUPPORT_HPP
