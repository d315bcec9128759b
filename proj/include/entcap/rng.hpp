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

#ifndef ENTCAP_RNG_HPP
#define ENTCAP_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "entcap/cmatrix.hpp"

namespace entcap {

/// Seeded generator with explicit double extraction. std::*_distribution is
/// implementation-defined, so samples are derived from raw engine output to
/// keep byte-identical reruns across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double gaussian() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = uniform01(), u2 = uniform01();
    while (u1 <= 1e-300) u1 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  cxd complex_gaussian() { return cxd(gaussian(), gaussian()); }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

/// Haar-random single-qubit ket.
inline Ket random_qubit_ket(Rng& rng) {
  cxd a = rng.complex_gaussian(), b = rng.complex_gaussian();
  double n = std::sqrt(std::norm(a) + std::norm(b));
  while (n < 1e-12) {
    a = rng.complex_gaussian();
    b = rng.complex_gaussian();
    n = std::sqrt(std::norm(a) + std::norm(b));
  }
  return {a / n, b / n};
}

/// Random mixed state from a Wishart factor with `rank` columns.
inline CMatrix random_density(Rng& rng, std::size_t dim, std::size_t rank) {
  CMatrix g(dim, rank);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < rank; ++j) g(i, j) = rng.complex_gaussian();
  CMatrix rho = g * g.adjoint();
  rho *= cxd(1.0 / rho.trace().real(), 0.0);
  rho.hermitize();
  return rho;
}

}  // namespace entcap

#endif  // ENTCAP_RNG_HPP
