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

#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace entcap;
using Catch::Approx;

TEST_CASE("kron basics") {
  CMatrix i4 = kron(CMatrix::identity(2), CMatrix::identity(2));
  REQUIRE((i4 - CMatrix::identity(4)).max_abs() == 0.0);

  CMatrix p = kron(projector(ket0()), projector(ket1()));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      REQUIRE(p(i, j) == (i == 1 && j == 1 ? cxd(1.0, 0.0) : cxd(0.0, 0.0)));

  // (X (x) X)|00> = |11>, multiplied out by hand
  CMatrix xx = kron(pauli_x(), pauli_x());
  Ket v00 = tensor(ket0(), ket0());
  std::vector<cxd> out(4, 0.0);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) out[i] += xx(i, j) * v00[j];
  REQUIRE(std::abs(out[3] - 1.0) < 1e-15);
  REQUIRE(std::abs(out[0]) + std::abs(out[1]) + std::abs(out[2]) < 1e-15);

  REQUIRE(kron(CMatrix(2, 3), CMatrix(4, 5)).rows() == 8);
}

TEST_CASE("partial transpose") {
  CMatrix pt = partial_transpose(projector(bell_phi_plus()), Subsystem::B);
  auto eig = hermitian_eig(pt);
  REQUIRE(eig.eigenvalues[0] == Approx(-0.5).margin(1e-12));
  REQUIRE(eig.eigenvalues[1] == Approx(0.5).margin(1e-12));
  REQUIRE(eig.eigenvalues[2] == Approx(0.5).margin(1e-12));
  REQUIRE(eig.eigenvalues[3] == Approx(0.5).margin(1e-12));

  SECTION("product states transpose factorwise and stay PSD") {
    Rng rng(11);
    for (int t = 0; t < 1000; ++t) {
      CMatrix ra = random_density(rng, 2, 2), rb = random_density(rng, 2, 2);
      CMatrix prod = kron(ra, rb);
      CMatrix expect = kron(ra, rb.transpose());
      REQUIRE((partial_transpose(prod, Subsystem::B) - expect).max_abs() < 1e-14);
      REQUIRE(min_eigenvalue(partial_transpose(prod, Subsystem::B)) > -1e-9);
    }
  }
  SECTION("maximally mixed is invariant") {
    CMatrix mix = CMatrix::identity(4);
    mix *= cxd(0.25, 0.0);
    REQUIRE((partial_transpose(mix, Subsystem::A) - mix).max_abs() == 0.0);
  }
  SECTION("involution on random Hermitian inputs") {
    Rng rng(5);
    for (int t = 0; t < 1000; ++t) {
      CMatrix h = testing::random_hermitian(rng, 4);
      for (Subsystem s : {Subsystem::A, Subsystem::B})
        REQUIRE((partial_transpose(partial_transpose(h, s), s) - h).max_abs() <= 1e-12);
    }
  }
  REQUIRE_THROWS_AS(partial_transpose(CMatrix(2, 2), Subsystem::A), std::invalid_argument);
}

TEST_CASE("partial trace") {
  // sum of 2x2 blocks, written out
  CMatrix phi = projector(bell_phi_plus());
  CMatrix redA = partial_trace(phi, Subsystem::A);
  CMatrix expect(2, 2);
  for (std::size_t b = 0; b < 2; ++b)
    for (std::size_t d = 0; d < 2; ++d) expect(b, d) = phi(b, d) + phi(2 + b, 2 + d);
  REQUIRE((redA - expect).max_abs() == 0.0);
  REQUIRE((redA - 0.5 * CMatrix::identity(2)).max_abs() < 1e-15);

  Rng rng(7);
  CMatrix ra = random_density(rng, 2, 2), rb = random_density(rng, 2, 1);
  CMatrix prod = kron(ra, rb);
  REQUIRE((partial_trace(prod, Subsystem::B) - ra * rb.trace()).max_abs() < 1e-14);
  CMatrix mix = CMatrix::identity(4);
  mix *= cxd(0.25, 0.0);
  REQUIRE((partial_trace(mix, Subsystem::A) - 0.5 * CMatrix::identity(2)).max_abs() < 1e-15);

  SECTION("trace is preserved") {
    for (int t = 0; t < 50; ++t) {
      CMatrix h = testing::random_hermitian(rng, 4);
      REQUIRE(std::abs(partial_trace(h, Subsystem::A).trace() - h.trace()) < 1e-12);
      REQUIRE(std::abs(partial_trace(h, Subsystem::B).trace() - h.trace()) < 1e-12);
    }
  }
  REQUIRE_THROWS_AS(partial_trace(CMatrix(2, 2), Subsystem::A), std::invalid_argument);
}

TEST_CASE("hermitian eigendecomposition") {
  SECTION("diagonal case sorts ascending") {
    CMatrix d(3, 3);
    d(0, 0) = 3.0;
    d(1, 1) = 1.0;
    d(2, 2) = 2.0;
    auto eig = hermitian_eig(d);
    REQUIRE(eig.eigenvalues[0] == Approx(1.0));
    REQUIRE(eig.eigenvalues[1] == Approx(2.0));
    REQUIRE(eig.eigenvalues[2] == Approx(3.0));
  }
  SECTION("Pauli X from the characteristic polynomial") {
    // lambda^2 - tr*lambda + det = lambda^2 - 1 -> roots -1, +1
    auto eig = hermitian_eig(pauli_x());
    REQUIRE(eig.eigenvalues[0] == Approx(-1.0).margin(1e-14));
    REQUIRE(eig.eigenvalues[1] == Approx(1.0).margin(1e-14));
  }
  SECTION("rank-one projector") {
    auto eig = hermitian_eig(projector(bell_phi_plus()));
    REQUIRE(eig.eigenvalues[0] == Approx(0.0).margin(1e-14));
    REQUIRE(eig.eigenvalues[2] == Approx(0.0).margin(1e-14));
    REQUIRE(eig.eigenvalues[3] == Approx(1.0).margin(1e-14));
  }
  SECTION("degenerate spectra keep a unitary eigenbasis") {
    for (const CMatrix& m : {CMatrix::identity(4), kron(pauli_y(), pauli_y())}) {
      auto eig = hermitian_eig(m);
      CMatrix vvh = eig.eigenvectors * eig.eigenvectors.adjoint();
      REQUIRE((vvh - CMatrix::identity(4)).max_abs() < 1e-12);
    }
  }
  SECTION("reconstruction residual on random matrices up to 32x32") {
    Rng rng(3);
    for (std::size_t d : {2, 5, 16, 32}) {
      for (int t = 0; t < 8; ++t) {
        CMatrix m = testing::random_hermitian(rng, d, 2.0);
        auto eig = hermitian_eig(m);
        CMatrix rec(d, d);
        for (std::size_t k = 0; k < d; ++k)
          for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
              rec(i, j) += eig.eigenvalues[k] * eig.eigenvectors(i, k) *
                           std::conj(eig.eigenvectors(j, k));
        REQUIRE((rec - m).frobenius_norm() <= 1e-9 * m.frobenius_norm());
        CMatrix vvh = eig.eigenvectors * eig.eigenvectors.adjoint();
        REQUIRE((vvh - CMatrix::identity(d)).max_abs() < 1e-9);
      }
    }
  }
  SECTION("rejects non-Hermitian input") {
    CMatrix m(2, 2);
    m(0, 1) = 1.0;
    REQUIRE_THROWS_AS(hermitian_eig(m), std::invalid_argument);
  }
}

TEST_CASE("hs inner product") {
  REQUIRE(hs_inner(CMatrix::identity(4), CMatrix::identity(4)).real() == Approx(4.0));
  REQUIRE(std::abs(hs_inner(pauli_x(), pauli_y())) < 1e-15);

  // normalized fusion chi has four entries of 1/2; norm^2 = 4 * 1/4 = 1
  auto fus = normalize(build_fusion(0.0));
  REQUIRE(hs_inner(fus.chi(), fus.chi()).real() == Approx(1.0).margin(1e-12));

  REQUIRE_THROWS_AS(hs_inner(CMatrix(2, 2), CMatrix(3, 3)), std::invalid_argument);
}

TEST_CASE("psd helpers") {
  Rng rng(9);
  CMatrix rho = random_density(rng, 4, 4);
  REQUIRE(is_psd(rho, 1e-9));
  CMatrix notpsd = rho - 0.5 * CMatrix::identity(4);
  REQUIRE(!is_psd(notpsd, 1e-9));
  CMatrix proj = psd_project(notpsd, 1.0);
  REQUIRE(min_eigenvalue(proj) > -1e-12);
  REQUIRE(proj.trace().real() == Approx(1.0).margin(1e-12));
}
