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

#include <cstring>

#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace entcap;
using namespace entcap::sdp;
using Catch::Approx;

TEST_CASE("real-symmetric embedding") {
  RMatrix e = real_embedding(CMatrix::identity(2));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) REQUIRE(e(i, j) == (i == j ? 1.0 : 0.0));

  SECTION("Pauli Y embeds with eigenvalues {-1,-1,1,1}") {
    RMatrix y = real_embedding(pauli_y());
    std::vector<double> ev;
    RMatrix vec;
    sym_eig(y, ev, vec);
    REQUIRE(ev[0] == Approx(-1.0).margin(1e-12));
    REQUIRE(ev[1] == Approx(-1.0).margin(1e-12));
    REQUIRE(ev[2] == Approx(1.0).margin(1e-12));
    REQUIRE(ev[3] == Approx(1.0).margin(1e-12));
  }
  SECTION("Bell projector embeds as a PSD rank-2 matrix") {
    RMatrix b = real_embedding(projector(bell_phi_plus()));
    std::vector<double> ev;
    RMatrix vec;
    sym_eig(b, ev, vec);
    int positive = 0;
    for (double v : ev) {
      REQUIRE(v > -1e-12);
      if (v > 1e-9) ++positive;
    }
    REQUIRE(positive == 2);
  }
  SECTION("PSD-ness transfers both ways") {
    Rng rng(3);
    for (int t = 0; t < 50; ++t) {
      CMatrix h = testing::random_hermitian(rng, 4);
      RMatrix e2 = real_embedding(h);
      std::vector<double> ev;
      RMatrix vec;
      sym_eig(e2, ev, vec);
      REQUIRE((min_eigenvalue(h) >= -1e-10) == (ev.front() >= -1e-10));
    }
  }
}

namespace {

SdpSolution solve_trace_toy(double scale, double gap_tol = 1e-9) {
  ConicProgram p;
  auto x = p.add_hermitian(2, "x");
  p.add_psd(p.var_expr(x));
  p.add_eq(p.trace_expr(x) - p.scalar_const(1.0));
  CMatrix c(2, 2);
  c(0, 0) = 1.0;
  c(1, 1) = 2.0;
  p.minimize(scale * p.trace_product_expr(x, c));
  SolveOptions opt;
  opt.gap_tol = gap_tol;
  return solve(p, opt);
}

}  // namespace

TEST_CASE("toy programs with known solutions") {
  SECTION("trace normalization forces the objective") {
    ConicProgram p;
    auto x = p.add_hermitian(2, "x");
    p.add_psd(p.var_expr(x));
    p.add_eq(p.trace_expr(x) - p.scalar_const(1.0));
    p.minimize(p.trace_expr(x));
    SolveOptions opt;
    opt.gap_tol = 1e-9;
    auto s = solve(p, opt);
    REQUIRE(s.status == SolveStatus::optimal);
    REQUIRE(s.optimal_value == Approx(1.0).margin(1e-8));
  }
  SECTION("diagonal objective picks the smallest eigenvalue") {
    auto s = solve_trace_toy(1.0);
    REQUIRE(s.status == SolveStatus::optimal);
    REQUIRE(s.optimal_value == Approx(1.0).margin(1e-8));
    REQUIRE(s.variable_values[0](0, 0).real() == Approx(1.0).margin(1e-7));
    REQUIRE(std::abs(s.variable_values[0](1, 1)) < 1e-7);
  }
  SECTION("infeasible constraints are certified") {
    ConicProgram p;
    auto x = p.add_hermitian(2, "x");
    p.add_psd(p.var_expr(x) - p.const_expr(CMatrix::identity(2)));
    p.add_psd(p.var_expr(x, -1.0));
    p.minimize(p.trace_expr(x));
    REQUIRE(solve(p).status == SolveStatus::infeasible);
  }
  SECTION("unbounded objectives are certified by an improving ray") {
    ConicProgram p;
    auto x = p.add_hermitian(2, "x");
    p.add_psd(p.var_expr(x));
    p.minimize(-1.0 * p.trace_expr(x));
    REQUIRE(solve(p).status == SolveStatus::unbounded);
  }
}

TEST_CASE("solution quality contracts") {
  auto fus = normalize(build_fusion(0.35));
  ConicProgram p;
  auto x = p.add_hermitian(16, "chi_tilde");
  p.add_psd(p.var_expr(x));
  p.add_psd(p.const_expr(fus.chi()) - p.var_expr(x));
  p.add_psd(pt_compose_expr(p.var_expr(x)));
  p.minimize(p.scalar_const(1.0) - p.trace_expr(x));
  auto s = solve(p);
  REQUIRE(s.status == SolveStatus::optimal);
  REQUIRE(s.optimal_value == Approx(0.65).margin(1e-6));  // noise weight p = 0.35

  SECTION("certificate replay") {
    REQUIRE(p.max_violation(s.full_parameters) <= 1e-8 + 1e-9);
    REQUIRE(std::abs(p.objective().eval(s.full_parameters) - s.optimal_value) < 1e-9);
  }
  SECTION("gap is non-increasing across accepted iterations") {
    for (std::size_t i = 1; i < s.gap_history.size(); ++i)
      REQUIRE(s.gap_history[i] <= s.gap_history[i - 1] * (1.0 + 1e-9) + 1e-15);
  }
  SECTION("dual bound stays below the primal objective") {
    REQUIRE(s.dual_residual < 1e-7);
    REQUIRE(s.dual_objective <= s.optimal_value + 1e-7);
  }
  SECTION("scaling the objective scales the value and keeps the optimizer") {
    ConicProgram p10;
    auto y = p10.add_hermitian(16, "chi_tilde");
    p10.add_psd(p10.var_expr(y));
    p10.add_psd(p10.const_expr(fus.chi()) - p10.var_expr(y));
    p10.add_psd(pt_compose_expr(p10.var_expr(y)));
    p10.minimize(10.0 * (p10.scalar_const(1.0) - p10.trace_expr(y)));
    auto s10 = solve(p10);
    REQUIRE(s10.optimal_value == Approx(10.0 * s.optimal_value).epsilon(1e-6));
    REQUIRE((s10.variable_values[0] - s.variable_values[0]).max_abs() < 1e-5);
  }
  SECTION("identical inputs produce identical outputs") {
    auto s2 = solve(p);
    REQUIRE(std::memcmp(&s.optimal_value, &s2.optimal_value, sizeof(double)) == 0);
    REQUIRE(s.iterations == s2.iterations);
    const auto& a = s.variable_values[0].data();
    const auto& b = s2.variable_values[0].data();
    REQUIRE(std::memcmp(a.data(), b.data(), a.size() * sizeof(cxd)) == 0);
  }
}

TEST_CASE("equality elimination") {
  // fix tr(X) = 2 and minimize <diag(1,3), X>: optimum X = diag(2, 0), value 2
  ConicProgram p;
  auto x = p.add_hermitian(2, "x");
  p.add_psd(p.var_expr(x));
  CMatrix c(2, 2);
  c(0, 0) = 1.0;
  c(1, 1) = 3.0;
  p.add_eq(p.trace_expr(x) - p.scalar_const(2.0));
  p.minimize(p.trace_product_expr(x, c));
  SolveOptions opt;
  opt.gap_tol = 1e-9;
  auto s = solve(p, opt);
  REQUIRE(s.status == SolveStatus::optimal);
  REQUIRE(s.optimal_value == Approx(2.0).margin(1e-7));
  double trace = (s.variable_values[0](0, 0) + s.variable_values[0](1, 1)).real();
  REQUIRE(trace == Approx(2.0).margin(1e-9));

  SECTION("contradictory equalities are infeasible") {
    ConicProgram q;
    auto y = q.add_hermitian(2, "y");
    q.add_psd(q.var_expr(y));
    q.add_eq(q.trace_expr(y) - q.scalar_const(1.0));
    q.add_eq(q.trace_expr(y) - q.scalar_const(2.0));
    q.minimize(q.trace_expr(y));
    REQUIRE(solve(q).status == SolveStatus::infeasible);
  }
}

TEST_CASE("scalar inequalities ride along as 1x1 blocks") {
  // minimize tr(X) with tr(X) >= 3
  ConicProgram p;
  auto x = p.add_hermitian(2, "x");
  p.add_psd(p.var_expr(x));
  p.add_scalar_ineq(p.trace_expr(x) - p.scalar_const(3.0));
  p.minimize(p.trace_expr(x));
  auto s = solve(p);
  REQUIRE(s.status == SolveStatus::optimal);
  REQUIRE(s.optimal_value == Approx(3.0).margin(1e-6));
}

TEST_CASE("backend seam delegates the solve") {
  ConicProgram p;
  auto x = p.add_hermitian(2, "x");
  p.add_psd(p.var_expr(x));
  p.minimize(p.trace_expr(x));
  SolveOptions opt;
  bool called = false;
  opt.backend = [&](const ConicProgram&, const SolveOptions&) {
    called = true;
    SdpSolution s;
    s.status = SolveStatus::optimal;
    s.optimal_value = 42.0;
    return s;
  };
  auto s = solve(p, opt);
  REQUIRE(called);
  REQUIRE(s.optimal_value == 42.0);
}
