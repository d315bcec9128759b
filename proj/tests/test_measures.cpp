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

TEST_CASE("composed-map certificate matrix") {
  // chi_sep must be the process matrix of PT_B after the channel
  Rng rng(13);
  for (int t = 0; t < 10; ++t) {
    auto chi = kraus_to_process(testing::random_subnormalized_kraus(rng, 4, 2));
    CMatrix sep = pt_compose_chi(chi.chi());
    // oracle: reconstruct the composed map from its action on the inputs
    std::vector<DensityMatrix> outs;
    for (const auto& st : qpt_input_set(2).states) {
      CMatrix o = partial_transpose(apply_chi(chi.chi(), 2, st.matrix()), Subsystem::B);
      o.hermitize();
      outs.push_back(DensityMatrix(psd_project(o, o.trace().real()), st.label()));
    }
    // direct check instead: applying sep reproduces PT(channel(rho))
    for (int s = 0; s < 10; ++s) {
      CMatrix rho = random_density(rng, 4, 2);
      CMatrix via_sep = apply_chi(sep, 2, rho);
      CMatrix direct = partial_transpose(apply_chi(chi.chi(), 2, rho), Subsystem::B);
      REQUIRE((via_sep - direct).max_abs() < 1e-11);
    }
    REQUIRE((pt_compose_chi(sep) - chi.chi()).max_abs() < 1e-14);  // involution
  }
}

TEST_CASE("preservation composition measure") {
  SECTION("ideal fusion is fully capable") {
    auto r = alpha_pre(normalize(build_fusion(0.0)));
    REQUIRE(r.optimal());
    REQUIRE(r.value == Approx(1.0).margin(1e-6));
  }
  SECTION("noise fraction comes out linearly on the fusion family") {
    for (double p : {0.2, 0.5, 0.8}) {
      auto r = alpha_pre(normalize(build_fusion(p)));
      REQUIRE(r.value == Approx(1.0 - p).margin(1e-6));
    }
  }
  SECTION("measure-and-prepare example costs its Bell branch") {
    // The |00> output pins any retained preparation weight t to an output
    // t * P(phi+), whose partial transpose has eigenvalue -t/2; the whole
    // branch (trace 1/4) must go. Cross-checked against an external solver.
    auto r = alpha_pre(build_example_eq8());
    REQUIRE(r.optimal());
    REQUIRE(r.value == Approx(0.25).margin(1e-3));
  }
  SECTION("full depolarization of one qubit is outside the certified set") {
    // Every output of dep (x) id is a product state, but the composed map
    // PT o channel is positive without being completely positive, so the
    // certificate construction cannot absorb any of it.
    auto chan = build_depolarize_tensor_id(1.0);
    double worst = 0.0;
    for (const auto& st : qpt_input_set(2).states) {
      CMatrix out = apply_chi(chan.chi(), 2, st.matrix());
      out.hermitize();
      worst = std::min(worst, min_eigenvalue(partial_transpose(out, Subsystem::B)));
    }
    REQUIRE(worst > -1e-10);  // all tomography outputs are PPT...
    REQUIRE(!is_incapable(chan));  // ...yet the composed-map certificate fails
    auto r = alpha_pre(chan);
    REQUIRE(r.value == Approx(1.0).margin(1e-6));
  }
}

TEST_CASE("preservation robustness measure") {
  SECTION("ideal fusion needs a full unit of noise") {
    auto r = beta_pre(normalize(build_fusion(0.0)));
    REQUIRE(r.optimal());
    REQUIRE(r.value == Approx(1.0).margin(1e-6));
  }
  SECTION("the timing-noise channel is already incapable") {
    auto r = beta_pre(normalize(build_fusion(1.0)));
    REQUIRE(r.value == Approx(0.0).margin(1e-6));
  }
  SECTION("ideal single-qubit gates extended by the identity") {
    auto ext = tensor_extend(build_gate("T"), identity_process(1));
    auto r = beta_pre(ext);
    REQUIRE(r.value == Approx(1.0).margin(1e-6));
  }
}

TEST_CASE("process fidelity and its threshold") {
  auto cz = build_gate("CZ");
  REQUIRE(f_expt(cz, cz) == Approx(1.0).margin(1e-12));
  REQUIRE(f_expt(identity_process(2), cz) == Approx(0.25).margin(1e-12));

  auto f05 = normalize(build_fusion(0.5));
  auto f00 = normalize(build_fusion(0.0));
  REQUIRE(f_expt(f05, f00) == Approx(hs_inner(f05.chi(), f00.chi()).real()).margin(1e-14));

  SECTION("fusion threshold sits at one half") {
    auto r = f_threshold(f00);
    REQUIRE(r.optimal());
    REQUIRE(r.value == Approx(0.5).margin(1e-6));
  }
  SECTION("ideal-gate thresholds sit at one half") {
    for (const char* g : {"I", "H"}) {
      auto ext = tensor_extend(build_gate(g), identity_process(1));
      REQUIRE(f_threshold(ext).value == Approx(0.5).margin(1e-6));
    }
  }
  SECTION("CZ threshold is strictly inside (0, 1) and certified") {
    auto r = f_threshold(cz);
    REQUIRE(r.optimal());
    REQUIRE(r.value > 0.0);
    REQUIRE(r.value < 1.0);
    REQUIRE(r.diag.replay_violation < 2e-8);
    REQUIRE(r.diag.replay_objective_error < 1e-9);
  }
  REQUIRE_THROWS_AS(f_expt(identity_process(2), identity_process(1)), std::invalid_argument);
}

TEST_CASE("creation measures") {
  SECTION("the identity cannot create entanglement") {
    auto r = alpha_cre(identity_process(2));
    REQUIRE(r.optimal());
    REQUIRE(r.value == Approx(0.0).margin(1e-6));
  }
  SECTION("CZ creates entanglement maximally") {
    // witness: a separable input whose CZ output violates PPT by -1/2
    CMatrix out = apply_chi(build_gate("CZ").chi(), 2,
                            projector(tensor(ket_plus(), ket_plus())));
    REQUIRE(min_eigenvalue(partial_transpose(out, Subsystem::B)) ==
            Approx(-0.5).margin(1e-12));
    auto r = alpha_cre(build_gate("CZ"));
    REQUIRE(r.value == Approx(1.0).margin(1e-3));
    REQUIRE(r.diag.replay_violation < 2e-8);
  }
  SECTION("fusion creation curve tracks the preservation curve") {
    for (double p : {0.0, 0.5, 1.0}) {
      auto chi = normalize(build_fusion(p));
      REQUIRE(alpha_cre(chi).value == Approx(alpha_pre(chi).value).margin(1e-4));
      REQUIRE(beta_cre(chi).value == Approx(beta_pre(chi).value).margin(1e-4));
    }
  }
  SECTION("sampling audit of the discretized constraint set") {
    auto r = alpha_cre(identity_process(2));
    auto audit = audit_creation_optimizer(r.optimizer, 2000, 5);
    REQUIRE(audit.worst_pt_eigenvalue > -1e-6);  // identity optimizer is exact
  }
}

TEST_CASE("derived quantities and report assembly") {
  SECTION("alpha_pre_prime splits preservation into creation and the rest") {
    MeasureOptions opt;
    opt.creation = true;
    opt.audit = false;
    auto rep_id = evaluate_measures(identity_process(2), opt);
    REQUIRE(rep_id.alpha_pre == Approx(1.0).margin(1e-6));
    REQUIRE(*rep_id.alpha_cre == Approx(0.0).margin(1e-6));
    REQUIRE(*rep_id.alpha_pre_prime == Approx(1.0).margin(2e-6));

    auto rep_cz = evaluate_measures(build_gate("CZ"), opt);
    REQUIRE(*rep_cz.alpha_pre_prime == Approx(0.0).margin(2e-3));
    REQUIRE(*rep_cz.alpha_pre_prime >= -1e-6);
  }
  SECTION("reports carry per-quantity diagnostics") {
    MeasureOptions opt;
    opt.target = nullptr;
    auto rep = evaluate_measures(normalize(build_fusion(0.3)), opt);
    REQUIRE(rep.alpha_pre_diag.status == "optimal");
    REQUIRE(rep.beta_pre_diag.status == "optimal");
    REQUIRE(rep.first_failure().empty());
    REQUIRE(!rep.f_expt.has_value());
  }
  SECTION("non-normalized input is rejected") {
    REQUIRE_THROWS_AS(alpha_pre(build_fusion(0.0)), std::invalid_argument);
  }
}

TEST_CASE("incapability predicate") {
  REQUIRE(is_incapable(normalize(build_fusion(1.0))));
  REQUIRE(!is_incapable(normalize(build_fusion(0.0))));
  REQUIRE(!is_incapable(build_example_eq8()));
  SECTION("agrees with a vanishing composition measure") {
    Rng rng(71);
    for (int t = 0; t < 6; ++t) {
      auto chi = testing::random_incapable_channel(rng);
      REQUIRE(is_incapable(chi));
      REQUIRE(alpha_pre(chi).value <= 1e-6);
    }
  }
}
