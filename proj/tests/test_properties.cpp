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

TEST_CASE("faithfulness: measures vanish exactly on the incapable set") {
  auto counts = testing::mp1_suite(101, 8);
  INFO("violations " << counts.violations << " of " << counts.checked);
  REQUIRE(counts.violations == 0);
  REQUIRE(counts.checked >= 40);
}

TEST_CASE("monotonicity: incapable extensions never increase the measures") {
  auto counts = testing::mp2_suite(202, 20, 6);
  INFO("worst slack " << counts.worst_slack);
  REQUIRE(counts.violations == 0);
  REQUIRE(counts.checked == 40);
}

TEST_CASE("convexity: mixing never increases the measures") {
  auto counts = testing::mp3_suite(303, 12);
  INFO("worst slack " << counts.worst_slack);
  REQUIRE(counts.violations == 0);
  REQUIRE(counts.checked == 24);
}

TEST_CASE("preservation dominates creation on every channel tested") {
  Rng rng(404);
  std::vector<ProcessMatrix> zoo;
  for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) zoo.push_back(normalize(build_fusion(p)));
  for (double tau : {0.0, M_PI / 2, M_PI}) zoo.push_back(build_lindblad_process(tau, 0.02));
  zoo.push_back(build_gate("CZ"));
  zoo.push_back(build_gate("CNOT"));
  zoo.push_back(build_example_eq8());
  zoo.push_back(tensor_extend(build_gate("H"), identity_process(1)));
  for (int i = 0; i < 4; ++i) zoo.push_back(testing::random_capable_channel(rng));

  for (const auto& chi : zoo) {
    double apre = alpha_pre(chi).value;
    double acre = alpha_cre(chi).value;
    double bpre = beta_pre(chi).value;
    double bcre = beta_cre(chi).value;
    INFO("alpha " << apre << " vs " << acre << ", beta " << bpre << " vs " << bcre);
    REQUIRE(apre >= acre - 1e-6);
    REQUIRE(bpre >= bcre - 1e-6);
  }
}

TEST_CASE("incapable processes never beat the fidelity threshold") {
  Rng rng(505);
  std::vector<ProcessMatrix> incapables = {normalize(build_fusion(1.0))};
  for (int i = 0; i < 5; ++i) incapables.push_back(testing::random_incapable_channel(rng));
  std::vector<ProcessMatrix> targets = {normalize(build_fusion(0.0)), build_gate("CZ"),
                                        identity_process(2)};
  for (const auto& target : targets) {
    double thr = f_threshold(target).value;
    for (const auto& inc : incapables)
      REQUIRE(f_expt(inc, target) <= thr + 1e-6);
  }
}

TEST_CASE("report invariants hold across a mixed ensemble") {
  Rng rng(606);
  MeasureOptions opt;
  opt.creation = true;
  opt.audit = false;
  for (int t = 0; t < 6; ++t) {
    ProcessMatrix chi =
        (t % 2 == 0) ? testing::random_capable_channel(rng) : testing::random_incapable_channel(rng);
    auto rep = evaluate_measures(chi, opt);
    REQUIRE(rep.alpha_pre >= -1e-9);
    REQUIRE(rep.beta_pre >= -1e-9);
    REQUIRE(*rep.alpha_pre_prime >= -1e-6);
    REQUIRE(rep.alpha_pre >= *rep.alpha_cre - 1e-6);
  }
}
