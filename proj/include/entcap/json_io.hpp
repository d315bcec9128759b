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

#ifndef ENTCAP_JSON_IO_HPP
#define ENTCAP_JSON_IO_HPP

#include <fstream>
#include <string>

#include <json.hpp>

#include "entcap/channels.hpp"
#include "entcap/measures.hpp"
#include "entcap/qpt.hpp"

namespace entcap {

using json = nlohmann::json;

// --- matrices ----------------------------------------------------------------

inline json matrix_to_json(const CMatrix& m) {
  json re = json::array(), im = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json rrow = json::array(), irow = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      rrow.push_back(m(i, j).real());
      irow.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rrow));
    im.push_back(std::move(irow));
  }
  return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

inline CMatrix matrix_from_json(const json& j) {
  if (!j.contains("re")) throw std::invalid_argument("matrix JSON: missing 're'");
  const auto& re = j.at("re");
  std::size_t rows = re.size();
  std::size_t cols = rows ? re.at(0).size() : 0;
  CMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = cxd(re.at(i).at(c).get<double>(), 0.0);
  if (j.contains("im")) {
    const auto& im = j.at("im");
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t c = 0; c < cols; ++c)
        m(i, c) += cxd(0.0, im.at(i).at(c).get<double>());
  }
  return m;
}

inline json to_json(const ProcessMatrix& p) {
  json j = matrix_to_json(p.chi());
  j["n_qubits"] = p.n_qubits();
  j["normalized"] = p.normalized();
  return j;
}

inline ProcessMatrix process_from_json(const json& j) {
  int n = j.at("n_qubits").get<int>();
  return ProcessMatrix(n, matrix_from_json(j), j.value("normalized", false));
}

inline json to_json(const DensityMatrix& d) {
  json j = matrix_to_json(d.matrix());
  j["n_qubits"] = d.n_qubits();
  if (!d.label().empty()) j["label"] = d.label();
  return j;
}

inline DensityMatrix density_from_json(const json& j) {
  return DensityMatrix(matrix_from_json(j), j.value("label", ""));
}

// --- tomography records -------------------------------------------------------

inline json to_json(const TomographyRecord& r) {
  json settings = json::object();
  for (const auto& [setting, bucket] : r.counts) {
    json b = json::object();
    for (const auto& [outcome, n] : bucket) b[outcome] = n;
    settings[setting] = std::move(b);
  }
  return json{{"input", r.input_label}, {"shots", r.shots_per_setting},
              {"settings", std::move(settings)}};
}

inline TomographyRecord record_from_json(const json& j) {
  TomographyRecord r;
  r.input_label = j.at("input").get<std::string>();
  r.shots_per_setting = j.at("shots").get<double>();
  const auto& settings = j.at("settings");
  int n = 0;
  for (auto it = settings.begin(); it != settings.end(); ++it) {
    n = static_cast<int>(it.key().size());
    auto& bucket = r.counts[it.key()];
    for (auto o = it.value().begin(); o != it.value().end(); ++o)
      bucket[o.key()] = o.value().get<double>();
  }
  r.n_qubits = n;
  for (const auto& [setting, bucket] : r.counts) {
    double sum = 0.0;
    for (const auto& [o, c] : bucket) {
      if (c < 0.0) throw std::invalid_argument("record: negative count");
      sum += c;
    }
    if (sum > r.shots_per_setting * (1.0 + 1e-9))
      throw std::invalid_argument("record: counts exceed shots for setting " + setting);
  }
  return r;
}

// --- channel specs -------------------------------------------------------------

inline ChannelSpec channel_spec_from_json(const json& j) {
  ChannelSpec s;
  s.kind = j.at("kind").get<std::string>();
  if (s.kind == "gate") s.gate_name = j.at("name").get<std::string>();
  if (s.kind == "fusion_noisy") s.p_noise = j.at("p_noise").get<double>();
  if (s.kind == "lindblad") {
    s.tau = j.at("tau").get<double>();
    s.gamma = j.at("gamma").get<double>();
  }
  if (s.kind == "depolarize_tensor_id") s.strength = j.value("strength", 1.0);
  if (s.kind == "losr") {
    for (const auto& v : j.at("probs")) s.probs.push_back(v.get<double>());
    for (const auto& pair : j.at("pairs")) {
      std::vector<CMatrix> a, b;
      for (const auto& m : pair.at("a")) a.push_back(matrix_from_json(m));
      for (const auto& m : pair.at("b")) b.push_back(matrix_from_json(m));
      s.losr_pairs.emplace_back(std::move(a), std::move(b));
    }
  }
  if (s.kind == "custom_kraus")
    for (const auto& m : j.at("operators")) s.kraus_ops.push_back(matrix_from_json(m));
  if (s.kind == "custom_chi") {
    const auto& c = j.at("chi");
    s.chi = matrix_from_json(c);
    s.chi_qubits = c.at("n_qubits").get<int>();
    s.chi_normalized = c.value("normalized", false);
  }
  return s;
}

// --- measure reports ------------------------------------------------------------

inline json to_json(const SolverDiagnostics& d) {
  return json{{"status", d.status},
              {"gap", d.gap},
              {"iterations", d.iterations},
              {"primal_residual", d.primal_residual},
              {"dual_residual", d.dual_residual}};
}

inline json to_json(const MeasureReport& r) {
  auto opt = [](const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
  };
  json solver{{"alpha_pre", to_json(r.alpha_pre_diag)}, {"beta_pre", to_json(r.beta_pre_diag)}};
  if (r.f_threshold) solver["f_threshold"] = to_json(r.f_threshold_diag);
  if (r.alpha_cre) {
    solver["alpha_cre"] = to_json(r.alpha_cre_diag);
    solver["beta_cre"] = to_json(r.beta_cre_diag);
  }
  json j{{"alpha_pre", r.alpha_pre},
         {"beta_pre", r.beta_pre},
         {"f_expt", opt(r.f_expt)},
         {"f_threshold", opt(r.f_threshold)},
         {"alpha_cre", opt(r.alpha_cre)},
         {"beta_cre", opt(r.beta_cre)},
         {"alpha_pre_prime", opt(r.alpha_pre_prime)},
         {"solver", std::move(solver)}};
  if (r.creation_audit)
    j["creation_audit"] = json{{"worst_pt_eigenvalue", r.creation_audit->worst_pt_eigenvalue},
                               {"samples", r.creation_audit->samples},
                               {"seed", r.creation_audit->seed}};
  return j;
}

// --- conic program debug dump ---------------------------------------------------

inline json dump_program(const sdp::ConicProgram& p) {
  json vars = json::array();
  for (std::size_t i = 0; i < p.variables().size(); ++i)
    vars.push_back(json{{"name", p.variable_names()[i]},
                        {"dim", p.variables()[i].dim},
                        {"offset", p.variables()[i].offset}});
  json cons = json::array();
  for (const auto& c : p.psd_constraints()) {
    json cols = json::array();
    for (std::size_t t = 0; t < c.cols.size(); ++t) {
      if (c.cols[t].empty()) continue;
      json terms = json::array();
      for (const auto& term : c.cols[t])
        terms.push_back(json{{"r", term.r}, {"c", term.c},
                             {"re", term.coeff.real()}, {"im", term.coeff.imag()}});
      cols.push_back(json{{"param", t}, {"terms", std::move(terms)}});
    }
    cons.push_back(json{{"dim", c.dim}, {"constant", matrix_to_json(c.constant)},
                        {"columns", std::move(cols)}});
  }
  json eqs = json::array();
  for (const auto& e : p.eq_constraints())
    eqs.push_back(json{{"constant", e.constant}, {"coeffs", e.coeffs}});
  return json{{"n_params", p.nparams()},
              {"variables", std::move(vars)},
              {"psd_constraints", std::move(cons)},
              {"eq_constraints", std::move(eqs)},
              {"objective", json{{"constant", p.objective().constant},
                                 {"coeffs", p.objective().coeffs}}}};
}

// --- files ------------------------------------------------------------------------

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  json j;
  in >> j;
  return j;
}

inline void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace entcap

#endif  // ENTCAP_JSON_IO_HPP
