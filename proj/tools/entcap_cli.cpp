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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <CLI11.hpp>

#include "entcap/json_io.hpp"
#include "entcap/sweep.hpp"

namespace fs = std::filesystem;
using namespace entcap;

namespace {

// Values within 1e-6 of an exact 0 or 1 print as the exact figure; the JSON
// report keeps the raw numbers.
std::string show(double v) {
  if (std::abs(v) <= 1e-6) v = 0.0;
  if (std::abs(v - 1.0) <= 1e-6) v = 1.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

/// Loads a channel from a ChannelSpec or ProcessMatrix JSON file, extends
/// single-qubit channels by the identity, and normalizes the trace.
ProcessMatrix load_channel(const std::string& path) {
  json j = load_json(path);
  ProcessMatrix chi = j.contains("kind") ? build_channel(channel_spec_from_json(j))
                                         : process_from_json(j);
  if (chi.n_qubits() == 1) chi = tensor_extend(chi, identity_process(1));
  return normalize(chi);
}

int cmd_measure(const std::string& spec_path, const std::string& target_path, bool creation,
                int cre_samples, const std::string& out_path, double gap_tol,
                std::uint64_t seed) {
  ProcessMatrix chi = load_channel(spec_path);
  std::optional<ProcessMatrix> target;
  if (!target_path.empty()) target = load_channel(target_path);

  MeasureOptions opt;
  opt.creation = creation;
  opt.creation_extra_samples = cre_samples;
  opt.seed = seed;
  opt.gap_tol = gap_tol;
  opt.target = target ? &*target : nullptr;
  MeasureReport rep = evaluate_measures(chi, opt);

  std::printf("%-16s %10s   %s\n", "quantity", "value", "solver");
  auto row = [&](const char* name, double v, const SolverDiagnostics& d) {
    std::printf("%-16s %10s   %s (%d it, gap %.1e)\n", name, show(v).c_str(),
                d.status.c_str(), d.iterations, d.gap);
  };
  row("alpha_pre", rep.alpha_pre, rep.alpha_pre_diag);
  row("beta_pre", rep.beta_pre, rep.beta_pre_diag);
  if (rep.f_expt) std::printf("%-16s %10s\n", "f_expt", show(*rep.f_expt).c_str());
  if (rep.f_threshold) row("f_threshold", *rep.f_threshold, rep.f_threshold_diag);
  if (rep.alpha_cre) {
    row("alpha_cre", *rep.alpha_cre, rep.alpha_cre_diag);
    row("beta_cre", *rep.beta_cre, rep.beta_cre_diag);
    std::printf("%-16s %10s\n", "alpha_pre_prime", show(*rep.alpha_pre_prime).c_str());
    if (rep.creation_audit)
      std::printf("%-16s %10.3e   (%d sampled products)\n", "creation_audit",
                  rep.creation_audit->worst_pt_eigenvalue, rep.creation_audit->samples);
  }
  if (!out_path.empty()) save_json(out_path, to_json(rep));
  std::string failed = rep.first_failure();
  if (!failed.empty()) {
    std::fprintf(stderr, "error: solver did not reach optimality for %s\n", failed.c_str());
    return 2;
  }
  return 0;
}

int sweep_exit(const SweepResult& res) {
  for (std::size_t i = 0; i < res.reports.size(); ++i) {
    std::string failed = res.reports[i].first_failure();
    if (!failed.empty()) {
      std::fprintf(stderr, "error: solver did not reach optimality for %s at %s=%g\n",
                   failed.c_str(), res.parameter.c_str(), res.grid[i]);
      return 2;
    }
  }
  return 0;
}

int cmd_qpt(const std::string& dir, bool shots_exact, const std::string& out_path) {
  std::vector<TomographyRecord> records;
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json")
      files.push_back(e.path().string());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) records.push_back(record_from_json(load_json(f)));
  if (records.empty()) throw std::invalid_argument("no record files in " + dir);
  ProcessMatrix chi = qpt_from_counts(records, /*project=*/!shots_exact);
  CMatrix h = chi.chi();
  std::printf("trace          %.12f\n", chi.trace());
  std::printf("min_eigenvalue %.3e\n", min_eigenvalue(h));
  std::printf("tp_residual    %.3e\n", chi.tp_residual());
  if (!out_path.empty()) save_json(out_path, to_json(chi));
  return 0;
}

int cmd_report(const std::string& fixture) {
  if (fixture != "table1")
    throw std::invalid_argument("unknown fixture '" + fixture + "' (available: table1)");
  std::printf("Gate benchmark (ingested experimental data, not computed; ideal gates have\n"
              "alpha_pre = beta_pre = 1 and threshold F = %.1f)\n\n",
              kGateBenchmarkThreshold);
  std::printf("%-6s %10s %10s %10s\n", "gate", "alpha_pre", "beta_pre", "f_expt");
  for (const auto& row : gate_benchmark_table())
    std::printf("%-6s %10.3f %10.3f %10.3f\n", row.gate, row.alpha_pre, row.beta_pre,
                row.f_expt);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement-capability measures for two-qubit processes"};
  app.require_subcommand(1);

  std::uint64_t seed = 20509;
  double gap_tol = 1e-7;
  int jobs = 0;
  app.add_option("--seed", seed, "random seed for sampled quantities");
  app.add_option("--gap-tol", gap_tol, "solver duality-gap tolerance");
  app.add_option("--jobs", jobs, "worker threads for sweeps (0 = all cores)");

  auto* measure = app.add_subcommand("measure", "evaluate capability measures of a channel");
  std::string spec_path, target_path, out_path;
  bool creation = false;
  int cre_samples = 0;
  measure->add_option("spec", spec_path, "ChannelSpec or ProcessMatrix JSON")->required();
  measure->add_option("--target", target_path, "target channel for the fidelity criterion");
  measure->add_flag("--creation", creation, "also evaluate creation-capability measures");
  measure->add_option("--cre-samples", cre_samples,
                      "extra random product states in the creation constraint set");
  measure->add_option("--out", out_path, "write the JSON report here");

  auto* sweepf = app.add_subcommand("sweep-fusion", "measure the noisy-fusion family");
  int steps = 21;
  bool sweep_creation = false;
  std::string csv_path, sweep_out;
  sweepf->add_option("--steps", steps, "grid points over p_noise in [0,1]");
  sweepf->add_flag("--creation", sweep_creation, "include creation measures");
  sweepf->add_option("--csv", csv_path, "write CSV here");
  sweepf->add_option("--out", sweep_out, "write JSON reports here");

  auto* sweepd = app.add_subcommand("sweep-dynamics", "measure the coupled-qubit dynamics");
  double gamma = 0.02, tau_max = 4.0 * M_PI;
  int dsteps = 201;
  std::string dcsv_path, dout;
  sweepd->add_option("--gamma", gamma, "depolarizing rate on qubit B");
  sweepd->add_option("--tau-max", tau_max, "sweep end (tau = h_int t / hbar)");
  sweepd->add_option("--steps", dsteps, "grid points");
  sweepd->add_option("--csv", dcsv_path, "write CSV here");
  sweepd->add_option("--out", dout, "write JSON reports here");

  auto* qpt = app.add_subcommand("qpt", "reconstruct a process matrix from count records");
  std::string records_dir, qpt_out;
  bool shots_exact = false;
  qpt->add_option("records", records_dir, "directory of TomographyRecord JSON files")
      ->required();
  qpt->add_flag("--shots-exact", shots_exact,
                "records hold exact frequencies; skip the PSD projection");
  qpt->add_option("--out", qpt_out, "write the reconstructed chi here");

  auto* report = app.add_subcommand("report", "render a bundled data table");
  std::string fixture;
  report->add_option("fixture", fixture, "fixture name (table1)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*measure)
      return cmd_measure(spec_path, target_path, creation, cre_samples, out_path, gap_tol,
                         seed);
    if (*sweepf) {
      SweepResult res = sweep_fusion(steps, sweep_creation, jobs, gap_tol);
      std::string csv = sweep_to_csv(res, sweep_creation);
      if (!csv_path.empty()) {
        std::ofstream f(csv_path);
        f << csv;
      } else {
        std::fputs(csv.c_str(), stdout);
      }
      if (!sweep_out.empty()) {
        json arr = json::array();
        for (std::size_t i = 0; i < res.grid.size(); ++i) {
          json r = to_json(res.reports[i]);
          r[res.parameter] = res.grid[i];
          arr.push_back(std::move(r));
        }
        save_json(sweep_out, arr);
      }
      return sweep_exit(res);
    }
    if (*sweepd) {
      SweepResult res = sweep_dynamics(gamma, tau_max, dsteps, jobs, gap_tol);
      std::string csv = sweep_to_csv(res, true);
      if (!dcsv_path.empty()) {
        std::ofstream f(dcsv_path);
        f << csv;
      } else {
        std::fputs(csv.c_str(), stdout);
      }
      if (!dout.empty()) {
        json arr = json::array();
        for (std::size_t i = 0; i < res.grid.size(); ++i) {
          json r = to_json(res.reports[i]);
          r[res.parameter] = res.grid[i];
          arr.push_back(std::move(r));
        }
        save_json(dout, arr);
      }
      return sweep_exit(res);
    }
    if (*qpt) return cmd_qpt(records_dir, shots_exact, qpt_out);
    if (*report) return cmd_report(fixture);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
