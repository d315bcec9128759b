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

#ifndef ENTCAP_SWEEP_HPP
#define ENTCAP_SWEEP_HPP

#include <atomic>
#include <chrono>
#include <cstdio>
#include <functional>
#include <thread>
#include <vector>

#include "entcap/channels.hpp"
#include "entcap/measures.hpp"

namespace entcap {

struct SweepResult {
  std::string parameter;
  std::vector<double> grid;
  std::vector<MeasureReport> reports;   // one per grid point, grid order
  std::vector<double> seconds;          // wall time per point
};

namespace detail {

/// Evaluates f over the grid with a bounded worker pool. Results land in grid
/// order no matter how the workers are scheduled.
inline void parallel_grid(const std::vector<double>& grid,
                          const std::function<MeasureReport(double)>& f, int jobs,
                          SweepResult& out) {
  out.reports.resize(grid.size());
  out.seconds.resize(grid.size());
  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs < 1) jobs = 1;
  jobs = std::min<std::size_t>(jobs, grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= grid.size()) return;
      auto t0 = std::chrono::steady_clock::now();
      out.reports[i] = f(grid[i]);
      out.seconds[i] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < jobs; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

}  // namespace detail

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i)
    g[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  return g;
}

/// Fusion noise sweep: p_noise in [0, 1] with N points.
inline SweepResult sweep_fusion(int steps, bool creation, int jobs = 0,
                                double gap_tol = 1e-7) {
  if (steps < 2) throw std::invalid_argument("sweep_fusion: need at least 2 steps");
  SweepResult out;
  out.parameter = "p_noise";
  out.grid = linspace(0.0, 1.0, steps);
  MeasureOptions mo;
  mo.creation = creation;
  mo.gap_tol = gap_tol;
  mo.audit = false;  // per-point audits would dominate the sweep cost
  detail::parallel_grid(out.grid,
                        [&](double p) {
                          return evaluate_measures(normalize(build_fusion(p)), mo);
                        },
                        jobs, out);
  return out;
}

/// Coupled-qubit dynamics sweep over tau = h_int t / hbar.
inline SweepResult sweep_dynamics(double gamma, double tau_max, int steps, int jobs = 0,
                                  double gap_tol = 1e-7) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("sweep_dynamics: gamma must be >= 0");
  if (!(tau_max > 0.0) || steps < 2)
    throw std::invalid_argument("sweep_dynamics: need tau_max > 0 and steps >= 2");
  SweepResult out;
  out.parameter = "tau";
  out.grid = linspace(0.0, tau_max, steps);
  MeasureOptions mo;
  mo.creation = true;
  mo.gap_tol = gap_tol;
  mo.audit = false;
  detail::parallel_grid(out.grid,
                        [&](double tau) {
                          return evaluate_measures(build_lindblad_process(tau, gamma), mo);
                        },
                        jobs, out);
  return out;
}

/// CSV rows at 6 significant digits (plot-ready and platform-stable).
inline std::string sweep_to_csv(const SweepResult& s, bool creation) {
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::string(buf);
  };
  std::string out = s.parameter + ",alpha_pre,beta_pre";
  bool dynamics = s.parameter == "tau";
  if (creation || dynamics) out += ",alpha_cre,beta_cre";
  if (dynamics) out += ",alpha_pre_prime";
  out += "\n";
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    const auto& r = s.reports[i];
    out += fmt(s.grid[i]) + "," + fmt(r.alpha_pre) + "," + fmt(r.beta_pre);
    if (creation || dynamics) {
      out += "," + fmt(r.alpha_cre.value_or(0.0)) + "," + fmt(r.beta_cre.value_or(0.0));
    }
    if (dynamics) out += "," + fmt(r.alpha_pre_prime.value_or(0.0));
    out += "\n";
  }
  return out;
}

// Bundled display fixture: measured values for the universal gate set on a
// public superconducting device, as published. These are ingested data for
// the `report` command, never computed here. The ideal-gate references are
// alpha = beta = 1 with process-fidelity threshold 0.5.
struct GateBenchmarkRow {
  const char* gate;
  double alpha_pre, beta_pre, f_expt;
};

inline const std::vector<GateBenchmarkRow>& gate_benchmark_table() {
  static const std::vector<GateBenchmarkRow> rows = {
      {"I", 0.939, 0.918, 0.959},  {"X", 0.970, 0.960, 0.980}, {"Y", 0.931, 0.912, 0.960},
      {"Z", 0.930, 0.904, 0.953},  {"H", 0.899, 0.894, 0.947}, {"T", 0.875, 0.868, 0.934},
      {"CNOT", 0.678, 0.674, 0.757}};
  return rows;
}

inline constexpr double kGateBenchmarkThreshold = 0.5;

}  // namespace entcap

#endif  // ENTCAP_SWEEP_HPP
