// Copyright 2026 The polabh Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef POLABH_SWEEP_HPP
#define POLABH_SWEEP_HPP

// Omega sweeps of the effective coefficients and the full-vs-effective
// dynamics comparison on small cavity arrays.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "polabh/errors.hpp"
#include "polabh/evolve.hpp"
#include "polabh/models.hpp"
#include "polabh/parallel.hpp"
#include "polabh/params.hpp"

namespace polabh::sweep {

using params::PhysicalParams;

struct SweepRow {
  double omega_over_g13 = 0.0;
  std::optional<params::EffectiveParams> effective;  // empty on DegenerateDetuning
  std::string error;
  double mu_gap = 0.0;  // |mu_c - mu_b|
  bool valid = false;   // ValidityReport::overall_pass
  std::vector<std::string> failed_conditions;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::optional<params::CrossoverRegion> crossover;
};

inline std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0.0 && hi > lo) || points < 1) throw ConfigError("log grid needs 0 < lo < hi and points >= 1");
  std::vector<double> g(static_cast<std::size_t>(points));
  if (points == 1) {
    g[0] = lo;
    return g;
  }
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (points - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

inline std::vector<double> linear_grid(double lo, double hi, int points) {
  if (!(hi > lo) || points < 1) throw ConfigError("linear grid needs lo < hi and points >= 1");
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
  return g;
}

/// Effective coefficients, |mu_c - mu_b| and validity flags along an Omega
/// grid (in units of g13). Degenerate rows are flagged, never fatal.
inline SweepResult sweep_omega(const PhysicalParams& p, const std::vector<double>& omega_grid,
                               double threshold = 0.1, unsigned threads = 1,
                               std::optional<params::Interval> crossover_bracket = std::nullopt) {
  p.validate();
  for (std::size_t i = 0; i < omega_grid.size(); ++i) {
    if (!(omega_grid[i] > 0.0)) throw ConfigError("Omega grid must be positive");
    if (i > 0 && !(omega_grid[i] > omega_grid[i - 1])) throw ConfigError("Omega grid must be strictly increasing");
  }
  SweepResult result;
  result.rows.resize(omega_grid.size());
  parallel_for(omega_grid.size(), threads, [&](std::size_t i) {
    PhysicalParams q = p;
    q.omega = omega_grid[i] * p.g13;
    SweepRow row;
    row.omega_over_g13 = omega_grid[i];
    try {
      row.effective = params::map_effective(q);
      row.mu_gap = std::abs(row.effective->mu_c - row.effective->mu_b);
    } catch (const DegenerateDetuning& e) {
      row.error = e.what();
      row.mu_gap = std::abs(params::derive_scales(q).b_squared() / q.delta);
    }
    const auto report = params::check_validity(q, threshold);
    row.valid = report.overall_pass;
    for (const auto& c : report.conditions)
      if (!c.pass) row.failed_conditions.push_back(c.name);
    result.rows[i] = std::move(row);
  });
  if (!omega_grid.empty()) {
    const params::Interval bracket =
        crossover_bracket.value_or(params::Interval{omega_grid.front() * p.g13, omega_grid.back() * p.g13});
    try {
      result.crossover = params::crossover_region(p, bracket);
    } catch (const NoCrossover&) {
      result.crossover.reset();
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Full vs effective dynamics

inline constexpr std::array<const char*, 4> kComparedObservables = {"N_b", "N_c", "F_b", "F_c"};

enum class PairConversion { automatic, on, off };

struct CompareOptions {
  evolve::PropagatorConfig propagator;
  bool include_eq6 = true;
  PairConversion pair_conversion = PairConversion::automatic;
  int max_excitations = 0;  // 0: number of placements
  unsigned threads = 2;
};

/// Per cavity: full, effective and full - effective for N_b, N_c, F_b, F_c.
struct CavityComparison {
  std::array<std::vector<double>, 4> full;
  std::array<std::vector<double>, 4> effective;
  std::array<std::vector<double>, 4> diff;
  std::array<double, 4> max_abs_diff{};
};

struct ComparisonResult {
  std::vector<double> times;
  std::vector<CavityComparison> cavities;
  // Drift of the conserved charges and of the norm over the run.
  double full_charge_drift = 0.0;
  double effective_charge_drift = 0.0;
  double full_norm_drift = 0.0;
  double effective_norm_drift = 0.0;
  double full_energy_drift = 0.0;
  double effective_energy_drift = 0.0;
  bool validity_pass = false;
  bool pair_conversion_included = false;

  double max_abs_diff() const {
    double m = 0.0;
    for (const auto& c : cavities)
      for (double d : c.max_abs_diff) m = std::max(m, d);
    return m;
  }
};

namespace detail {

inline std::array<std::vector<double>, 4> extract_bc(const evolve::TimeSeries& ts, int site) {
  std::array<std::vector<double>, 4> out;
  for (std::size_t k = 0; k < 4; ++k) out[k] = ts.column(evolve::site_label(kComparedObservables[k], site));
  return out;
}

inline double max_drift(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x - v.front()));
  return m;
}

}  // namespace detail

/// Pointwise differences a - b of two observable sets.
inline std::array<std::vector<double>, 4> difference(const std::array<std::vector<double>, 4>& a,
                                                     const std::array<std::vector<double>, 4>& b) {
  std::array<std::vector<double>, 4> d;
  for (std::size_t k = 0; k < 4; ++k) {
    if (a[k].size() != b[k].size()) throw DimMismatch("series length mismatch");
    d[k].resize(a[k].size());
    for (std::size_t i = 0; i < a[k].size(); ++i) d[k][i] = a[k][i] - b[k][i];
  }
  return d;
}

/// Evolves matched initial states in the full and effective models and
/// compares N_b, N_c, F_b, F_c cavity by cavity.
inline ComparisonResult compare_full_vs_effective(const PhysicalParams& p, const models::LatticeSpec& lattice,
                                                  const std::vector<models::Placement>& placements,
                                                  double t_max, int n_samples,
                                                  const CompareOptions& options = {}) {
  p.validate();
  lattice.validate();
  for (const auto& pl : placements)
    if (pl.species != models::Species::b && pl.species != models::Species::c)
      throw ConfigError("comparison placements must be b or c polaritons");
  const int cap = options.max_excitations > 0 ? options.max_excitations : static_cast<int>(placements.size());
  const auto eff_params = params::map_effective(p);

  ComparisonResult result;
  result.validity_pass = params::check_validity(p).overall_pass;
  result.pair_conversion_included =
      options.pair_conversion == PairConversion::on ||
      (options.pair_conversion == PairConversion::automatic && eff_params.pair_conv_active);

  models::EffectiveModelSpec eff_spec;
  eff_spec.params = eff_params;
  eff_spec.lattice = lattice;
  eff_spec.max_particles = cap;
  eff_spec.include_eq6 = options.include_eq6;
  eff_spec.include_pair_conversion = result.pair_conversion_included;

  models::FullModelSpec full_spec;
  full_spec.params = p;
  full_spec.lattice = lattice;
  full_spec.max_excitations = cap;

  const auto times = evolve::uniform_times(t_max, n_samples);
  result.times = times;

  struct Run {
    evolve::TimeSeries ts;
    double charge_drift = 0.0;
    double energy_drift = 0.0;
    double norm_drift = 0.0;
  };
  std::array<Run, 2> runs;
  const std::array<models::ModelSpec, 2> specs = {models::ModelSpec{full_spec}, models::ModelSpec{eff_spec}};

  parallel_for(2, options.threads, [&](std::size_t which) {
    const models::Model model(specs[which]);
    const auto h = models::build_hamiltonian(model);
    const auto psi0 = models::prepare_state(model, placements);
    std::vector<evolve::Observable> obs;
    for (int r = 0; r < lattice.n_sites; ++r) {
      auto o = evolve::observables_bc(model, r);
      obs.insert(obs.end(), o.begin(), o.end());
    }
    obs.push_back({"charge", models::conserved_charge(model)});
    obs.push_back({"energy", h});
    Run run;
    run.ts = evolve::evolve(h, psi0, times, obs, options.propagator);
    for (int r = 0; r < lattice.n_sites; ++r) evolve::add_fluctuations(run.ts, r);
    run.charge_drift = detail::max_drift(run.ts.column("charge"));
    run.energy_drift = detail::max_drift(run.ts.column("energy"));
    run.norm_drift = 0.0;
    for (double n : run.ts.norms()) run.norm_drift = std::max(run.norm_drift, std::abs(n - 1.0));
    runs[which] = std::move(run);
  });

  result.full_charge_drift = runs[0].charge_drift;
  result.effective_charge_drift = runs[1].charge_drift;
  result.full_energy_drift = runs[0].energy_drift;
  result.effective_energy_drift = runs[1].energy_drift;
  result.full_norm_drift = runs[0].norm_drift;
  result.effective_norm_drift = runs[1].norm_drift;

  for (int r = 0; r < lattice.n_sites; ++r) {
    CavityComparison c;
    c.full = detail::extract_bc(runs[0].ts, r);
    c.effective = detail::extract_bc(runs[1].ts, r);
    c.diff = difference(c.full, c.effective);
    for (std::size_t k = 0; k < 4; ++k) {
      double m = 0.0;
      for (double d : c.diff[k]) m = std::max(m, std::abs(d));
      c.max_abs_diff[k] = m;
    }
    result.cavities.push_back(std::move(c));
  }
  return result;
}

}  // namespace polabh::sweep

#endif  // POLABH_SWEEP_HPP
