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


#ifndef POLABH_CLI_HPP
#define POLABH_CLI_HPP

// Subcommands of the `polabh` executable. `run` is the whole program; the
// executable only forwards argv.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "polabh/config.hpp"
#include "polabh/errors.hpp"
#include "polabh/evolve.hpp"
#include "polabh/measure.hpp"
#include "polabh/models.hpp"
#include "polabh/parallel.hpp"
#include "polabh/params.hpp"
#include "polabh/sweep.hpp"

#ifndef POLABH_VERSION
#define POLABH_VERSION "0.0.0"
#endif

namespace polabh::cli {

namespace fs = std::filesystem;
using config::format_double;
using config::RunConfig;

inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

// ---------------------------------------------------------------------------
// Config sections

/// params.* keys; defaults are the three-cavity dynamics regime.
inline params::PhysicalParams read_params(RunConfig& c) {
  const auto d = params::fig3_params();
  params::PhysicalParams p;
  p.g13 = c.get_double("params.g13", d.g13);
  p.g24 = c.get_double("params.g24", d.g24);
  p.n_atoms = static_cast<int>(c.get_int("params.n_atoms", d.n_atoms));
  p.delta = c.get_double("params.delta", d.delta);
  p.big_delta = c.get_double("params.big_delta", d.big_delta);
  p.epsilon = c.get_double("params.epsilon", d.epsilon);
  p.omega = c.get_double("params.omega", d.omega);
  p.alpha = c.get_double("params.alpha", d.alpha);
  p.kappa = c.get_double("params.kappa", 0.0);
  p.gamma3 = c.get_double("params.gamma3", 0.0);
  p.gamma4 = c.get_double("params.gamma4", 0.0);
  return p;
}

inline double read_threshold(RunConfig& c) {
  const double t = c.get_double("validity.threshold", 0.1);
  if (!(t > 0.0 && t < 1.0)) throw ConfigError("validity.threshold must lie in (0, 1)");
  return t;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item = config::trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline int parse_index(const std::string& s, const std::string& what) {
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw ConfigError(what + ": '" + s + "' is not an integer");
  return v;
}

inline double parse_number(const std::string& s, const std::string& what) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty())
    throw ConfigError(what + ": '" + s + "' is not a number");
  return v;
}

/// lattice.sites, lattice.edges = chain | ring | "1-2,2-3,..." (1-based).
inline models::LatticeSpec read_lattice(RunConfig& c) {
  models::LatticeSpec l;
  l.n_sites = static_cast<int>(c.get_int("lattice.sites", 3));
  if (l.n_sites < 1) throw ConfigError("lattice.sites must be >= 1");
  const std::string edges = c.get_string("lattice.edges", "chain");
  if (edges == "chain") {
    l = models::LatticeSpec::chain(l.n_sites);
  } else if (edges == "ring") {
    l = models::LatticeSpec::chain(l.n_sites);
    if (l.n_sites > 2) l.edges.emplace_back(l.n_sites - 1, 0);
  } else if (edges != "none") {
    for (const auto& e : split(edges, ',')) {
      const auto dash = e.find('-');
      if (dash == std::string::npos) throw ConfigError("lattice.edges: expected 'i-j', got '" + e + "'");
      l.edges.emplace_back(parse_index(config::trim(e.substr(0, dash)), "lattice.edges") - 1,
                           parse_index(config::trim(e.substr(dash + 1)), "lattice.edges") - 1);
    }
  }
  l.validate();
  return l;
}

/// state.placements = "b@1,b@2,c@3" (species@cavity, 1-based).
inline std::vector<models::Placement> read_placements(RunConfig& c, int n_sites) {
  std::vector<models::Placement> out;
  for (const auto& item : split(c.get_string("state.placements", "b@1,b@2,c@3"), ',')) {
    const auto at = item.find('@');
    if (at == std::string::npos) throw ConfigError("state.placements: expected 'species@cavity', got '" + item + "'");
    const std::string sp = config::trim(item.substr(0, at));
    models::Placement pl;
    if (sp == "b") pl.species = models::Species::b;
    else if (sp == "c") pl.species = models::Species::c;
    else if (sp == "p0") pl.species = models::Species::p0;
    else if (sp == "p_plus") pl.species = models::Species::p_plus;
    else if (sp == "p_minus") pl.species = models::Species::p_minus;
    else throw ConfigError("state.placements: unknown species '" + sp + "'");
    pl.site = parse_index(config::trim(item.substr(at + 1)), "state.placements") - 1;
    if (pl.site < 0 || pl.site >= n_sites) throw ConfigError("state.placements: cavity out of range in '" + item + "'");
    out.push_back(pl);
  }
  return out;
}

inline evolve::PropagatorConfig read_propagator(RunConfig& c) {
  evolve::PropagatorConfig pc;
  pc.method = c.get_choice("propagator.method", "dense", {"dense", "krylov"}) == "dense" ? evolve::Method::dense
                                                                                       : evolve::Method::krylov;
  pc.time_step = c.get_double("propagator.time_step", 1.0);
  pc.krylov_dim = static_cast<int>(c.get_int("propagator.krylov_dim", 30));
  pc.tolerance = c.get_double("propagator.tolerance", 1e-10);
  pc.validate();
  return pc;
}

// ---------------------------------------------------------------------------
// Output

struct Context {
  RunConfig cfg;
  fs::path out_dir = ".";
  unsigned threads = 0;
  std::ostream* log = &std::cout;
};

class OutputFiles {
 public:
  OutputFiles(const Context& ctx, std::string command) : ctx_(ctx), command_(std::move(command)) {
    std::error_code ec;
    fs::create_directories(ctx_.out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + ctx_.out_dir.string() + "'");
  }

  std::string header() const {
    return "# polabh " POLABH_VERSION "\n# command " + command_ + "\n# config_hash fnv1a64:" + ctx_.cfg.hash() + "\n";
  }

  /// Writes `body` after the standard header; returns the path.
  fs::path write(const std::string& name, const std::string& body) const {
    const fs::path path = ctx_.out_dir / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + path.string() + "'");
    f << header() << body;
    if (!f) throw ConfigError("write failed for '" + path.string() + "'");
    *ctx_.log << "wrote " << path.string() << "\n";
    return path;
  }

  void write_resolved_config() const { write(command_ + ".resolved.cfg", ctx_.cfg.resolved_text()); }

 private:
  const Context& ctx_;
  std::string command_;
};

inline std::string kv(const std::string& key, double v) { return key + " = " + format_double(v) + "\n"; }
inline std::string kv(const std::string& key, const std::string& v) { return key + " = " + v + "\n"; }
inline std::string kv_bool(const std::string& key, bool v) { return kv(key, std::string(v ? "true" : "false")); }

inline std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

inline std::string effective_text(const params::EffectiveParams& e) {
  return kv("mu_b", e.mu_b) + kv("mu_c", e.mu_c) + kv("u_b", e.u_b) + kv("u_c", e.u_c) + kv("u_bc", e.u_bc) +
         kv("j_bb", e.j_bb) + kv("j_cc", e.j_cc) + kv("j_bc", e.j_bc) + kv("eps_b", e.eps_b) + kv("eps_c", e.eps_c) +
         kv("eps_bc", e.eps_bc) + kv("pair_conv", e.pair_conv) + kv_bool("pair_conv_active", e.pair_conv_active);
}

inline std::string validity_text(const params::ValidityReport& r) {
  std::string out = kv("validity.threshold", r.threshold) + kv_bool("validity.overall_pass", r.overall_pass);
  for (const auto& c : r.conditions) {
    const std::string k = "validity." + c.name;
    out += kv(k + ".lhs", c.lhs) + kv(k + ".rhs", c.rhs) + kv(k + ".ratio", c.ratio) + kv_bool(k + ".pass", c.pass) +
           kv_bool(k + ".advisory", c.advisory);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Commands

inline void cmd_map_params(Context& ctx) {
  const auto p = read_params(ctx.cfg);
  const double threshold = read_threshold(ctx.cfg);
  ctx.cfg.reject_unknown();
  p.validate();
  const OutputFiles out(ctx, "map-params");
  out.write_resolved_config();
  const auto s = params::derive_scales(p);
  const auto e = params::map_effective(p);
  const auto r = params::check_validity(p, threshold);
  const std::string body = kv("g", s.g) + kv("b_scale", s.b_scale) + kv("a_scale", s.a_scale) +
                           kv("mu_plus", s.mu_plus) + kv("mu_minus", s.mu_minus) + effective_text(e) + validity_text(r);
  out.write("map_params.txt", body);
}

inline void cmd_sweep_omega(Context& ctx) {
  auto p = read_params(ctx.cfg);
  const double threshold = read_threshold(ctx.cfg);
  const double lo = ctx.cfg.get_double("sweep.omega_min", 10.0);
  const double hi = ctx.cfg.get_double("sweep.omega_max", 1000.0);
  const long points = ctx.cfg.get_int("sweep.points", 200);
  const bool log_spacing = ctx.cfg.get_choice("sweep.spacing", "log", {"log", "linear"}) == "log";
  const double br_lo = ctx.cfg.get_double("crossover.omega_min", 0.0);
  const double br_hi = ctx.cfg.get_double("crossover.omega_max", 0.0);
  ctx.cfg.reject_unknown();
  if (points < 1 || points > 10'000'000) throw ConfigError("sweep.points must lie in [1, 1e7]");
  p.omega = 0.0;
  p.validate();
  const auto grid = log_spacing ? sweep::log_grid(lo, hi, static_cast<int>(points))
                                : sweep::linear_grid(lo, hi, static_cast<int>(points));
  std::optional<params::Interval> bracket;
  if (br_hi > br_lo && br_lo > 0.0) bracket = params::Interval{br_lo * p.g13, br_hi * p.g13};
  const OutputFiles out(ctx, "sweep-omega");
  out.write_resolved_config();
  const auto r = sweep::sweep_omega(p, grid, threshold, resolve_threads(ctx.threads), bracket);

  std::string body;
  const double g = p.collective_g();
  if (r.crossover) {
    body += "# crossover_omega_low " + format_double(r.crossover->omega_low) + "\n";
    body += "# crossover_omega_high " + format_double(r.crossover->omega_high) + "\n";
    body += "# crossover_low_over_g " + format_double(r.crossover->omega_low / g) + "\n";
    body += "# crossover_high_over_g " + format_double(r.crossover->omega_high / g) + "\n";
  } else {
    body += "# crossover none\n";
  }
  body += "omega_over_g13,u_b,u_c,u_bc,j_bb,j_cc,j_bc,mu_gap,pair_conv_active,valid,degenerate,failed_conditions\n";
  const std::string nan = "nan";
  for (const auto& row : r.rows) {
    body += format_double(row.omega_over_g13);
    if (row.effective) {
      const auto& e = *row.effective;
      for (double v : {e.u_b, e.u_c, e.u_bc, e.j_bb, e.j_cc, e.j_bc}) body += "," + format_double(v);
    } else {
      for (int i = 0; i < 6; ++i) body += "," + nan;
    }
    body += "," + format_double(row.mu_gap);
    body += std::string(",") + (row.effective && row.effective->pair_conv_active ? "1" : "0");
    body += std::string(",") + (row.valid ? "1" : "0");
    body += std::string(",") + (row.effective ? "0" : "1");
    body += "," + join(row.failed_conditions, "|") + "\n";
  }
  out.write("sweep_omega.csv", body);
}

inline void cmd_evolve(Context& ctx) {
  const auto p = read_params(ctx.cfg);
  const auto lattice = read_lattice(ctx.cfg);
  const auto placements = read_placements(ctx.cfg, lattice.n_sites);
  const bool full = ctx.cfg.get_choice("model.kind", "full", {"full", "effective"}) == "full";
  const long cap = ctx.cfg.get_int("model.max_excitations", 0);
  const bool eq6 = ctx.cfg.get_bool("model.include_eq6", true);
  const std::string pc = ctx.cfg.get_choice("model.pair_conversion", "auto", {"auto", "on", "off"});
  const double t_max = ctx.cfg.get_double("time.t_max", 600.0);
  const long samples = ctx.cfg.get_int("time.samples", 600);
  const auto prop = read_propagator(ctx.cfg);
  ctx.cfg.reject_unknown();
  p.validate();
  if (samples < 1) throw ConfigError("time.samples must be >= 1");
  const int k = cap > 0 ? static_cast<int>(cap) : static_cast<int>(placements.size());

  models::ModelSpec spec;
  if (full) {
    spec = models::FullModelSpec{p, lattice, k};
  } else {
    const auto e = params::map_effective(p);
    const bool with_pc = pc == "on" || (pc == "auto" && e.pair_conv_active);
    spec = models::EffectiveModelSpec{e, lattice, k, eq6, with_pc};
  }
  const OutputFiles out(ctx, "evolve");
  out.write_resolved_config();
  const models::Model model(spec);
  const auto h = models::build_hamiltonian(model);
  const auto psi0 = models::prepare_state(model, placements);
  std::vector<evolve::Observable> obs;
  for (int r = 0; r < lattice.n_sites; ++r) {
    auto o = evolve::observables_bc(model, r);
    obs.insert(obs.end(), o.begin(), o.end());
  }
  obs.push_back({"charge", models::conserved_charge(model)});
  obs.push_back({"energy", h});
  auto ts = evolve::evolve(h, psi0, evolve::uniform_times(t_max, static_cast<int>(samples)), obs, prop);
  for (int r = 0; r < lattice.n_sites; ++r) evolve::add_fluctuations(ts, r);

  std::vector<std::string> cols;
  for (int r = 0; r < lattice.n_sites; ++r)
    for (const char* o : sweep::kComparedObservables) cols.push_back(evolve::site_label(o, r));
  cols.push_back("charge");
  cols.push_back("energy");
  std::string body = "# model " + std::string(full ? "full" : "effective") + " dim " + std::to_string(model.dim()) + "\n";
  body += "time,norm," + join(cols, ",") + "\n";
  for (std::size_t i = 0; i < ts.size(); ++i) {
    body += format_double(ts.times()[i]) + "," + format_double(ts.norms()[i]);
    for (const auto& c : cols) body += "," + format_double(ts.value(i, c));
    body += "\n";
  }
  out.write("evolve.csv", body);
}

inline void cmd_compare(Context& ctx) {
  const auto p = read_params(ctx.cfg);
  const auto lattice = read_lattice(ctx.cfg);
  const auto placements = read_placements(ctx.cfg, lattice.n_sites);
  sweep::CompareOptions opt;
  opt.max_excitations = static_cast<int>(ctx.cfg.get_int("model.max_excitations", 0));
  opt.include_eq6 = ctx.cfg.get_bool("model.include_eq6", true);
  const std::string pc = ctx.cfg.get_choice("model.pair_conversion", "auto", {"auto", "on", "off"});
  opt.pair_conversion = pc == "auto" ? sweep::PairConversion::automatic
                        : pc == "on" ? sweep::PairConversion::on
                                     : sweep::PairConversion::off;
  const double t_max = ctx.cfg.get_double("time.t_max", 600.0);
  const long samples = ctx.cfg.get_int("time.samples", 600);
  opt.propagator = read_propagator(ctx.cfg);
  ctx.cfg.reject_unknown();
  p.validate();
  if (samples < 1) throw ConfigError("time.samples must be >= 1");
  opt.threads = std::min(2u, resolve_threads(ctx.threads));
  const OutputFiles out(ctx, "compare");
  out.write_resolved_config();
  const auto r = sweep::compare_full_vs_effective(p, lattice, placements, t_max, static_cast<int>(samples), opt);

  std::vector<std::string> cols;
  for (int c = 0; c < lattice.n_sites; ++c)
    for (const char* o : sweep::kComparedObservables)
      for (const char* which : {"full", "effective", "diff"})
        cols.push_back(std::string(which) + "_" + evolve::site_label(o, c));
  std::string body = "time," + join(cols, ",") + "\n";
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    body += format_double(r.times[i]);
    for (const auto& cav : r.cavities)
      for (std::size_t k = 0; k < 4; ++k)
        for (const auto* series : {&cav.full[k], &cav.effective[k], &cav.diff[k]}) body += "," + format_double((*series)[i]);
    body += "\n";
  }
  out.write("compare.csv", body);

  std::string summary;
  std::string line = "max |full - effective|:";
  for (std::size_t c = 0; c < r.cavities.size(); ++c) {
    for (std::size_t k = 0; k < 4; ++k) {
      const std::string key = evolve::site_label(sweep::kComparedObservables[k], static_cast<int>(c));
      summary += kv("max_abs_diff." + key, r.cavities[c].max_abs_diff[k]);
      line += " " + key + "=" + format_double(r.cavities[c].max_abs_diff[k]);
    }
  }
  summary += kv("max_abs_diff.overall", r.max_abs_diff());
  summary += kv("full.charge_drift", r.full_charge_drift) + kv("effective.charge_drift", r.effective_charge_drift) +
             kv("full.norm_drift", r.full_norm_drift) + kv("effective.norm_drift", r.effective_norm_drift) +
             kv("full.energy_drift", r.full_energy_drift) + kv("effective.energy_drift", r.effective_energy_drift) +
             kv_bool("validity_pass", r.validity_pass) + kv_bool("pair_conversion_included", r.pair_conversion_included);
  out.write("compare_summary.txt", summary);
  if (!r.validity_pass) *ctx.log << "warning: validity conditions fail for these parameters\n";
  *ctx.log << line << "\n";
}

inline params::RatioObjective parse_objective(const std::string& s) {
  using params::RatioObjective;
  for (auto o : {RatioObjective::u_b_over_gamma_b, RatioObjective::u_c_over_gamma_c, RatioObjective::u_bc_over_max_gamma})
    if (s == params::to_string(o)) return o;
  throw ConfigError("decay.objectives: unknown objective '" + s + "'");
}

inline void cmd_decay_ratios(Context& ctx) {
  const auto p = read_params(ctx.cfg);
  const auto names = split(ctx.cfg.get_string("decay.objectives", "u_b_over_gamma_b,u_c_over_gamma_c"), ',');
  const double lo = ctx.cfg.get_double("decay.big_delta_min", -100.0);
  const double hi = ctx.cfg.get_double("decay.big_delta_max", -1e-3);
  const int occ = static_cast<int>(ctx.cfg.get_int("decay.occupation", 2));
  const int grid = static_cast<int>(ctx.cfg.get_int("decay.grid", 4001));
  const bool info = ctx.cfg.get_bool("decay.informational", true);
  ctx.cfg.reject_unknown();
  p.validate();
  if (!(hi > lo)) throw ConfigError("decay.big_delta_max must exceed decay.big_delta_min");
  if (occ < 0) throw ConfigError("decay.occupation must be >= 0");
  if (grid < 3) throw ConfigError("decay.grid must be >= 3");
  if (names.empty()) throw ConfigError("decay.objectives is empty");
  std::vector<params::RatioObjective> objectives;
  for (const auto& n : names) objectives.push_back(parse_objective(n));
  const OutputFiles out(ctx, "decay-ratios");
  out.write_resolved_config();

  std::string body = "setting,objective,best_big_delta,best_ratio,zeta,ratio_over_zeta,evaluations,note\n";
  auto row = [&](const std::string& setting, const params::RatioOptimum& r) {
    body += setting + "," + params::to_string(r.objective) + "," + format_double(r.best_big_delta) + "," +
            format_double(r.best_ratio) + "," + format_double(r.zeta) + "," + format_double(r.ratio_over_zeta) + "," +
            std::to_string(r.evaluations) + ",\n";
  };
  const params::Interval bounds{lo, hi};
  for (auto o : objectives) row("configured", params::optimize_ratio(p, o, bounds, occ, grid));
  if (info) {
    // Informational settings; failures are recorded, not fatal.
    const double g = p.collective_g();
    const std::vector<std::pair<std::string, params::PhysicalParams>> extra = {
        {"single_component_limit", params::single_component_limit(p)},
        {"omega_10g", [&] { auto q = p; q.omega = 10.0 * g; return q; }()},
        {"omega_g_over_10", [&] { auto q = p; q.omega = 0.1 * g; return q; }()}};
    for (const auto& [name, q] : extra) {
      for (auto o : objectives) {
        try {
          row(name, params::optimize_ratio(q, o, bounds, occ, grid));
        } catch (const NumericalError& e) {
          body += name + "," + params::to_string(o) + ",nan,nan," + format_double(params::cooperativity(q)) +
                  ",nan,0," + e.kind() + "\n";
        }
      }
    }
  }
  out.write("decay_ratios.csv", body);
}

inline void cmd_crossover(Context& ctx) {
  const auto p = read_params(ctx.cfg);
  const double lo = ctx.cfg.get_double("crossover.omega_min", 1.0);
  const double hi = ctx.cfg.get_double("crossover.omega_max", 1000.0);
  ctx.cfg.reject_unknown();
  p.validate();
  if (!(lo > 0.0 && hi > lo)) throw ConfigError("crossover bracket needs 0 < omega_min < omega_max");
  const OutputFiles out(ctx, "crossover");
  out.write_resolved_config();
  const auto r = params::crossover_region(p, {lo * p.g13, hi * p.g13});
  const double g = p.collective_g();
  out.write("crossover.txt", kv("omega_low", r.omega_low) + kv("omega_high", r.omega_high) +
                                 kv("omega_low_over_g", r.omega_low / g) + kv("omega_high_over_g", r.omega_high / g) +
                                 kv_bool("clipped_low", r.clipped_low) + kv_bool("clipped_high", r.clipped_high));
  *ctx.log << "crossover: " << format_double(r.omega_low / g) << " g .. " << format_double(r.omega_high / g) << " g\n";
}

/// measure.input = "nb,nc:re[,im]; ..." (one term per polariton Fock state).
inline std::vector<measure::PolaritonAmplitude> parse_input(const std::string& s) {
  std::vector<measure::PolaritonAmplitude> out;
  for (const auto& term : split(s, ';')) {
    const auto colon = term.find(':');
    const auto occ = split(term.substr(0, colon), ',');
    if (occ.size() != 2) throw ConfigError("measure.input: expected 'nb,nc[:amplitude]', got '" + term + "'");
    measure::PolaritonAmplitude a;
    a.n_b = parse_index(occ[0], "measure.input");
    a.n_c = parse_index(occ[1], "measure.input");
    if (colon != std::string::npos) {
      const auto amp = split(term.substr(colon + 1), ',');
      if (amp.empty() || amp.size() > 2) throw ConfigError("measure.input: bad amplitude in '" + term + "'");
      a.amplitude = {parse_number(amp[0], "measure.input"), amp.size() == 2 ? parse_number(amp[1], "measure.input") : 0.0};
    }
    out.push_back(a);
  }
  if (out.empty()) throw ConfigError("measure.input is empty");
  return out;
}

inline void cmd_measure_protocol(Context& ctx) {
  const auto p = read_params(ctx.cfg);
  const int n_atoms = static_cast<int>(ctx.cfg.get_int("measure.n_atoms", 1));
  const int photon_cap = static_cast<int>(ctx.cfg.get_int("measure.photon_cap", 3));
  const double ensemble = ctx.cfg.get_double("measure.ensemble_size", 0.0);
  const auto input = parse_input(ctx.cfg.get_string("measure.input", "1,0:1"));
  const bool species_b = ctx.cfg.get_choice("measure.species", "b", {"b", "c"}) == "b";
  measure::ProtocolSpec spec;
  spec.pulse.lambda = ctx.cfg.get_double("measure.lambda", 1000.0);
  spec.pulse.delta_lambda = ctx.cfg.get_double("measure.delta_lambda", 1.0e5);
  spec.pulse.duration = ctx.cfg.get_double("measure.pulse_duration", 0.0);
  spec.pulse.calibrate = ctx.cfg.get_bool("measure.calibrate", true);
  spec.stirap.theta0_sign = species_b ? +1 : -1;
  spec.stirap.ramp_shape =
      ctx.cfg.get_choice("measure.ramp_shape", "cosine", {"cosine", "linear"}) == "cosine" ? measure::RampShape::cosine
                                                                                         : measure::RampShape::linear;
  spec.stirap.ramp_duration = ctx.cfg.get_double("measure.ramp_duration", 1.0);
  spec.stirap_tolerance = ctx.cfg.get_double("measure.stirap_tolerance", 1e-8);
  const std::string ladder_text = ctx.cfg.get_string("measure.ramp_ladder", "");
  ctx.cfg.reject_unknown();
  p.validate();
  spec.stirap.omega = p.omega;
  spec.stirap.validate();
  if (!(spec.stirap_tolerance > 0.0)) throw ConfigError("measure.stirap_tolerance must be positive");
  std::vector<double> ladder;
  for (const auto& s : split(ladder_text, ',')) ladder.push_back(parse_number(s, "measure.ramp_ladder"));

  const OutputFiles out(ctx, "measure-protocol");
  out.write_resolved_config();
  const auto sys = measure::prepare_polariton_state(measure::AtomCavityExact(n_atoms, photon_cap, ensemble), p, input);
  const auto ideal = measure::ideal_input_statistics(input, species_b);
  const auto r = measure::run_protocol(sys, p, spec);
  const double fid = measure::classical_fidelity(r.distribution, ideal);

  std::string csv = "n,measured,ideal\n";
  for (std::size_t n = 0; n < std::max(r.distribution.size(), ideal.size()); ++n) {
    const double m = n < r.distribution.size() ? r.distribution[n] : 0.0;
    const double i = n < ideal.size() ? ideal[n] : 0.0;
    csv += std::to_string(n) + "," + format_double(m) + "," + format_double(i) + "\n";
  }
  out.write("measure_protocol.csv", csv);

  std::string summary = kv("species", std::string(species_b ? "b" : "c")) +
                        kv("theta0_sign", std::to_string(spec.stirap.theta0_sign)) + kv("pulse.seed", r.pulse.seed) +
                        kv("pulse.duration", r.pulse.duration) + kv("pulse.fidelity", r.pulse.fidelity) +
                        kv("stirap.steps", std::to_string(r.stirap_steps)) + kv_bool("stirap.converged", r.stirap_converged) +
                        kv("total_duration", r.total_duration) + kv("classical_fidelity", fid) +
                        kv("max_norm_error", r.max_norm_error);
  try {
    const double ts = measure::dynamics_timescale(params::map_effective(p));
    summary += kv("dynamics_timescale", ts) + kv("duration_over_timescale", r.total_duration / ts);
  } catch (const DegenerateDetuning&) {
    summary += kv("dynamics_timescale", std::string("nan")) + kv("duration_over_timescale", std::string("nan"));
  }
  out.write("measure_protocol.txt", summary);
  *ctx.log << "classical fidelity " << format_double(fid) << ", protocol time " << format_double(r.total_duration) << "\n";

  if (!ladder.empty()) {
    const auto fids = measure::ramp_ladder(sys, p, spec, ideal, ladder, resolve_threads(ctx.threads));
    std::string l = "ramp_duration,classical_fidelity\n";
    for (std::size_t i = 0; i < ladder.size(); ++i) l += format_double(ladder[i]) + "," + format_double(fids[i]) + "\n";
    out.write("measure_ladder.csv", l);
  }
}

// ---------------------------------------------------------------------------
// Entry point

/// Runs the program with `args` (args[0] is the program name) and returns
/// the exit code: 0 success, 2 usage/config error, 3 numerical failure.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"polabh: polariton Bose-Hubbard parameter mapping and simulation"};
  app.set_version_flag("--version", POLABH_VERSION);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  unsigned threads = 0;
  std::vector<std::string> overrides;

  using Handler = void (*)(Context&);
  const std::vector<std::tuple<std::string, std::string, Handler>> commands = {
      {"map-params", "effective parameters and validity report", cmd_map_params},
      {"sweep-omega", "effective parameters along an Omega grid", cmd_sweep_omega},
      {"evolve", "time evolution of one model", cmd_evolve},
      {"compare", "full vs effective dynamics", cmd_compare},
      {"decay-ratios", "optimal interaction-to-loss ratios", cmd_decay_ratios},
      {"crossover", "Omega window where tunneling mixes the species", cmd_crossover},
      {"measure-protocol", "species-selective readout simulation", cmd_measure_protocol}};
  std::vector<CLI::App*> subs;
  for (const auto& [name, help, fn] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "run configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", threads, "worker threads (0 = auto)");
    sub->add_option("--set", overrides, "override a config key (key=value)");
    subs.push_back(sub);
  }

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    Context ctx;
    ctx.cfg = config_path.empty() ? RunConfig{} : RunConfig::load(config_path);
    for (const auto& o : overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + o + "'");
      ctx.cfg.set(config::trim(o.substr(0, eq)), config::trim(o.substr(eq + 1)));
    }
    ctx.out_dir = out_dir;
    ctx.threads = threads;
    ctx.log = &out;
    for (std::size_t i = 0; i < subs.size(); ++i)
      if (subs[i]->parsed()) std::get<2>(commands[i])(ctx);
    return 0;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "error: ConfigError: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace polabh::cli

#endif  // POLABH_CLI_HPP
