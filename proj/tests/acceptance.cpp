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


// Acceptance suite. Prints one PASS/FAIL line per criterion; exit status is
// non-zero when any selected criterion fails.
//
//   acceptance                 run all criteria
//   acceptance --criterion 2b  run one

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "polabh/evolve.hpp"
#include "polabh/fock.hpp"
#include "polabh/measure.hpp"
#include "polabh/models.hpp"
#include "polabh/params.hpp"
#include "polabh/sweep.hpp"

namespace {

using namespace polabh;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome criterion_1() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int draw = 0; draw < 50; ++draw) {
    params::PhysicalParams p;
    p.g13 = 0.5 + u(rng);
    p.g24 = 2.0 * u(rng);
    p.n_atoms = 1 + static_cast<int>(2000 * u(rng));
    p.omega = 100.0 * u(rng);
    p.delta = (u(rng) < 0.5 ? -1.0 : 1.0) * (1.0 + 1e4 * u(rng));
    p.big_delta = 50.0 * (u(rng) - 0.5);
    const models::Model m(models::FullModelSpec{p, models::LatticeSpec::chain(1), 1});
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(models::build_hamiltonian(m).to_dense(), Eigen::EigenvaluesOnly);
    // Closed form in long double, small root through the product of roots.
    const long double g2 = static_cast<long double>(p.n_atoms) * p.g13 * p.g13;
    const long double b2 = g2 + static_cast<long double>(p.omega) * p.omega;
    const long double a = std::sqrt(4.0L * b2 + static_cast<long double>(p.delta) * p.delta);
    const long double big = p.delta >= 0 ? (p.delta + a) / 2.0L : (p.delta - a) / 2.0L;
    std::vector<double> want{0.0, 0.0, static_cast<double>(big), static_cast<double>(-b2 / big)};
    std::sort(want.begin(), want.end());
    for (int k = 0; k < 4; ++k) {
      const double scale = want[k] == 0.0 ? static_cast<double>(std::sqrt(b2)) : std::abs(want[k]);
      worst = std::max(worst, std::abs(es.eigenvalues()(k) - want[k]) / scale);
    }
  }
  return {worst <= 1e-10, "max relative error " + fmt("%.2e", worst) + " over 50 draws (limit 1e-10)"};
}

std::vector<double> fig2_grid() { return sweep::log_grid(10.0, 1000.0, 200); }

Outcome criterion_2a() {
  const auto p = params::fig2_params(1.0);
  const auto grid = fig2_grid();
  const auto r = sweep::sweep_omega(p, grid);
  const double g = p.collective_g();
  std::size_t cell_g = 0;  // grid[cell_g] <= g < grid[cell_g + 1]
  while (cell_g + 1 < grid.size() && grid[cell_g + 1] <= g) ++cell_g;
  std::vector<std::size_t> flips;
  std::size_t smallest = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (std::abs(r.rows[i].effective->u_bc) < std::abs(r.rows[smallest].effective->u_bc)) smallest = i;
    if (i > 0 && r.rows[i].effective->u_bc * r.rows[i - 1].effective->u_bc < 0.0) flips.push_back(i - 1);
  }
  bool pass = false;
  for (std::size_t f : flips)
    if (f + 1 >= cell_g && f <= cell_g + 1) pass = true;
  std::string detail = "u_bc sign changes in cells:";
  for (std::size_t f : flips) detail += " [" + fmt("%.4g", grid[f]) + ", " + fmt("%.4g", grid[f + 1]) + "]";
  if (flips.empty()) detail += " none";
  detail += "; Omega = g = " + fmt("%.4g", g) + " lies in cell [" + fmt("%.4g", grid[cell_g]) + ", " +
            fmt("%.4g", grid[cell_g + 1]) + "]; min |u_bc| at Omega = " + fmt("%.4g", grid[smallest]) +
            " (double zero at g, no sign change; the flip is the pole Delta + B^2/delta = 0)";
  return {pass, detail};
}

std::vector<double> quartic_roots(double c) {
  // x^4 + 2x^2 - c x + 1 = 0 via companion-matrix eigenvalues.
  Eigen::Matrix4d comp = Eigen::Matrix4d::Zero();
  comp(1, 0) = comp(2, 1) = comp(3, 2) = 1.0;
  comp(0, 3) = -1.0;
  comp(1, 3) = c;
  comp(2, 3) = -2.0;
  Eigen::EigenSolver<Eigen::Matrix4d> es(comp);
  std::vector<double> roots;
  for (int i = 0; i < 4; ++i)
    if (std::abs(es.eigenvalues()(i).imag()) < 1e-9 && es.eigenvalues()(i).real() > 0.0)
      roots.push_back(es.eigenvalues()(i).real());
  std::sort(roots.begin(), roots.end());
  return roots;
}

Outcome criterion_2b() {
  const auto p = params::fig2_params(1.0);
  const double g = p.collective_g();
  const auto r = params::crossover_region(p, {fig2_grid().front() * 0.1, fig2_grid().back()});
  const double lo = r.omega_low / g;
  const double hi = r.omega_high / g;
  const auto oracle = quartic_roots(std::abs(p.alpha * p.delta) / (g * g));
  const bool pinned = oracle.size() == 2 && std::abs(lo / oracle[0] - 1.0) < 1e-6 && std::abs(hi / oracle[1] - 1.0) < 1e-6;
  const bool band = std::abs(lo / 0.16 - 1.0) <= 0.2 && std::abs(hi / 1.6 - 1.0) <= 0.2;
  return {pinned && band, "window " + fmt("%.6f", lo) + " g .. " + fmt("%.6f", hi) + " g; quartic oracle " +
                              (oracle.size() == 2 ? fmt("%.6f", oracle[0]) + " / " + fmt("%.6f", oracle[1]) : "n/a") +
                              "; target 0.16 g / 1.6 g +-20%"};
}

Outcome criterion_2c() {
  const auto p = params::fig2_params(std::sqrt(1000.0));
  const auto e = params::map_effective(p);
  const double ratio = std::abs(e.u_bc) / std::min(std::abs(e.u_b), std::abs(e.u_c));
  return {ratio < 1e-3, "|u_bc| / min(|u_b|, |u_c|) = " + fmt("%.2e", ratio) + " at Omega = g (limit 1e-3)"};
}

Outcome criterion_3() {
  const auto start = std::chrono::steady_clock::now();
  const auto r = sweep::compare_full_vs_effective(params::fig3_params(), models::LatticeSpec::chain(3),
                                                  {{models::Species::b, 0}, {models::Species::b, 1}, {models::Species::c, 2}},
                                                  600.0, 1200);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto& c1 = r.cavities[0].max_abs_diff;
  const double worst = *std::max_element(c1.begin(), c1.end());
  const double drift = std::max(r.full_charge_drift, r.effective_charge_drift);
  const bool pass = worst <= 0.04 && drift <= 1e-8 && secs <= 600.0;
  return {pass, "cavity 1 max |full - eff|: N_b " + fmt("%.4f", c1[0]) + ", N_c " + fmt("%.4f", c1[1]) + ", F_b " +
                    fmt("%.4f", c1[2]) + ", F_c " + fmt("%.4f", c1[3]) + " (limit 0.04); charge drift " +
                    fmt("%.1e", drift) + " (limit 1e-8); " + fmt("%.2f", secs) + " s"};
}

Outcome criterion_4() {
  params::PhysicalParams p;
  p.n_atoms = 4;
  p.g13 = 1.0;
  p.g24 = 1.0;
  p.omega = p.collective_g();
  p.delta = 1e7;
  p.kappa = 0.3;
  p.gamma3 = 0.0;
  p.gamma4 = 0.07;
  const params::Interval bounds{-100.0, -1e-4};
  const auto r = params::optimize_ratio(p, params::RatioObjective::u_b_over_gamma_b, bounds, 2);
  const double target_ratio = 1.0 / (2.0 * std::sqrt(2.0));
  const double target_delta = std::sqrt(p.g13 * p.g13 * p.gamma4 / (2.0 * p.kappa));
  const double err_ratio = std::abs(r.ratio_over_zeta / target_ratio - 1.0);
  const double err_delta = std::abs(std::abs(r.best_big_delta) / target_delta - 1.0);
  const auto s = params::optimize_ratio(params::single_component_limit(p), params::RatioObjective::u_b_over_gamma_b, bounds, 2);
  const double err_single = std::abs(s.ratio_over_zeta / 0.5 - 1.0);
  return {err_ratio <= 0.02 && err_delta <= 0.02 && err_single <= 0.02,
          "U_b/Gamma_b = " + fmt("%.6f", r.ratio_over_zeta) + " zeta (target 0.353553, err " + fmt("%.1e", err_ratio) +
              "); |Delta| = " + fmt("%.6f", std::abs(r.best_big_delta)) + " (target " + fmt("%.6f", target_delta) +
              ", err " + fmt("%.1e", err_delta) + "); single component " + fmt("%.6f", s.ratio_over_zeta) +
              " zeta (err " + fmt("%.1e", err_single) + ")"};
}

Outcome criterion_5() {
  std::vector<std::string> failures;
  // Rank/unrank bijectivity, exhaustive.
  std::size_t states = 0;
  for (const auto& space : {fock::ModeSpace::uniform(6, 8), fock::ModeSpace({1, 1, 1, 2, 1, 1, 1, 2, 1, 1, 1, 2}, 4),
                            fock::ModeSpace({1, 2, 3, 1}, 12, {3, -1, 2, -1})}) {
    const fock::Basis basis(space);
    if (basis.dim() > 10000) failures.push_back("basis too large");
    for (std::size_t i = 0; i < basis.dim(); ++i)
      if (basis.rank(basis.unrank(i)) != i) failures.push_back("rank/unrank");
    states += basis.dim();
  }
  // Hermiticity and conservation laws.
  double herm = 0.0, comm = 0.0;
  const auto p = params::fig3_params();
  const auto lat = models::LatticeSpec::chain(3);
  auto e = params::map_effective(p);
  e.eps_bc = 0.01;  // exercise every term
  std::vector<models::Model> ms;
  ms.emplace_back(models::FullModelSpec{p, lat, 3});
  ms.emplace_back(models::EffectiveModelSpec{e, lat, 3, true, true});
  for (const auto& m : ms) {
    const auto h = models::build_hamiltonian(m);
    herm = std::max(herm, fock::hermiticity_defect(h));
    comm = std::max(comm, fock::commutator(h, models::conserved_charge(m)).max_abs());
  }
  if (herm > 1e-13) failures.push_back("hermiticity");
  if (comm > 1e-13) failures.push_back("commutator");
  // Dense vs Krylov on random 200-dimensional instances.
  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> n(0.0, 1.0);
  double dk = 0.0;
  for (int inst = 0; inst < 20; ++inst) {
    std::vector<fock::Entry> hv, ov;
    for (std::size_t r = 0; r < 200; ++r) {
      hv.push_back({r, r, n(rng)});
      ov.push_back({r, r, n(rng)});
      for (int k = 0; k < 3; ++k) {
        const std::size_t c = rng() % 200;
        const fock::cplx v(n(rng), n(rng));
        hv.push_back({r, c, v});
        hv.push_back({c, r, std::conj(v)});
      }
    }
    const fock::SparseOperator h(200, hv), o(200, ov);
    Eigen::VectorXcd psi(200);
    for (auto& x : psi) x = fock::cplx(n(rng), n(rng));
    psi.normalize();
    const auto times = evolve::uniform_times(4.0, 8);
    evolve::PropagatorConfig kc;
    kc.method = evolve::Method::krylov;
    const auto a = evolve::evolve(h, psi, times, {{"o", o}});
    const auto b = evolve::evolve(h, psi, times, {{"o", o}}, kc);
    for (std::size_t i = 0; i < times.size(); ++i) dk = std::max(dk, std::abs(a.value(i, "o") - b.value(i, "o")));
  }
  if (dk > 1e-8) failures.push_back("dense vs krylov");
  // Norm and energy drift over a full-length run, both backends.
  double drift = 0.0;
  for (auto method : {evolve::Method::dense, evolve::Method::krylov}) {
    const auto& m = ms[0];
    const auto h = models::build_hamiltonian(m);
    const auto psi0 = models::prepare_state(m, {{models::Species::b, 0}, {models::Species::b, 1}, {models::Species::c, 2}});
    evolve::PropagatorConfig cfg;
    cfg.method = method;
    const auto ts = evolve::evolve(h, psi0, evolve::uniform_times(600.0, 120), {{"energy", h}}, cfg);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      drift = std::max(drift, std::abs(ts.norms()[i] - 1.0));
      drift = std::max(drift, std::abs(ts.value(i, "energy") - ts.value(0, "energy")));
    }
  }
  if (drift > 1e-8) failures.push_back("drift");
  std::string detail = std::to_string(states) + " basis states bijective; hermiticity " + fmt("%.1e", herm) +
                       "; [H, N] " + fmt("%.1e", comm) + "; dense vs Krylov " + fmt("%.1e", dk) +
                       "; norm/energy drift " + fmt("%.1e", drift);
  for (const auto& f : failures) detail += "; FAILED " + f;
  return {failures.empty(), detail};
}

Outcome criterion_6() {
  using namespace polabh::measure;
  params::PhysicalParams p;
  p.n_atoms = 1;
  p.omega = 1.0;
  p.delta = 100.0;
  ProtocolSpec spec;
  spec.pulse.lambda = 100.0;
  spec.pulse.delta_lambda = 1.0e4;
  spec.stirap.omega = p.omega;
  const auto b_in = prepare_polariton_state(AtomCavityExact(1), p, {{1, 0, 1.0}});
  const auto c_in = prepare_polariton_state(AtomCavityExact(1), p, {{0, 1, 1.0}});

  // Double the ramp until the readout changes by less than 1e-3.
  double ramp = 5.0, prev = -1.0, p_b = 0.0;
  bool converged = false;
  for (int k = 0; k < 8 && !converged; ++k, ramp *= 2.0) {
    spec.stirap.ramp_duration = ramp;
    spec.stirap.theta0_sign = +1;
    p_b = run_protocol(b_in, p, spec).distribution[1];
    converged = std::abs(p_b - prev) < 1e-3;
    prev = p_b;
  }
  ramp /= 2.0;
  spec.stirap.ramp_duration = ramp;
  spec.stirap.theta0_sign = -1;
  const double p_c = run_protocol(c_in, p, spec).distribution[1];
  const double leak = run_protocol(b_in, p, spec).distribution[1];

  // Lattice-scale timing: one atom with the collective couplings of 1000.
  auto q = params::fig3_params();
  const double timescale = dynamics_timescale(params::map_effective(q));
  ProtocolSpec fast;
  fast.stirap.omega = q.omega;
  fast.stirap.ramp_duration = 1.0;
  const auto fast_in = prepare_polariton_state(AtomCavityExact(1, 3, q.n_atoms), q, {{1, 0, 1.0}});
  const auto fr = run_protocol(fast_in, q, fast);
  const double ratio = fr.total_duration / timescale;

  const bool pass = converged && p_b >= 0.99 && p_c >= 0.99 && leak < 0.5 && fr.distribution[1] >= 0.99 && ratio < 1e-2;
  return {pass, "b-selective P(1) = " + fmt("%.5f", p_b) + " at converged ramp " + fmt("%g", ramp) +
                    "; sign-swapped c readout P(1) = " + fmt("%.5f", p_c) + ", b leak " + fmt("%.1e", leak) +
                    "; lattice-scale P(1) = " + fmt("%.5f", fr.distribution[1]) + ", protocol time " +
                    fmt("%.3f", fr.total_duration) + " = " + fmt("%.2e", ratio) + " x 1/max(|J|,|U|) (limit 1e-2)"};
}

struct Criterion {
  const char* id;
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {"1", "single-cavity spectrum", criterion_1},
      {"2a", "u_bc sign change at Omega = g", criterion_2a},
      {"2b", "crossover window", criterion_2b},
      {"2c", "u_bc suppressed at Omega = g", criterion_2c},
      {"3", "full vs effective dynamics", criterion_3},
      {"4", "decay-ratio optimum", criterion_4},
      {"5", "property suites", criterion_5},
      {"6", "measurement protocol", criterion_6}};
  std::string only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) {
      only = argv[++i];
    } else {
      std::fprintf(stderr, "usage: acceptance [--criterion ID]\n");
      return 2;
    }
  }
  int failed = 0, ran = 0;
  for (const auto& c : all) {
    if (!only.empty() && only != c.id) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  [%s] %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str(), secs);
    if (!o.pass) ++failed;
  }
  if (ran == 0) {
    std::fprintf(stderr, "unknown criterion '%s'\n", only.c_str());
    return 2;
  }
  return failed == 0 ? 0 : 1;
}
