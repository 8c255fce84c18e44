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


#ifndef POLABH_PARAMS_HPP
#define POLABH_PARAMS_HPP

// Microscopic atom-cavity parameters, the closed-form map onto the effective
// two-component Bose-Hubbard coefficients, validity inequalities, decay rates,
// interaction-to-decay optimization and the b/c crossover window.
//
// Units: every energy and rate is expressed in units of g13, times in 1/g13,
// hbar = 1.

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "polabh/errors.hpp"
#include "polabh/scalar_search.hpp"

namespace polabh::params {

using numeric::Interval;

struct PhysicalParams {
  double g13 = 1.0;
  double g24 = 1.0;
  int n_atoms = 1;
  double delta = 0.0;
  double big_delta = 0.0;
  double epsilon = 0.0;
  double omega = 0.0;
  double alpha = 0.0;
  double kappa = 0.0;
  double gamma3 = 0.0;
  double gamma4 = 0.0;

  void validate() const {
    if (!(g13 > 0.0)) throw ConfigError("g13 must be positive");
    if (n_atoms < 1) throw ConfigError("n_atoms must be >= 1");
    if (omega < 0.0) throw ConfigError("omega must be >= 0");
    if (kappa < 0.0 || gamma3 < 0.0 || gamma4 < 0.0)
      throw ConfigError("decay rates kappa, gamma3, gamma4 must be >= 0");
    for (double v : {g13, g24, delta, big_delta, epsilon, omega, alpha, kappa, gamma3, gamma4})
      if (!std::isfinite(v)) throw ConfigError("parameters must be finite");
  }

  /// Collective coupling g = sqrt(N) g13.
  double collective_g() const { return std::sqrt(static_cast<double>(n_atoms)) * g13; }
};

/// Parameter-range example: g24 = g13, N = 1000, Delta = -g13/20,
/// delta = 2000 sqrt(N) g13, alpha = g13/10. Omega is the sweep variable.
inline PhysicalParams fig2_params(double omega) {
  PhysicalParams p;
  p.g13 = 1.0;
  p.g24 = 1.0;
  p.n_atoms = 1000;
  p.big_delta = -1.0 / 20.0;
  p.delta = 2000.0 * std::sqrt(1000.0);
  p.alpha = 0.1;
  p.omega = omega;
  return p;
}

/// Three-cavity dynamics example: g24 = g13, epsilon = 0, N = 1000,
/// Omega = 1.5 sqrt(N) g13, delta = 1e4, Delta = -46, alpha = -2.2e-3.
inline PhysicalParams fig3_params() {
  PhysicalParams p;
  p.g13 = 1.0;
  p.g24 = 1.0;
  p.n_atoms = 1000;
  p.epsilon = 0.0;
  p.omega = 1.5 * std::sqrt(1000.0);
  p.delta = 1.0e4;
  p.big_delta = -46.0;
  p.alpha = -2.2e-3;
  return p;
}

struct DerivedScales {
  double g = 0.0;
  double b_scale = 0.0;
  double a_scale = 0.0;
  double mu_0 = 0.0;
  double mu_plus = 0.0;
  double mu_minus = 0.0;
  double mu_plus_approx = 0.0;
  double mu_minus_approx = 0.0;

  double b_squared() const { return b_scale * b_scale; }
};

inline DerivedScales derive_scales(const PhysicalParams& p) {
  DerivedScales s;
  s.g = p.collective_g();
  const double b2 = s.g * s.g + p.omega * p.omega;
  s.b_scale = std::sqrt(b2);
  s.a_scale = std::sqrt(4.0 * b2 + p.delta * p.delta);
  s.mu_0 = 0.0;
  // (delta +- A)/2, evaluated without cancellation: mu_+ mu_- = -B^2.
  if (p.delta >= 0.0) {
    s.mu_plus = 0.5 * (p.delta + s.a_scale);
    s.mu_minus = -b2 / s.mu_plus;
  } else {
    s.mu_minus = 0.5 * (p.delta - s.a_scale);
    s.mu_plus = -b2 / s.mu_minus;
  }
  s.mu_minus_approx = -b2 / p.delta;
  s.mu_plus_approx = p.delta + b2 / p.delta;
  return s;
}

struct EffectiveParams {
  double mu_b = 0.0;
  double mu_c = 0.0;
  double u_b = 0.0;
  double u_c = 0.0;
  double u_bc = 0.0;
  double j_bb = 0.0;
  double j_cc = 0.0;
  double j_bc = 0.0;
  double eps_b = 0.0;
  double eps_c = 0.0;
  double eps_bc = 0.0;
  double pair_conv = 0.0;
  bool pair_conv_active = false;
};

namespace detail {

inline void require_nonzero(double value, double scale, const char* what) {
  if (value == 0.0 || std::abs(value) <= 1e-14 * scale || !std::isfinite(value))
    throw DegenerateDetuning(std::string(what) + " vanishes (resonance; perturbation theory breaks down)");
}

}  // namespace detail

/// Closed-form effective coefficients. Tunneling follows the photon content of
/// each species: b carries Omega/B of the photon, c carries g/B.
inline EffectiveParams map_effective(const PhysicalParams& p) {
  const DerivedScales s = derive_scales(p);
  const double g = s.g;
  const double w = p.omega;
  const double b2 = s.b_squared();
  const double b4 = b2 * b2;

  detail::require_nonzero(p.delta, std::abs(p.delta) + b2, "delta");
  const double shift = b2 / p.delta;
  const double scale = std::abs(p.big_delta) + std::abs(shift);
  detail::require_nonzero(p.big_delta, scale, "Delta");
  detail::require_nonzero(p.big_delta + 2.0 * shift, scale, "Delta + 2 B^2/delta");
  detail::require_nonzero(p.big_delta + shift, scale, "Delta + B^2/delta");

  const double g24sq = p.g24 * p.g24;
  const double gw2 = g * g * w * w;
  const double split = g * g - w * w;

  EffectiveParams e;
  e.mu_b = 0.0;
  e.mu_c = -shift;
  e.u_b = -g24sq * gw2 / b4 / p.big_delta;
  e.u_c = -g24sq * gw2 / b4 / (p.big_delta + 2.0 * shift);
  e.u_bc = -g24sq * split * split / b4 / (p.big_delta + shift);
  e.j_bb = p.alpha * w * w / b2;
  e.j_cc = p.alpha * g * g / b2;
  e.j_bc = p.alpha * g * w / b2;
  e.eps_b = p.epsilon * g * g / b2;
  e.eps_c = p.epsilon * w * w / b2;
  e.eps_bc = p.epsilon * g * w / b2;
  e.pair_conv = -g24sq * gw2 / b4 / p.big_delta;
  e.pair_conv_active = std::abs(p.g24 * g * w / b2) > std::abs(shift);
  return e;
}

// ---------------------------------------------------------------------------
// Validity

struct ValidityCondition {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool pass = false;
  // Advisory conditions are reported but do not enter overall_pass.
  bool advisory = false;
};

struct ValidityReport {
  std::vector<ValidityCondition> conditions;
  bool overall_pass = false;
  double threshold = 0.1;

  const ValidityCondition& at(const std::string& name) const {
    for (const auto& c : conditions)
      if (c.name == name) return c;
    throw std::out_of_range("no validity condition named " + name);
  }
};

inline constexpr std::array<const char*, 9> kValidityConditionNames = {
    "rwa_g24",      "rwa_eps",       "rwa_Delta",  "pert_level4",     "shift_vs_splitting",
    "eps_mixing",   "tunnel_mixing", "dispersive", "tunnel_vs_delta"};

/// Evaluates every "lhs << rhs" inequality behind the effective model. Never
/// throws on physics: degenerate right-hand sides give an infinite ratio.
///
/// shift_vs_splitting is advisory: when it fails the pair-conversion term
/// (pair_conv_active) takes over, so the effective description stays valid.
inline ValidityReport check_validity(const PhysicalParams& p, double threshold = 0.1) {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw std::invalid_argument("validity threshold must lie in (0, 1)");

  const DerivedScales s = derive_scales(p);
  const double g = s.g;
  const double w = p.omega;
  const double b2 = s.b_squared();
  const double splitting = p.delta != 0.0 ? std::abs(b2 / p.delta)
                                          : std::numeric_limits<double>::infinity();
  const double mu_c = p.delta != 0.0 ? -b2 / p.delta : 0.0;
  const double rwa_gap = std::min(std::abs(s.mu_plus), std::abs(s.mu_plus - mu_c));
  const double j_bc = p.alpha * g * w / b2;

  ValidityReport r;
  r.threshold = threshold;
  auto add = [&](const char* name, double lhs, double rhs, bool advisory = false) {
    ValidityCondition c;
    c.name = name;
    c.lhs = lhs;
    c.rhs = rhs;
    if (rhs > 0.0)
      c.ratio = lhs / rhs;
    else
      c.ratio = lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    c.pass = c.ratio < threshold;
    c.advisory = advisory;
    r.conditions.push_back(c);
  };

  add("rwa_g24", std::abs(p.g24), rwa_gap);
  add("rwa_eps", std::abs(p.epsilon), rwa_gap);
  add("rwa_Delta", std::abs(p.big_delta), rwa_gap);
  add("pert_level4",
      std::max(std::abs(p.g24 * g * w / b2), std::abs(p.g24 * (g * g - w * w) / b2)),
      std::abs(p.big_delta));
  add("shift_vs_splitting", std::abs(p.g24 * g * w / b2), splitting, /*advisory=*/true);
  add("eps_mixing", std::abs(p.epsilon * g * w / b2), splitting);
  add("tunnel_mixing", std::abs(j_bc), splitting);
  add("dispersive", std::max(w, g), std::abs(p.delta));
  add("tunnel_vs_delta", std::abs(p.alpha), std::abs(p.delta));

  r.overall_pass = true;
  for (const auto& c : r.conditions)
    if (!c.advisory && !c.pass) r.overall_pass = false;
  return r;
}

// ---------------------------------------------------------------------------
// Decay

struct DecayComponents {
  double photonic = 0.0;
  double level3 = 0.0;
  double level4 = 0.0;

  double total() const { return photonic + level3 + level4; }
};

/// Effective loss rates of the two species. The level-4 channel only opens
/// at double or higher occupation of a site.
class DecayRates {
 public:
  explicit DecayRates(const PhysicalParams& p) : p_(p), s_(derive_scales(p)) {}

  DecayComponents components_b(int n_b) const {
    const double b2 = s_.b_squared();
    DecayComponents c;
    c.photonic = p_.omega * p_.omega / b2 * p_.kappa;
    c.level4 = heaviside(n_b - 2) * level4_weight() * p_.gamma4;
    return c;
  }

  DecayComponents components_c(int n_c) const {
    const double b2 = s_.b_squared();
    DecayComponents c;
    c.photonic = s_.g * s_.g / b2 * p_.kappa;
    c.level3 = b2 / (p_.delta * p_.delta) * p_.gamma3;
    c.level4 = heaviside(n_c - 2) * level4_weight() * p_.gamma4;
    return c;
  }

  double gamma_b(int n_b) const { return components_b(n_b).total(); }
  double gamma_c(int n_c) const { return components_c(n_c).total(); }

 private:
  static double heaviside(int x) { return x >= 0 ? 1.0 : 0.0; }

  double level4_weight() const {
    const double b2 = s_.b_squared();
    const double g = s_.g;
    return p_.g24 * p_.g24 * g * g * p_.omega * p_.omega /
           (p_.big_delta * p_.big_delta * b2 * b2);
  }

  PhysicalParams p_;
  DerivedScales s_;
};

inline std::pair<double, double> decay_rates(const PhysicalParams& p, int n_b, int n_c) {
  if (n_b < 0 || n_c < 0) throw std::invalid_argument("occupations must be non-negative");
  const DecayRates rates(p);
  return {rates.gamma_b(n_b), rates.gamma_c(n_c)};
}

/// Cooperativity zeta = g13 / sqrt(kappa gamma4).
inline double cooperativity(const PhysicalParams& p) {
  return p.g13 / std::sqrt(p.kappa * p.gamma4);
}

// ---------------------------------------------------------------------------
// Interaction-to-decay optimization over Delta

enum class RatioObjective { u_b_over_gamma_b, u_c_over_gamma_c, u_bc_over_max_gamma };

inline const char* to_string(RatioObjective o) {
  switch (o) {
    case RatioObjective::u_b_over_gamma_b: return "u_b_over_gamma_b";
    case RatioObjective::u_c_over_gamma_c: return "u_c_over_gamma_c";
    case RatioObjective::u_bc_over_max_gamma: return "u_bc_over_max_gamma";
  }
  return "?";
}

struct RatioOptimum {
  RatioObjective objective = RatioObjective::u_b_over_gamma_b;
  double best_big_delta = 0.0;
  double best_ratio = 0.0;
  double zeta = 0.0;
  double ratio_over_zeta = 0.0;
  int evaluations = 0;
};

/// |objective| at a given Delta, NaN at a degenerate detuning.
inline double ratio_objective(const PhysicalParams& base, RatioObjective objective, double big_delta,
                              int occupation = 2) {
  PhysicalParams p = base;
  p.big_delta = big_delta;
  EffectiveParams e;
  try {
    e = map_effective(p);
  } catch (const DegenerateDetuning&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  const DecayRates rates(p);
  switch (objective) {
    case RatioObjective::u_b_over_gamma_b:
      return std::abs(e.u_b) / rates.gamma_b(occupation);
    case RatioObjective::u_c_over_gamma_c:
      return std::abs(e.u_c) / rates.gamma_c(occupation);
    case RatioObjective::u_bc_over_max_gamma:
      return std::abs(e.u_bc) / std::max(rates.gamma_b(occupation), rates.gamma_c(occupation));
  }
  return std::numeric_limits<double>::quiet_NaN();
}

/// Maximizes |U/Gamma| over Delta inside `bounds` by a grid scan followed by
/// golden-section refinement. Throws NoInteriorMaximum if the best value sits
/// on a bound.
inline RatioOptimum optimize_ratio(const PhysicalParams& p, RatioObjective objective, Interval bounds,
                                   int occupation = 2, int grid_points = 4001,
                                   double rel_tol = 1e-9) {
  if (!(bounds.hi > bounds.lo)) throw std::invalid_argument("optimize_ratio: empty bounds");
  const bool log_grid = bounds.lo * bounds.hi > 0.0;
  const double sign = bounds.lo < 0.0 ? -1.0 : 1.0;
  const double a_lo = log_grid ? std::log(std::min(std::abs(bounds.lo), std::abs(bounds.hi))) : bounds.lo;
  const double a_hi = log_grid ? std::log(std::max(std::abs(bounds.lo), std::abs(bounds.hi))) : bounds.hi;
  auto to_delta = [&](double a) { return log_grid ? sign * std::exp(a) : a; };
  auto f = [&](double a) {
    const double v = ratio_objective(p, objective, to_delta(a), occupation);
    return std::isfinite(v) ? v : -std::numeric_limits<double>::infinity();
  };

  int best = -1;
  double best_val = -std::numeric_limits<double>::infinity();
  const double step = (a_hi - a_lo) / (grid_points - 1);
  for (int i = 0; i < grid_points; ++i) {
    const double v = f(a_lo + i * step);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  if (best < 0 || !std::isfinite(best_val))
    throw NoInteriorMaximum(std::string(to_string(objective)) + " is not finite anywhere in the bounds");
  if (best == 0 || best == grid_points - 1)
    throw NoInteriorMaximum(std::string(to_string(objective)) +
                            " is maximal on a bound of the Delta interval");

  // On the log grid an absolute tolerance in log|Delta| is a relative one in Delta.
  const double floor = log_grid ? 1.0 : std::max(std::abs(bounds.lo), std::abs(bounds.hi));
  const auto opt = numeric::golden_section_maximize(f, a_lo + (best - 1) * step,
                                                    a_lo + (best + 1) * step, rel_tol, floor);
  RatioOptimum r;
  r.objective = objective;
  r.best_big_delta = to_delta(opt.x);
  r.best_ratio = opt.value;
  r.zeta = cooperativity(p);
  r.ratio_over_zeta = r.best_ratio / r.zeta;
  r.evaluations = grid_points + opt.evaluations;
  return r;
}

/// Parameters approaching the one-component limit Omega -> 0 (g^2/B^2 -> 1).
/// The U_b/Gamma_b ratio is finite in that limit although U_b itself vanishes.
inline PhysicalParams single_component_limit(PhysicalParams p, double omega_over_g = 1e-4) {
  p.omega = omega_over_g * p.collective_g();
  return p;
}

// ---------------------------------------------------------------------------
// b <-> c crossover window

struct CrossoverRegion {
  double omega_low = 0.0;
  double omega_high = 0.0;
  // True when the window extends to (and was clipped at) a bracket end.
  bool clipped_low = false;
  bool clipped_high = false;
};

/// Sign of B^4 - |alpha delta| g Omega; negative inside the window where
/// |mu_c - mu_b| < |J_bc| to first order in 1/delta.
inline double crossover_indicator(const PhysicalParams& p, double omega) {
  const double g = p.collective_g();
  const double b2 = g * g + omega * omega;
  return b2 * b2 - std::abs(p.alpha * p.delta) * g * omega;
}

/// Range of Omega in which tunneling converts b into c polaritons. Roots are
/// bracketed on a log grid and refined by bisection.
inline CrossoverRegion crossover_region(const PhysicalParams& p, Interval omega_bracket,
                                        double rel_tol = 1e-9, int grid_points = 4096) {
  if (!(omega_bracket.lo > 0.0 && omega_bracket.hi > omega_bracket.lo))
    throw std::invalid_argument("crossover_region: bracket must be positive and non-empty");
  auto f = [&](double omega) { return crossover_indicator(p, omega); };
  const double l0 = std::log(omega_bracket.lo);
  const double l1 = std::log(omega_bracket.hi);
  std::vector<double> xs(grid_points);
  for (int i = 0; i < grid_points; ++i)
    xs[i] = i == grid_points - 1 ? omega_bracket.hi : std::exp(l0 + (l1 - l0) * i / (grid_points - 1));

  int first = -1;
  int last = -1;
  for (int i = 0; i < grid_points; ++i) {
    if (f(xs[i]) < 0.0) {
      if (first < 0) first = i;
      last = i;
    }
  }
  if (first < 0)
    throw NoCrossover("|mu_c - mu_b| >= |J_bc| everywhere in the Omega bracket");

  CrossoverRegion r;
  if (first == 0) {
    r.omega_low = xs[0];
    r.clipped_low = true;
  } else {
    r.omega_low = numeric::bisect_root(f, xs[first - 1], xs[first], rel_tol);
  }
  if (last == grid_points - 1) {
    r.omega_high = xs.back();
    r.clipped_high = true;
  } else {
    r.omega_high = numeric::bisect_root(f, xs[last], xs[last + 1], rel_tol);
  }
  return r;
}

}  // namespace polabh::params

#endif  // POLABH_PARAMS_HPP
