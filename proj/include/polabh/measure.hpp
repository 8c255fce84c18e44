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


#ifndef POLABH_MEASURE_HPP
#define POLABH_MEASURE_HPP

// Exact few-atom simulation of the species-selective readout:
//   1. Raman swap of atomic levels 1 <-> 2 (lasers Lambda on 1-3 and 2-3),
//   2. STIRAP with a laser Theta on 1-4, ramped from +-Omega to 0, which maps
//      the selected species onto level-1 excitations,
//   3. a second Raman swap, after which level-2 population is read out.
//
// Hilbert space: (4-level atom)^n_atoms (x) photon Fock space up to
// photon_cap. Atom j's level occupies base-4 digit j (atom 0 most
// significant); the photon number is the fastest index.
//
// `ensemble_size` lets the simulated atoms stand in for a larger ensemble:
// couplings are scaled so the collective coupling is sqrt(ensemble_size) g13.
// In the single-excitation manifold this is exact.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "polabh/errors.hpp"
#include "polabh/parallel.hpp"
#include "polabh/params.hpp"
#include "polabh/scalar_search.hpp"

namespace polabh::measure {

using cplx = std::complex<double>;
using params::PhysicalParams;

class AtomCavityExact {
 public:
  AtomCavityExact(int n_atoms, int photon_cap = 3, double ensemble_size = 0.0)
      : n_atoms_(n_atoms), photon_cap_(photon_cap), ensemble_size_(ensemble_size > 0.0 ? ensemble_size : n_atoms) {
    if (n_atoms < 1 || n_atoms > 2) throw ConfigError("exact simulation supports 1 or 2 atoms");
    if (photon_cap < 1) throw ConfigError("photon_cap must be >= 1");
    if (ensemble_size_ < n_atoms) throw ConfigError("ensemble_size must be >= n_atoms");
    state_ = Eigen::VectorXcd::Zero(dim());
    state_(0) = 1.0;
  }

  int n_atoms() const { return n_atoms_; }
  int photon_cap() const { return photon_cap_; }
  double ensemble_size() const { return ensemble_size_; }
  Eigen::Index atom_dim() const { return n_atoms_ == 1 ? 4 : 16; }
  Eigen::Index photon_dim() const { return photon_cap_ + 1; }
  Eigen::Index dim() const { return atom_dim() * photon_dim(); }

  /// Scale applied to single-atom cavity couplings.
  double coupling_scale() const { return std::sqrt(ensemble_size_ / n_atoms_); }

  const Eigen::VectorXcd& state() const { return state_; }
  void set_state(Eigen::VectorXcd s) {
    if (s.size() != dim()) throw DimMismatch("state dimension mismatch");
    state_ = std::move(s);
  }

  /// Level (1..4) of atom j in basis state `index`.
  int level(Eigen::Index index, int atom) const {
    Eigen::Index a = index / photon_dim();
    for (int j = n_atoms_ - 1; j > atom; --j) a /= 4;
    return static_cast<int>(a % 4) + 1;
  }

  int photons(Eigen::Index index) const { return static_cast<int>(index % photon_dim()); }

  /// |k><l| on atom j (levels 1..4), identity elsewhere.
  Eigen::MatrixXcd sigma(int atom, int k, int l) const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim(), dim());
    for (Eigen::Index col = 0; col < dim(); ++col) {
      if (level(col, atom) != l) continue;
      const Eigen::Index shift = place_value(atom) * photon_dim();
      m(col + (k - l) * shift, col) = 1.0;
    }
    return m;
  }

  /// Photon annihilation operator.
  Eigen::MatrixXcd photon_lower() const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim(), dim());
    for (Eigen::Index col = 0; col < dim(); ++col) {
      const int n = photons(col);
      if (n > 0) m(col - 1, col) = std::sqrt(static_cast<double>(n));
    }
    return m;
  }

 private:
  Eigen::Index place_value(int atom) const {
    Eigen::Index v = 1;
    for (int j = n_atoms_ - 1; j > atom; --j) v *= 4;
    return v;
  }

  int n_atoms_;
  int photon_cap_;
  double ensemble_size_;
  Eigen::VectorXcd state_;
};

// ---------------------------------------------------------------------------
// Preparation

struct PolaritonAmplitude {
  int n_b = 0;
  int n_c = 0;
  cplx amplitude = 1.0;
};

/// sum_k amp_k (b+)^nb (c+)^nc |1..1, 0> / sqrt(nb! nc!), normalized, with
/// b+ = (g S12+ - Omega a+)/B, c+ = (Omega S12+ + g a+)/B and g the
/// collective coupling of the represented ensemble.
inline AtomCavityExact prepare_polariton_state(AtomCavityExact sys, const PhysicalParams& p,
                                               const std::vector<PolaritonAmplitude>& coeffs) {
  const double g = std::sqrt(sys.ensemble_size()) * p.g13;
  const double w = p.omega;
  const double bb = std::sqrt(g * g + w * w);
  Eigen::MatrixXcd s12d = Eigen::MatrixXcd::Zero(sys.dim(), sys.dim());
  for (int j = 0; j < sys.n_atoms(); ++j) s12d += sys.sigma(j, 2, 1);
  s12d /= std::sqrt(static_cast<double>(sys.n_atoms()));
  const Eigen::MatrixXcd ad = sys.photon_lower().adjoint();
  const Eigen::MatrixXcd bd = (g * s12d - w * ad) / bb;
  const Eigen::MatrixXcd cd = (w * s12d + g * ad) / bb;

  Eigen::VectorXcd ground = Eigen::VectorXcd::Zero(sys.dim());
  ground(0) = 1.0;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(sys.dim());
  for (const auto& c : coeffs) {
    if (c.n_b < 0 || c.n_c < 0) throw ConfigError("negative polariton number");
    const int n = c.n_b + c.n_c;
    if (n > sys.photon_cap() || n > sys.n_atoms())
      throw TruncationExceeded(std::to_string(n) + " polaritons exceed the exact space");
    Eigen::VectorXcd v = ground;
    double fact = 1.0;
    for (int k = 0; k < c.n_c; ++k) {
      v = cd * v;
      fact *= k + 1;
    }
    for (int k = 0; k < c.n_b; ++k) {
      v = bd * v;
      fact *= k + 1;
    }
    psi += c.amplitude * v / std::sqrt(fact);
  }
  const double norm = psi.norm();
  if (!(norm > 1e-12)) throw TruncationExceeded("prepared state vanishes");
  sys.set_state(psi / norm);
  return sys;
}

/// Exact input distribution of a species, treating the listed polariton Fock
/// states as orthonormal.
inline std::vector<double> ideal_input_statistics(const std::vector<PolaritonAmplitude>& coeffs, bool species_b) {
  std::vector<double> dist;
  double total = 0.0;
  for (const auto& c : coeffs) {
    const int n = species_b ? c.n_b : c.n_c;
    if (static_cast<std::size_t>(n) >= dist.size()) dist.resize(static_cast<std::size_t>(n) + 1, 0.0);
    dist[static_cast<std::size_t>(n)] += std::norm(c.amplitude);
    total += std::norm(c.amplitude);
  }
  for (double& d : dist) d /= total;
  return dist;
}

// ---------------------------------------------------------------------------
// Raman swap

struct PulseSpec {
  double lambda = 1000.0;
  double delta_lambda = 1.0e5;
  double duration = 0.0;  // <= 0: use the analytic seed
  bool calibrate = true;

  /// Analytic seed T = pi delta_Lambda / |Lambda|^2.
  double seed_duration() const { return std::numbers::pi * delta_lambda / (lambda * lambda); }
};

struct CalibratedPulse {
  double lambda = 0.0;
  double delta_lambda = 0.0;
  double seed = 0.0;
  double duration = 0.0;
  double fidelity = 0.0;
};

inline Eigen::Matrix4cd expm_hermitian(const Eigen::Matrix4cd& h, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h);
  const Eigen::Vector4cd ph = (es.eigenvalues().cast<cplx>() * cplx(0.0, -t)).array().exp();
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

/// Single-atom propagator of delta_L |3><3| + Lambda (|3><1| + |3><2| + h.c.).
inline Eigen::Matrix4cd raman_unitary(double lambda, double delta_lambda, double t) {
  Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
  h(2, 2) = delta_lambda;
  h(2, 0) = h(0, 2) = lambda;
  h(2, 1) = h(1, 2) = lambda;
  return expm_hermitian(h, t);
}

/// Gate fidelity |Tr(X^dagger U_12)|^2 / 4 of the {1,2} block against the
/// exchange X = |1><2| + |2><1|, insensitive to a global phase.
inline double swap_fidelity(const Eigen::Matrix4cd& u) {
  const cplx tr = u(1, 0) + u(0, 1);
  return std::norm(tr) / 4.0;
}

/// Finds the swap duration with the best fidelity in [0.1, 10] x seed.
inline CalibratedPulse calibrate_raman(const PulseSpec& pulse, double min_fidelity = 0.999) {
  if (!(pulse.lambda != 0.0 && pulse.delta_lambda != 0.0)) throw ConfigError("Lambda and delta_Lambda must be non-zero");
  CalibratedPulse c;
  c.lambda = pulse.lambda;
  c.delta_lambda = pulse.delta_lambda;
  c.seed = pulse.seed_duration();
  auto f = [&](double t) { return swap_fidelity(raman_unitary(pulse.lambda, pulse.delta_lambda, t)); };
  if (!pulse.calibrate) {
    c.duration = pulse.duration > 0.0 ? pulse.duration : c.seed;
    c.fidelity = f(c.duration);
    return c;
  }
  const double lo = std::log(0.1 * std::abs(c.seed));
  const double hi = std::log(10.0 * std::abs(c.seed));
  constexpr int kGrid = 8001;
  int best = 0;
  double best_val = -1.0;
  for (int i = 0; i < kGrid; ++i) {
    const double v = f(std::exp(lo + (hi - lo) * i / (kGrid - 1)));
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  const double a = lo + (hi - lo) * std::max(0, best - 1) / (kGrid - 1);
  const double b = lo + (hi - lo) * std::min(kGrid - 1, best + 1) / (kGrid - 1);
  const auto opt = numeric::golden_section_maximize([&](double x) { return f(std::exp(x)); }, a, b, 1e-12, 1.0);
  c.duration = opt.value >= best_val ? std::exp(opt.x) : std::exp(lo + (hi - lo) * best / (kGrid - 1));
  c.fidelity = std::max(opt.value, best_val);
  if (c.fidelity < min_fidelity)
    throw CalibrationFailure("best swap fidelity " + std::to_string(c.fidelity) + " in [0.1, 10] x seed");
  return c;
}

/// Applies the calibrated single-atom swap to every atom; photons untouched.
inline AtomCavityExact raman_swap(AtomCavityExact sys, const CalibratedPulse& pulse) {
  const Eigen::Matrix4cd u1 = raman_unitary(pulse.lambda, pulse.delta_lambda, pulse.duration);
  Eigen::MatrixXcd atoms = u1;
  if (sys.n_atoms() == 2) {
    atoms.resize(16, 16);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) atoms.block(4 * i, 4 * j, 4, 4) = u1(i, j) * u1;
  }
  const Eigen::Index pd = sys.photon_dim();
  // state index = atom_index * pd + photon; apply atoms (x) I.
  Eigen::Map<const Eigen::MatrixXcd> in(sys.state().data(), pd, sys.atom_dim());
  const Eigen::MatrixXcd out = in * atoms.transpose();
  sys.set_state(Eigen::Map<const Eigen::VectorXcd>(out.data(), sys.dim()));
  return sys;
}

inline AtomCavityExact raman_swap(AtomCavityExact sys, const PulseSpec& pulse) {
  return raman_swap(std::move(sys), calibrate_raman(pulse));
}

// ---------------------------------------------------------------------------
// STIRAP

enum class RampShape { linear, cosine };

struct StirapSpec {
  int theta0_sign = +1;  // +1 selects b, -1 selects c
  RampShape ramp_shape = RampShape::cosine;
  double ramp_duration = 20.0;
  double omega = 1.0;

  double theta(double t) const {
    const double s = std::clamp(t / ramp_duration, 0.0, 1.0);
    const double f = ramp_shape == RampShape::cosine ? 0.5 * (1.0 + std::cos(std::numbers::pi * s)) : 1.0 - s;
    return theta0_sign * omega * f;
  }

  void validate() const {
    if (theta0_sign != 1 && theta0_sign != -1) throw ConfigError("theta0_sign must be +1 or -1");
    if (!(ramp_duration > 0.0)) throw ConfigError("ramp_duration must be positive");
  }
};

/// Static part of the STIRAP-stage Hamiltonian and the Theta coupling
/// sum_j (sigma_14 + sigma_41).
struct StirapHamiltonian {
  Eigen::MatrixXcd h0;
  Eigen::MatrixXcd theta_coupling;
};

inline StirapHamiltonian stirap_hamiltonian(const AtomCavityExact& sys, const PhysicalParams& p) {
  const Eigen::Index d = sys.dim();
  const double scale = sys.coupling_scale();
  const Eigen::MatrixXcd a = sys.photon_lower();
  const Eigen::MatrixXcd ad = a.adjoint();
  StirapHamiltonian h{Eigen::MatrixXcd::Zero(d, d), Eigen::MatrixXcd::Zero(d, d)};
  for (int j = 0; j < sys.n_atoms(); ++j) {
    h.h0 += p.epsilon * sys.sigma(j, 2, 2) + p.delta * sys.sigma(j, 3, 3) +
            (p.big_delta + p.epsilon) * sys.sigma(j, 4, 4);
    const Eigen::MatrixXcd c13 = p.g13 * scale * sys.sigma(j, 1, 3) * ad;
    const Eigen::MatrixXcd c24 = p.g24 * scale * sys.sigma(j, 2, 4) * ad;
    h.h0 += c13 + c13.adjoint() + c24 + c24.adjoint();
    h.theta_coupling += sys.sigma(j, 1, 4) + sys.sigma(j, 4, 1);
  }
  return h;
}

struct StirapResult {
  AtomCavityExact sys;
  int steps = 0;
  double step_infidelity = 0.0;  // 1 - |<psi_n|psi_2n>|^2 at the accepted level
  bool converged = false;
};

/// Piecewise-constant propagation through the Theta ramp with step doubling
/// until two successive refinements agree to `tolerance` in fidelity.
inline StirapResult stirap_map(const AtomCavityExact& sys, const StirapSpec& stirap, const PhysicalParams& p,
                               double tolerance = 1e-8, int max_steps = 1 << 18) {
  stirap.validate();
  const auto h = stirap_hamiltonian(sys, p);
  auto run = [&](int steps) {
    const double dt = stirap.ramp_duration / steps;
    Eigen::VectorXcd psi = sys.state();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es;
    for (int k = 0; k < steps; ++k) {
      es.compute(h.h0 + stirap.theta((k + 0.5) * dt) * h.theta_coupling);
      const Eigen::VectorXcd c = es.eigenvectors().adjoint() * psi;
      psi = es.eigenvectors() * (c.array() * (es.eigenvalues().cast<cplx>() * cplx(0.0, -dt)).array().exp()).matrix();
    }
    return psi;
  };
  int steps = std::max(16, static_cast<int>(std::ceil(4.0 * stirap.ramp_duration * std::abs(stirap.omega))));
  Eigen::VectorXcd coarse = run(steps);
  StirapResult r{sys};
  while (true) {
    const Eigen::VectorXcd fine = run(2 * steps);
    steps *= 2;
    r.step_infidelity = std::max(0.0, 1.0 - std::norm(coarse.dot(fine)));
    coarse = fine;
    if (r.step_infidelity <= tolerance) {
      r.converged = true;
      break;
    }
    if (2 * steps > max_steps) break;
  }
  r.sys.set_state(coarse);
  r.steps = steps;
  return r;
}

// ---------------------------------------------------------------------------
// Readout

/// Distribution of the number of atoms in `level` (1..4).
inline std::vector<double> level_statistics(const AtomCavityExact& sys, int level) {
  std::vector<double> dist(static_cast<std::size_t>(sys.n_atoms()) + 1, 0.0);
  for (Eigen::Index i = 0; i < sys.dim(); ++i) {
    int count = 0;
    for (int j = 0; j < sys.n_atoms(); ++j) count += sys.level(i, j) == level ? 1 : 0;
    dist[static_cast<std::size_t>(count)] += std::norm(sys.state()(i));
  }
  return dist;
}

/// Fluorescence observable: level-2 excitation-number distribution.
inline std::vector<double> species_statistics(const AtomCavityExact& sys) { return level_statistics(sys, 2); }

/// (sum_n sqrt(P(n) Q(n)))^2
inline double classical_fidelity(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t n = 0; n < std::min(p.size(), q.size()); ++n) s += std::sqrt(std::max(0.0, p[n] * q[n]));
  return s * s;
}

struct ProtocolSpec {
  PulseSpec pulse;
  StirapSpec stirap;
  double stirap_tolerance = 1e-8;
};

struct ProtocolResult {
  AtomCavityExact final_state;
  CalibratedPulse pulse;
  std::vector<double> level1_after_stirap;  // before the final swap
  std::vector<double> distribution;         // level-2 statistics after the final swap
  int stirap_steps = 0;
  bool stirap_converged = false;
  double total_duration = 0.0;
  double max_norm_error = 0.0;
};

/// Swap, STIRAP, swap. The driving laser Omega is off from the first pulse on.
inline ProtocolResult run_protocol(const AtomCavityExact& input, const PhysicalParams& p, const ProtocolSpec& spec) {
  ProtocolResult r{.final_state = input, .pulse = calibrate_raman(spec.pulse), .level1_after_stirap = {}, .distribution = {}};
  auto track = [&](const AtomCavityExact& s) { r.max_norm_error = std::max(r.max_norm_error, std::abs(s.state().norm() - 1.0)); };
  AtomCavityExact s = raman_swap(input, r.pulse);
  track(s);
  auto st = stirap_map(s, spec.stirap, p, spec.stirap_tolerance);
  track(st.sys);
  r.stirap_steps = st.steps;
  r.stirap_converged = st.converged;
  r.level1_after_stirap = level_statistics(st.sys, 1);
  s = raman_swap(st.sys, r.pulse);
  track(s);
  r.distribution = species_statistics(s);
  r.final_state = s;
  r.total_duration = 2.0 * r.pulse.duration + spec.stirap.ramp_duration;
  return r;
}

/// Fidelity of the recovered statistics against `ideal` for each ramp
/// duration (independent runs, executed concurrently).
inline std::vector<double> ramp_ladder(const AtomCavityExact& input, const PhysicalParams& p, ProtocolSpec spec,
                                       const std::vector<double>& ideal, const std::vector<double>& durations,
                                       unsigned threads = 0) {
  std::vector<double> fid(durations.size());
  parallel_for(durations.size(), threads, [&](std::size_t i) {
    ProtocolSpec s = spec;
    s.stirap.ramp_duration = durations[i];
    fid[i] = classical_fidelity(run_protocol(input, p, s).distribution, ideal);
  });
  return fid;
}

/// 1 / max(|J|, |U|): the time scale of the effective lattice dynamics.
inline double dynamics_timescale(const params::EffectiveParams& e) {
  const double m = std::max({std::abs(e.j_bb), std::abs(e.j_cc), std::abs(e.j_bc), std::abs(e.u_b), std::abs(e.u_c),
                             std::abs(e.u_bc)});
  return 1.0 / m;
}

}  // namespace polabh::measure

#endif  // POLABH_MEASURE_HPP
