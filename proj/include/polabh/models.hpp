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


#ifndef POLABH_MODELS_HPP
#define POLABH_MODELS_HPP

// Lattice Hamiltonians: the effective two-component Bose-Hubbard model and the
// full bosonized atom-cavity model, plus polariton operators and initial
// states on either.
//
// Full model, per site: photon a, collective atomic modes s12, s13 (weight 1)
// and s14 (weight 2, it stores two quanta). The weighted count
// N_exc = sum(n_a + n_s12 + n_s13 + 2 n_s14) is conserved.

#include <Eigen/Dense>

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "polabh/errors.hpp"
#include "polabh/fock.hpp"
#include "polabh/params.hpp"

namespace polabh::models {

using fock::cplx;
using fock::SparseOperator;
using StateVector = Eigen::VectorXcd;

struct LatticeSpec {
  int n_sites = 1;
  std::vector<std::pair<int, int>> edges;

  /// Open chain 0-1-...-(n-1).
  static LatticeSpec chain(int n_sites) {
    LatticeSpec l;
    l.n_sites = n_sites;
    for (int i = 0; i + 1 < n_sites; ++i) l.edges.emplace_back(i, i + 1);
    return l;
  }

  void validate() const {
    if (n_sites < 1) throw ConfigError("lattice needs at least one site");
    std::vector<std::pair<int, int>> seen;
    for (auto [a, b] : edges) {
      if (a < 0 || b < 0 || a >= n_sites || b >= n_sites)
        throw ConfigError("lattice edge endpoint out of range");
      if (a == b) throw ConfigError("lattice edges may not be self-loops");
      const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
      for (const auto& s : seen)
        if (s == key) throw ConfigError("duplicate lattice edge");
      seen.emplace_back(key);
    }
  }
};

struct EffectiveModelSpec {
  params::EffectiveParams params;
  LatticeSpec lattice;
  int max_particles = 0;
  bool include_eq6 = true;
  bool include_pair_conversion = false;
};

struct FullModelSpec {
  params::PhysicalParams params;
  LatticeSpec lattice;
  int max_excitations = 0;
};

using ModelSpec = std::variant<EffectiveModelSpec, FullModelSpec>;

enum class Species { b, c, p0, p_plus, p_minus };

inline const char* to_string(Species s) {
  switch (s) {
    case Species::b: return "b";
    case Species::c: return "c";
    case Species::p0: return "p0";
    case Species::p_plus: return "p_plus";
    case Species::p_minus: return "p_minus";
  }
  return "?";
}

struct Placement {
  Species species = Species::b;
  int site = 0;
};

// Mode offsets within a site.
namespace effective_mode {
inline constexpr int b = 0;
inline constexpr int c = 1;
inline constexpr int per_site = 2;
}  // namespace effective_mode

namespace full_mode {
inline constexpr int a = 0;
inline constexpr int s12 = 1;
inline constexpr int s13 = 2;
inline constexpr int s14 = 3;
inline constexpr int per_site = 4;
}  // namespace full_mode

inline fock::ModeSpace mode_space(const ModelSpec& spec) {
  return std::visit(
      [](const auto& s) -> fock::ModeSpace {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, EffectiveModelSpec>) {
          return fock::ModeSpace::uniform(effective_mode::per_site * s.lattice.n_sites, s.max_particles);
        } else {
          std::vector<int> w;
          for (int r = 0; r < s.lattice.n_sites; ++r) w.insert(w.end(), {1, 1, 1, 2});
          return fock::ModeSpace(std::move(w), s.max_excitations);
        }
      },
      spec);
}

/// A model spec together with its enumerated basis.
class Model {
 public:
  explicit Model(ModelSpec spec, std::size_t max_dim = fock::kDefaultMaxDim) : spec_(std::move(spec)) {
    std::visit([](const auto& s) { s.lattice.validate(); }, spec_);
    if (const auto* f = std::get_if<FullModelSpec>(&spec_)) f->params.validate();
    basis_ = std::make_shared<const fock::Basis>(mode_space(spec_), max_dim);
    lower_.reserve(static_cast<std::size_t>(basis_->n_modes()));
    for (int m = 0; m < basis_->n_modes(); ++m) lower_.push_back(fock::lower(*basis_, m));
  }

  const ModelSpec& spec() const { return spec_; }
  const fock::Basis& basis() const { return *basis_; }
  std::size_t dim() const { return basis_->dim(); }
  bool is_full() const { return std::holds_alternative<FullModelSpec>(spec_); }
  const LatticeSpec& lattice() const {
    return std::visit([](const auto& s) -> const LatticeSpec& { return s.lattice; }, spec_);
  }
  int n_sites() const { return lattice().n_sites; }

  const FullModelSpec& full() const { return std::get<FullModelSpec>(spec_); }
  const EffectiveModelSpec& effective() const { return std::get<EffectiveModelSpec>(spec_); }

  /// Annihilation operator of a raw mode.
  const SparseOperator& lower(int mode) const {
    if (mode < 0 || mode >= basis_->n_modes()) throw IndexOutOfRange("mode " + std::to_string(mode));
    return lower_[static_cast<std::size_t>(mode)];
  }
  SparseOperator raise(int mode) const { return adjoint(lower(mode)); }
  SparseOperator number(int mode) const { return fock::number_op(*basis_, mode); }

 private:
  ModelSpec spec_;
  std::shared_ptr<const fock::Basis> basis_;
  std::vector<SparseOperator> lower_;
};

namespace detail {

inline void check_site(const Model& m, int site) {
  if (site < 0 || site >= m.n_sites()) throw IndexOutOfRange("site " + std::to_string(site));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Effective model

/// H = sum_R [mu_b n_b + mu_c n_c + U_b n_b(n_b-1) + U_c n_c(n_c-1) + U_bc n_b n_c]
///   + sum_<R,R'> [J_bb b+_R b_R' + J_cc c+_R c_R' - J_bc (b+_R c_R' + c+_R b_R') + h.c.]
///   (+ eps/B^2 on-site terms) (+ pair conversion).
inline SparseOperator build_effective_hamiltonian(const Model& model) {
  const auto& spec = model.effective();
  const auto& e = spec.params;
  const auto& basis = model.basis();
  const std::size_t dim = basis.dim();
  using namespace effective_mode;

  // Diagonal part straight from occupations.
  std::vector<fock::Entry> diag;
  diag.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    double v = 0.0;
    for (int r = 0; r < spec.lattice.n_sites; ++r) {
      const double nb = basis.occupation(i, per_site * r + b);
      const double nc = basis.occupation(i, per_site * r + c);
      v += e.mu_b * nb + e.mu_c * nc + e.u_b * nb * (nb - 1.0) + e.u_c * nc * (nc - 1.0) + e.u_bc * nb * nc;
      if (spec.include_eq6) v += e.eps_b * nb + e.eps_c * nc;
    }
    diag.push_back({i, i, v});
  }
  SparseOperator h(dim, diag);

  auto hermitian_pair = [](const SparseOperator& x) { return x + adjoint(x); };

  for (auto [r1, r2] : spec.lattice.edges) {
    const auto& b1 = model.lower(per_site * r1 + b);
    const auto& c1 = model.lower(per_site * r1 + c);
    const auto& b2 = model.lower(per_site * r2 + b);
    const auto& c2 = model.lower(per_site * r2 + c);
    SparseOperator hop = e.j_bb * compose(adjoint(b1), b2) + e.j_cc * compose(adjoint(c1), c2) -
                         e.j_bc * (compose(adjoint(b1), c2) + compose(adjoint(c1), b2));
    h += hermitian_pair(hop);
  }

  for (int r = 0; r < spec.lattice.n_sites; ++r) {
    const auto& bl = model.lower(per_site * r + b);
    const auto& cl = model.lower(per_site * r + c);
    if (spec.include_eq6 && e.eps_bc != 0.0) h += e.eps_bc * hermitian_pair(compose(adjoint(bl), cl));
    if (spec.include_pair_conversion && e.pair_conv != 0.0) {
      const auto cc_dag = compose(adjoint(cl), adjoint(cl));
      h += e.pair_conv * hermitian_pair(compose(cc_dag, compose(bl, bl)));
    }
  }
  return h;
}

// ---------------------------------------------------------------------------
// Full model

/// Per site: eps n_s12 + delta n_s13 + (Delta + eps) n_s14
///         + [Omega s12+ s13 + g a+ s13 + g24 a+ s12+ s14 + h.c.],
/// plus alpha (a+_R a_R' + h.c.) on every edge.
inline SparseOperator build_full_hamiltonian(const Model& model) {
  const auto& spec = model.full();
  const auto& p = spec.params;
  const double g = p.collective_g();
  const auto& basis = model.basis();
  const std::size_t dim = basis.dim();
  using namespace full_mode;

  std::vector<fock::Entry> diag;
  diag.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    double v = 0.0;
    for (int r = 0; r < spec.lattice.n_sites; ++r) {
      v += p.epsilon * basis.occupation(i, per_site * r + s12) +
           p.delta * basis.occupation(i, per_site * r + s13) +
           (p.big_delta + p.epsilon) * basis.occupation(i, per_site * r + s14);
    }
    diag.push_back({i, i, v});
  }
  SparseOperator h(dim, diag);

  for (int r = 0; r < spec.lattice.n_sites; ++r) {
    const auto& al = model.lower(per_site * r + a);
    const auto& l12 = model.lower(per_site * r + s12);
    const auto& l13 = model.lower(per_site * r + s13);
    const auto& l14 = model.lower(per_site * r + s14);
    const SparseOperator ad = adjoint(al);
    SparseOperator t = p.omega * compose(adjoint(l12), l13) + g * compose(ad, l13) +
                       p.g24 * compose(ad, compose(adjoint(l12), l14));
    h += t + adjoint(t);
  }
  for (auto [r1, r2] : spec.lattice.edges) {
    const auto t = p.alpha * compose(adjoint(model.lower(per_site * r1 + a)), model.lower(per_site * r2 + a));
    h += t + adjoint(t);
  }
  return h;
}

inline SparseOperator build_hamiltonian(const Model& model) {
  return model.is_full() ? build_full_hamiltonian(model) : build_effective_hamiltonian(model);
}

/// Conserved charge: total particle number (effective) or the weighted
/// excitation number (full).
inline SparseOperator conserved_charge(const Model& model) {
  return fock::weighted_number_op(model.basis());
}

/// Creation operator of a polariton species at `site`.
///
/// Full model: b+ = (g s12+ - Omega a+)/B, c+ = (Omega s12+ + g a+)/B,
/// p0+ = b+, p_pm+ = sqrt(2/(A(A pm delta))) (Omega s12+ + g a+ pm (A pm delta)/2 s13+).
/// Effective model: only b and c exist and are the raw modes.
inline SparseOperator polariton_creation(const Model& model, Species species, int site) {
  detail::check_site(model, site);
  if (!model.is_full()) {
    using namespace effective_mode;
    switch (species) {
      case Species::b: return model.raise(per_site * site + b);
      case Species::c: return model.raise(per_site * site + c);
      default: throw ConfigError(std::string("species ") + to_string(species) + " is not part of the effective model");
    }
  }
  using namespace full_mode;
  const auto& p = model.full().params;
  const auto s = params::derive_scales(p);
  const double g = s.g;
  const double w = p.omega;
  const double bb = s.b_scale;
  const SparseOperator ad = model.raise(per_site * site + a);
  const SparseOperator s12d = model.raise(per_site * site + s12);
  switch (species) {
    case Species::b:
    case Species::p0:
      return (g / bb) * s12d - (w / bb) * ad;
    case Species::c:
      return (w / bb) * s12d + (g / bb) * ad;
    case Species::p_plus:
    case Species::p_minus: {
      const double sign = species == Species::p_plus ? 1.0 : -1.0;
      // A -/+ delta cancels when delta dominates; use (A + s delta)(A - s delta) = 4B^2.
      const double am = sign * p.delta >= 0.0 ? s.a_scale + sign * p.delta
                                              : 4.0 * s.b_squared() / (s.a_scale - sign * p.delta);
      const double norm = std::sqrt(2.0 / (s.a_scale * am));
      const SparseOperator s13d = model.raise(per_site * site + s13);
      return norm * (w * s12d + g * ad + (sign * 0.5 * am) * s13d);
    }
  }
  throw ConfigError("unknown species");
}

/// n_s = s+ s for species b or c.
inline SparseOperator species_number_op(const Model& model, Species species, int site) {
  if (species != Species::b && species != Species::c)
    throw ConfigError("species_number_op supports b and c only");
  const auto create = polariton_creation(model, species, site);
  return compose(create, adjoint(create));
}

inline StateVector vacuum(const Model& model) {
  StateVector v = StateVector::Zero(static_cast<Eigen::Index>(model.dim()));
  v(0) = 1.0;
  return v;
}

/// Normalized product of creation operators applied to the vacuum.
inline StateVector prepare_state(const Model& model, const std::vector<Placement>& placements) {
  const int cap = model.basis().space().max_total();
  if (static_cast<int>(placements.size()) > cap)
    throw TruncationExceeded(std::to_string(placements.size()) + " quanta requested, truncation is " +
                             std::to_string(cap));
  StateVector psi = vacuum(model);
  for (const auto& pl : placements) psi = polariton_creation(model, pl.species, pl.site).apply(psi);
  const double n = psi.norm();
  if (!(n > 1e-12)) throw TruncationExceeded("prepared state vanishes inside the truncated space");
  return psi / n;
}

/// Exact distribution of the species occupation at `site`: P(n) is the weight
/// of the state on the n-eigenspace of n_species.
inline std::vector<double> ideal_statistics(const StateVector& state, const Model& model, int site,
                                            Species species) {
  const Eigen::MatrixXcd n = species_number_op(model, species, site).to_dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(n);
  const Eigen::VectorXcd coeffs = es.eigenvectors().adjoint() * state;
  std::vector<double> dist;
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    const double lam = es.eigenvalues()(i);
    const long k = std::lround(lam);
    if (std::abs(lam - static_cast<double>(k)) > 1e-8 || k < 0)
      throw NumericalError("NonIntegerSpectrum", "number operator eigenvalue " + std::to_string(lam));
    if (static_cast<std::size_t>(k) >= dist.size()) dist.resize(static_cast<std::size_t>(k) + 1, 0.0);
    dist[static_cast<std::size_t>(k)] += std::norm(coeffs(i));
  }
  return dist;
}

}  // namespace polabh::models

#endif  // POLABH_MODELS_HPP
