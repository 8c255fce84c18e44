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


#ifndef POLABH_EVOLVE_HPP
#define POLABH_EVOLVE_HPP

// Unitary propagation psi(t) = exp(-i H t) psi0 with two independent
// backends, and observable time series.
//
//  * dense:  one eigendecomposition of H, then exact phases at every sample.
//  * krylov: Lanczos (full reorthogonalization) on sub-steps of at most
//            `time_step`, halving the sub-step until the a posteriori error
//            estimate beta_m |[exp(-i T_m h) e_1]_m| meets `tolerance`.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "polabh/errors.hpp"
#include "polabh/fock.hpp"
#include "polabh/models.hpp"

namespace polabh::evolve {

using fock::cplx;
using fock::SparseOperator;
using models::StateVector;

enum class Method { dense, krylov };

struct PropagatorConfig {
  Method method = Method::dense;
  double time_step = 1.0;
  int krylov_dim = 30;
  double tolerance = 1e-10;

  void validate() const {
    if (!(time_step > 0.0)) throw ConfigError("time_step must be positive");
    if (krylov_dim < 2) throw ConfigError("krylov_dim must be >= 2");
    if (!(tolerance > 0.0)) throw ConfigError("tolerance must be positive");
  }
};

struct Observable {
  std::string name;
  SparseOperator op;
};

class TimeSeries {
 public:
  TimeSeries() = default;
  explicit TimeSeries(std::vector<std::string> names) : names_(std::move(names)) {}

  void push(double t, std::vector<double> values, double norm) {
    if (values.size() != names_.size()) throw DimMismatch("record width mismatch");
    times_.push_back(t);
    rows_.push_back(std::move(values));
    norms_.push_back(norm);
  }

  std::size_t size() const { return times_.size(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<double>& norms() const { return norms_; }
  const std::vector<double>& row(std::size_t i) const { return rows_[i]; }

  std::size_t index_of(const std::string& name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw std::out_of_range("no observable named " + name);
    return static_cast<std::size_t>(it - names_.begin());
  }

  bool has(const std::string& name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
  }

  double value(std::size_t i, const std::string& name) const { return rows_[i][index_of(name)]; }

  std::vector<double> column(const std::string& name) const {
    const std::size_t k = index_of(name);
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const auto& r : rows_) out.push_back(r[k]);
    return out;
  }

  void add_column(const std::string& name, const std::vector<double>& values) {
    if (values.size() != rows_.size()) throw DimMismatch("column length mismatch");
    if (has(name)) throw std::invalid_argument("duplicate observable " + name);
    names_.push_back(name);
    for (std::size_t i = 0; i < rows_.size(); ++i) rows_[i].push_back(values[i]);
  }

 private:
  std::vector<double> times_;
  std::vector<std::string> names_;
  std::vector<std::vector<double>> rows_;
  std::vector<double> norms_;
};

inline void require_hermitian(const SparseOperator& h) {
  const double defect = fock::hermiticity_defect(h);
  if (defect > 1e-13 * std::max(1.0, h.max_abs()))
    throw NonHermitian("max |H - H^dagger| = " + std::to_string(defect));
}

/// exp(-i H t) via one eigendecomposition; reusable for any t.
class DensePropagator {
 public:
  explicit DensePropagator(const SparseOperator& h) : solver_(h.to_dense()) {}

  StateVector apply(const StateVector& psi, double t) const {
    const Eigen::VectorXcd c = solver_.eigenvectors().adjoint() * psi;
    const Eigen::VectorXcd phased =
        c.array() * (solver_.eigenvalues().array().cast<cplx>() * cplx(0.0, -t)).exp();
    return solver_.eigenvectors() * phased;
  }

  const Eigen::VectorXd& eigenvalues() const { return solver_.eigenvalues(); }

 private:
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver_;
};

/// Adaptive Lanczos propagator.
class KrylovPropagator {
 public:
  KrylovPropagator(const SparseOperator& h, PropagatorConfig config)
      : h_(h), config_(config), step_(config.time_step) {
    config_.validate();
  }

  StateVector apply(StateVector psi, double dt) {
    if (dt < 0.0) throw std::invalid_argument("negative propagation time");
    double remaining = dt;
    const double h_min = std::max(dt, config_.time_step) * 1e-14;
    while (remaining > 0.0) {
      const double beta0 = psi.norm();
      if (beta0 == 0.0) return psi;
      build_krylov(psi / beta0);
      double h = std::min({step_, config_.time_step, remaining});
      // Accept the full remainder when it is within rounding of h.
      if (remaining - h < 1e-12 * remaining) h = remaining;
      while (true) {
        const Eigen::VectorXcd y = small_exp(h);
        const double err = breakdown_ ? 0.0 : beta_next_ * std::abs(y(y.size() - 1)) * beta0;
        if (err <= config_.tolerance) {
          psi = basis_ * (y * beta0);
          remaining -= h;
          if (remaining < 1e-14 * dt) remaining = 0.0;
          ++substeps_;
          step_ = err < 0.01 * config_.tolerance ? std::min(2.0 * h, config_.time_step) : h;
          break;
        }
        h *= 0.5;
        if (h < h_min)
          throw ConvergenceFailure("Krylov error estimate " + std::to_string(err) +
                                   " above tolerance at krylov_dim " + std::to_string(config_.krylov_dim));
      }
    }
    return psi;
  }

  long substeps() const { return substeps_; }

 private:
  void build_krylov(const StateVector& v0) {
    const Eigen::Index n = v0.size();
    const int m_max = static_cast<int>(std::min<Eigen::Index>(config_.krylov_dim, n));
    basis_.resize(n, m_max);
    std::vector<double> alpha;
    std::vector<double> beta;
    basis_.col(0) = v0;
    breakdown_ = false;
    beta_next_ = 0.0;
    int m = 0;
    for (int j = 0; j < m_max; ++j) {
      Eigen::VectorXcd w = h_.matrix() * basis_.col(j);
      alpha.push_back(basis_.col(j).dot(w).real());
      // Two passes of classical Gram-Schmidt against the whole basis.
      for (int pass = 0; pass < 2; ++pass)
        w -= basis_.leftCols(j + 1) * (basis_.leftCols(j + 1).adjoint() * w);
      const double b = w.norm();
      m = j + 1;
      if (b <= 1e-12 * std::max(1.0, std::abs(alpha.back()))) {
        breakdown_ = true;
        break;
      }
      if (j + 1 == m_max) {
        beta_next_ = b;
        if (m_max == n) breakdown_ = true;  // the whole space is spanned
        break;
      }
      beta.push_back(b);
      basis_.col(j + 1) = w / b;
    }
    basis_.conservativeResize(n, m);
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int j = 0; j < m; ++j) t(j, j) = alpha[static_cast<std::size_t>(j)];
    for (int j = 0; j + 1 < m; ++j) t(j, j + 1) = t(j + 1, j) = beta[static_cast<std::size_t>(j)];
    tri_.compute(t);
  }

  // exp(-i T h) e_1
  Eigen::VectorXcd small_exp(double h) const {
    const Eigen::MatrixXd& q = tri_.eigenvectors();
    const Eigen::VectorXcd phase = (tri_.eigenvalues().cast<cplx>() * cplx(0.0, -h)).array().exp();
    const Eigen::VectorXcd first_row = q.row(0).transpose().cast<cplx>();
    return q.cast<cplx>() * phase.cwiseProduct(first_row);
  }

  const SparseOperator& h_;
  PropagatorConfig config_;
  double step_;
  Eigen::MatrixXcd basis_;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri_;
  double beta_next_ = 0.0;
  bool breakdown_ = false;
  long substeps_ = 0;
};

/// exp(-i H t) psi with the configured backend.
inline StateVector propagate(const SparseOperator& h, const StateVector& psi, double t,
                             const PropagatorConfig& config = {}) {
  config.validate();
  if (static_cast<std::size_t>(psi.size()) != h.dim()) throw DimMismatch("state/Hamiltonian dimension mismatch");
  if (config.method == Method::dense) return DensePropagator(h).apply(psi, t);
  KrylovPropagator k(h, config);
  return k.apply(psi, t);
}

/// Samples <psi(t)|O|psi(t)> for every observable at every requested time.
inline TimeSeries evolve(const SparseOperator& h, const StateVector& psi0, const std::vector<double>& times,
                         const std::vector<Observable>& observables, const PropagatorConfig& config = {}) {
  config.validate();
  if (static_cast<std::size_t>(psi0.size()) != h.dim()) throw DimMismatch("state/Hamiltonian dimension mismatch");
  for (const auto& o : observables)
    if (o.op.dim() != h.dim()) throw DimMismatch("observable " + o.name + " has the wrong dimension");
  if (std::abs(psi0.norm() - 1.0) > 1e-8) throw ConfigError("initial state is not normalized");
  for (std::size_t i = 0; i < times.size(); ++i)
    if (times[i] < 0.0 || (i > 0 && times[i] < times[i - 1]))
      throw ConfigError("sample times must be non-negative and non-decreasing");
  require_hermitian(h);

  std::vector<std::string> names;
  for (const auto& o : observables) names.push_back(o.name);
  TimeSeries ts(names);

  auto record = [&](double t, const StateVector& psi) {
    std::vector<double> values;
    values.reserve(observables.size());
    for (const auto& o : observables) values.push_back(o.op.expectation(psi).real());
    ts.push(t, std::move(values), psi.norm());
  };

  if (config.method == Method::dense) {
    const DensePropagator prop(h);
    for (double t : times) record(t, prop.apply(psi0, t));
  } else {
    KrylovPropagator prop(h, config);
    StateVector psi = psi0;
    double t_prev = 0.0;
    for (double t : times) {
      psi = prop.apply(psi, t - t_prev);
      t_prev = t;
      record(t, psi);
    }
  }
  return ts;
}

/// n_samples + 1 equally spaced times on [0, t_max].
inline std::vector<double> uniform_times(double t_max, int n_samples) {
  if (n_samples < 1 || !(t_max >= 0.0)) throw ConfigError("need t_max >= 0 and at least one sample");
  std::vector<double> t(static_cast<std::size_t>(n_samples) + 1);
  for (int i = 0; i <= n_samples; ++i) t[static_cast<std::size_t>(i)] = t_max * i / n_samples;
  return t;
}

inline std::string site_label(const std::string& base, int site) {
  return base + "[" + std::to_string(site + 1) + "]";
}

/// N_b, N_c and the squares n_b^2, n_c^2 at `site` (labels use 1-based sites).
inline std::vector<Observable> observables_bc(const models::Model& model, int site) {
  const auto nb = models::species_number_op(model, models::Species::b, site);
  const auto nc = models::species_number_op(model, models::Species::c, site);
  return {{site_label("N_b", site), nb},
          {site_label("N_c", site), nc},
          {site_label("nsq_b", site), compose(nb, nb)},
          {site_label("nsq_c", site), compose(nc, nc)}};
}

/// Appends F = <n^2> - <n>^2 for both species at `site`.
inline void add_fluctuations(TimeSeries& ts, int site) {
  for (const char* s : {"b", "c"}) {
    const auto n = ts.column(site_label(std::string("N_") + s, site));
    const auto n2 = ts.column(site_label(std::string("nsq_") + s, site));
    std::vector<double> f(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) f[i] = n2[i] - n[i] * n[i];
    ts.add_column(site_label(std::string("F_") + s, site), f);
  }
}

}  // namespace polabh::evolve

#endif  // POLABH_EVOLVE_HPP
