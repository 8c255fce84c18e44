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


#ifndef POLABH_FOCK_HPP
#define POLABH_FOCK_HPP

// Truncated multi-mode bosonic Fock spaces with a weighted excitation cap and
// sparse operators on them.
//
// Basis order: colexicographic on the occupation vector, i.e. the last mode is
// the most significant digit and mode 0 varies fastest. The vacuum has rank 0.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "polabh/errors.hpp"

namespace polabh::fock {

using cplx = std::complex<double>;

inline constexpr std::size_t kDefaultMaxDim = 10'000'000;

class ModeSpace {
 public:
  ModeSpace() = default;

  /// `caps` may be empty (no per-mode caps); a negative cap means "none".
  ModeSpace(std::vector<int> weights, int max_total, std::vector<int> caps = {})
      : weights_(std::move(weights)), max_total_(max_total), caps_(std::move(caps)) {
    if (weights_.empty()) throw ConfigError("ModeSpace needs at least one mode");
    if (max_total_ < 0) throw ConfigError("ModeSpace max_total must be >= 0");
    for (int w : weights_)
      if (w <= 0) throw ConfigError("ModeSpace weights must be positive");
    if (caps_.empty()) caps_.assign(weights_.size(), -1);
    if (caps_.size() != weights_.size()) throw ConfigError("ModeSpace caps length mismatch");
  }

  static ModeSpace uniform(int n_modes, int max_total) {
    return ModeSpace(std::vector<int>(n_modes, 1), max_total);
  }

  int n_modes() const { return static_cast<int>(weights_.size()); }
  int weight(int m) const { return weights_[m]; }
  int max_total() const { return max_total_; }
  const std::vector<int>& weights() const { return weights_; }

  /// Largest occupation mode m can take.
  int max_occupation(int m) const {
    const int by_budget = max_total_ / weights_[m];
    return caps_[m] < 0 ? by_budget : std::min(by_budget, caps_[m]);
  }

  bool admissible(std::span<const int> occ) const {
    if (static_cast<int>(occ.size()) != n_modes()) return false;
    long total = 0;
    for (int m = 0; m < n_modes(); ++m) {
      if (occ[m] < 0) return false;
      if (caps_[m] >= 0 && occ[m] > caps_[m]) return false;
      total += static_cast<long>(weights_[m]) * occ[m];
    }
    return total <= max_total_;
  }

  long weighted_total(std::span<const int> occ) const {
    long total = 0;
    for (int m = 0; m < n_modes(); ++m) total += static_cast<long>(weights_[m]) * occ[m];
    return total;
  }

 private:
  std::vector<int> weights_;
  int max_total_ = 0;
  std::vector<int> caps_;
};

using BasisState = std::vector<int>;

/// Enumerated basis of a ModeSpace with O(n_modes * occupation) rank/unrank
/// from a table of completion counts.
class Basis {
 public:
  explicit Basis(ModeSpace space, std::size_t max_dim = kDefaultMaxDim) : space_(std::move(space)) {
    const int m_count = space_.n_modes();
    const int k_max = space_.max_total();
    // count_[m][k]: admissible assignments of modes 0..m-1 with weighted sum <= k.
    count_.assign(m_count + 1, std::vector<std::uint64_t>(k_max + 1, 1));
    const std::uint64_t limit = static_cast<std::uint64_t>(max_dim);
    for (int m = 0; m < m_count; ++m) {
      for (int k = 0; k <= k_max; ++k) {
        std::uint64_t total = 0;
        const int top = std::min(space_.max_occupation(m), k / space_.weight(m));
        for (int v = 0; v <= top; ++v) {
          total += count_[m][k - v * space_.weight(m)];
          if (total > limit) total = limit + 1;  // saturate
        }
        count_[m + 1][k] = total;
      }
    }
    const std::uint64_t dim = count_[m_count][k_max];
    if (dim > limit)
      throw DimensionOverflow("basis exceeds " + std::to_string(max_dim) + " states");
    dim_ = static_cast<std::size_t>(dim);

    occupations_.resize(dim_ * m_count);
    for (std::size_t i = 0; i < dim_; ++i) {
      const BasisState s = unrank_slow(i);
      std::copy(s.begin(), s.end(), occupations_.begin() + static_cast<std::ptrdiff_t>(i * m_count));
    }
  }

  const ModeSpace& space() const { return space_; }
  std::size_t dim() const { return dim_; }
  int n_modes() const { return space_.n_modes(); }

  std::span<const int> state(std::size_t index) const {
    if (index >= dim_) throw IndexOutOfRange("basis index " + std::to_string(index));
    return {occupations_.data() + index * n_modes(), static_cast<std::size_t>(n_modes())};
  }

  int occupation(std::size_t index, int mode) const { return occupations_[index * n_modes() + mode]; }

  std::size_t rank(std::span<const int> occ) const {
    if (!space_.admissible(occ)) throw InadmissibleState("state not admissible in mode space");
    return rank_unchecked(occ);
  }

  BasisState unrank(std::size_t index) const {
    const auto s = state(index);
    return BasisState(s.begin(), s.end());
  }

  /// Rank of an occupation vector that is known to be admissible.
  std::size_t rank_unchecked(std::span<const int> occ) const {
    std::size_t r = 0;
    long budget = space_.max_total();
    for (int m = n_modes() - 1; m >= 0; --m) {
      const int w = space_.weight(m);
      for (int v = 0; v < occ[m]; ++v) r += count_[m][budget - static_cast<long>(v) * w];
      budget -= static_cast<long>(occ[m]) * w;
    }
    return r;
  }

 private:
  BasisState unrank_slow(std::size_t index) const {
    BasisState s(n_modes(), 0);
    long budget = space_.max_total();
    for (int m = n_modes() - 1; m >= 0; --m) {
      const int w = space_.weight(m);
      int v = 0;
      while (true) {
        const std::uint64_t block = count_[m][budget - static_cast<long>(v) * w];
        if (index < block) break;
        index -= block;
        ++v;
      }
      s[m] = v;
      budget -= static_cast<long>(v) * w;
    }
    return s;
  }

  ModeSpace space_;
  std::vector<std::vector<std::uint64_t>> count_;
  std::size_t dim_ = 0;
  std::vector<int> occupations_;
};

/// Enumerates all admissible states of `space` in basis order.
inline std::vector<BasisState> enumerate_basis(const ModeSpace& space,
                                               std::size_t max_dim = kDefaultMaxDim) {
  const Basis basis(space, max_dim);
  std::vector<BasisState> out;
  out.reserve(basis.dim());
  for (std::size_t i = 0; i < basis.dim(); ++i) out.push_back(basis.unrank(i));
  return out;
}

// ---------------------------------------------------------------------------
// Sparse operators

struct Entry {
  std::size_t row;
  std::size_t col;
  cplx value;
};

/// Square complex sparse matrix. Duplicate entries are summed on
/// construction and entries below 1e-15 in magnitude are dropped.
class SparseOperator {
 public:
  using Matrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor, std::ptrdiff_t>;
  static constexpr double kDropTolerance = 1e-15;

  SparseOperator() = default;
  explicit SparseOperator(std::size_t dim) : m_(static_cast<std::ptrdiff_t>(dim), static_cast<std::ptrdiff_t>(dim)) {}

  SparseOperator(std::size_t dim, const std::vector<Entry>& entries) : SparseOperator(dim) {
    std::vector<Eigen::Triplet<cplx, std::ptrdiff_t>> t;
    t.reserve(entries.size());
    for (const auto& e : entries) {
      if (e.row >= dim || e.col >= dim) throw IndexOutOfRange("operator entry outside dimension");
      t.emplace_back(static_cast<std::ptrdiff_t>(e.row), static_cast<std::ptrdiff_t>(e.col), e.value);
    }
    m_.setFromTriplets(t.begin(), t.end());
    prune();
  }

  static SparseOperator identity(std::size_t dim) {
    SparseOperator op(dim);
    op.m_.setIdentity();
    return op;
  }

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  std::size_t non_zeros() const { return static_cast<std::size_t>(m_.nonZeros()); }
  const Matrix& matrix() const { return m_; }

  cplx coeff(std::size_t row, std::size_t col) const {
    return m_.coeff(static_cast<std::ptrdiff_t>(row), static_cast<std::ptrdiff_t>(col));
  }

  std::vector<Entry> entries() const {
    std::vector<Entry> out;
    out.reserve(non_zeros());
    for (std::ptrdiff_t r = 0; r < m_.outerSize(); ++r)
      for (Matrix::InnerIterator it(m_, r); it; ++it)
        out.push_back({static_cast<std::size_t>(it.row()), static_cast<std::size_t>(it.col()), it.value()});
    return out;
  }

  Eigen::MatrixXcd to_dense() const { return Eigen::MatrixXcd(m_); }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const {
    if (static_cast<std::size_t>(v.size()) != dim()) throw DimMismatch("operator/vector dimension mismatch");
    return m_ * v;
  }

  /// <u| X |v>
  cplx expectation(const Eigen::VectorXcd& v) const { return v.dot(apply(v)); }

  double max_abs() const {
    double mx = 0.0;
    for (std::ptrdiff_t r = 0; r < m_.outerSize(); ++r)
      for (Matrix::InnerIterator it(m_, r); it; ++it) mx = std::max(mx, std::abs(it.value()));
    return mx;
  }

  friend SparseOperator adjoint(const SparseOperator& x) {
    SparseOperator out(x.dim());
    out.m_ = x.m_.adjoint();
    return out;
  }

  friend SparseOperator add(const SparseOperator& x, const SparseOperator& y) {
    check_dims(x, y);
    SparseOperator out(x.dim());
    out.m_ = x.m_ + y.m_;
    out.prune();
    return out;
  }

  friend SparseOperator scale(const SparseOperator& x, cplx s) {
    SparseOperator out(x.dim());
    out.m_ = x.m_ * s;
    out.prune();
    return out;
  }

  /// X * Y (Y acts first).
  friend SparseOperator compose(const SparseOperator& x, const SparseOperator& y) {
    check_dims(x, y);
    SparseOperator out(x.dim());
    out.m_ = (x.m_ * y.m_).pruned();
    out.prune();
    return out;
  }

  friend SparseOperator operator+(const SparseOperator& x, const SparseOperator& y) { return add(x, y); }
  friend SparseOperator operator-(const SparseOperator& x, const SparseOperator& y) {
    return add(x, scale(y, -1.0));
  }
  friend SparseOperator operator*(const SparseOperator& x, const SparseOperator& y) { return compose(x, y); }
  friend SparseOperator operator*(cplx s, const SparseOperator& x) { return scale(x, s); }
  friend SparseOperator operator*(double s, const SparseOperator& x) { return scale(x, s); }

  SparseOperator& operator+=(const SparseOperator& y) {
    check_dims(*this, y);
    m_ += y.m_;
    prune();
    return *this;
  }

 private:
  static void check_dims(const SparseOperator& x, const SparseOperator& y) {
    if (x.dim() != y.dim())
      throw DimMismatch("operator dimensions " + std::to_string(x.dim()) + " and " + std::to_string(y.dim()));
  }

  void prune() {
    m_.prune([](std::ptrdiff_t, std::ptrdiff_t, const cplx& v) { return std::abs(v) >= kDropTolerance; });
    m_.makeCompressed();
  }

  Matrix m_;
};

/// [X, Y] = XY - YX
inline SparseOperator commutator(const SparseOperator& x, const SparseOperator& y) {
  return compose(x, y) - compose(y, x);
}

/// max |X - X^dagger| entrywise.
inline double hermiticity_defect(const SparseOperator& x) { return (x - adjoint(x)).max_abs(); }

enum class Direction { raise, lower };

/// Bosonic ladder operator on `mode`. Raising out of the admissible space is
/// dropped (hard truncation).
inline SparseOperator ladder(const Basis& basis, int mode, Direction direction) {
  if (mode < 0 || mode >= basis.n_modes()) throw IndexOutOfRange("mode " + std::to_string(mode));
  std::vector<Entry> entries;
  entries.reserve(basis.dim());
  std::vector<int> target(basis.n_modes());
  const auto& space = basis.space();
  for (std::size_t col = 0; col < basis.dim(); ++col) {
    const auto s = basis.state(col);
    const int n = s[mode];
    std::copy(s.begin(), s.end(), target.begin());
    double amp = 0.0;
    if (direction == Direction::lower) {
      if (n == 0) continue;
      target[mode] = n - 1;
      amp = std::sqrt(static_cast<double>(n));
    } else {
      target[mode] = n + 1;
      if (!space.admissible(target)) continue;
      amp = std::sqrt(static_cast<double>(n + 1));
    }
    entries.push_back({basis.rank_unchecked(target), col, amp});
  }
  return SparseOperator(basis.dim(), entries);
}

inline SparseOperator raise(const Basis& basis, int mode) { return ladder(basis, mode, Direction::raise); }
inline SparseOperator lower(const Basis& basis, int mode) { return ladder(basis, mode, Direction::lower); }

/// Diagonal occupation operator of `mode`.
inline SparseOperator number_op(const Basis& basis, int mode) {
  if (mode < 0 || mode >= basis.n_modes()) throw IndexOutOfRange("mode " + std::to_string(mode));
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const int n = basis.occupation(i, mode);
    if (n != 0) entries.push_back({i, i, static_cast<double>(n)});
  }
  return SparseOperator(basis.dim(), entries);
}

/// Diagonal operator sum_m weight_m n_m.
inline SparseOperator weighted_number_op(const Basis& basis) {
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const long w = basis.space().weighted_total(basis.state(i));
    if (w != 0) entries.push_back({i, i, static_cast<double>(w)});
  }
  return SparseOperator(basis.dim(), entries);
}

inline Eigen::VectorXcd basis_vector(const Basis& basis, std::span<const int> occ) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.dim()));
  v(static_cast<Eigen::Index>(basis.rank(occ))) = 1.0;
  return v;
}

}  // namespace polabh::fock

#endif  // POLABH_FOCK_HPP
