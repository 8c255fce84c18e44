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


#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <random>
#include <set>
#include <vector>

#include "polabh/fock.hpp"

namespace {

using namespace polabh;
using namespace polabh::fock;

std::size_t binom(int n, int k) {
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}

// Brute-force count over the full occupation box.
std::size_t brute_count(const ModeSpace& space) {
  std::vector<int> occ(space.n_modes(), 0);
  std::size_t count = 0;
  while (true) {
    if (space.admissible(occ)) ++count;
    int m = 0;
    while (m < space.n_modes()) {
      if (++occ[m] <= space.max_total()) break;
      occ[m] = 0;
      ++m;
    }
    if (m == space.n_modes()) break;
  }
  return count;
}

TEST(Basis, UniformDimensionIsBinomial) {
  for (int n = 1; n <= 6; ++n)
    for (int k = 0; k <= 5; ++k) EXPECT_EQ(Basis(ModeSpace::uniform(n, k)).dim(), binom(n + k, k)) << n << " " << k;
  // Effective three-cavity model with at most three particles.
  EXPECT_EQ(Basis(ModeSpace::uniform(6, 3)).dim(), 84u);
}

TEST(Basis, WeightedDimensionMatchesBruteForce) {
  const ModeSpace full({1, 1, 1, 2, 1, 1, 1, 2, 1, 1, 1, 2}, 3);
  EXPECT_EQ(Basis(full).dim(), 250u);
  EXPECT_EQ(Basis(full).dim(), brute_count(full));
  const ModeSpace capped({1, 2, 3}, 7, {2, -1, 1});
  EXPECT_EQ(Basis(capped).dim(), brute_count(capped));
}

TEST(Basis, RankUnrankIsABijection) {
  for (const auto& space : {ModeSpace::uniform(5, 4), ModeSpace({1, 1, 1, 2, 1, 1, 1, 2}, 4), ModeSpace({2, 1, 3}, 9, {-1, 3, 2})}) {
    const Basis basis(space);
    std::set<std::vector<int>> seen;
    for (std::size_t i = 0; i < basis.dim(); ++i) {
      const auto s = basis.unrank(i);
      EXPECT_TRUE(space.admissible(s));
      EXPECT_EQ(basis.rank(s), i);
      seen.insert(s);
    }
    EXPECT_EQ(seen.size(), basis.dim());
    EXPECT_EQ(seen.size(), brute_count(space));
  }
}

TEST(Basis, ColexOrdering) {
  const Basis basis(ModeSpace::uniform(3, 2));
  EXPECT_EQ(basis.unrank(0), (BasisState{0, 0, 0}));
  EXPECT_EQ(basis.unrank(1), (BasisState{1, 0, 0}));
  EXPECT_EQ(basis.unrank(2), (BasisState{2, 0, 0}));
  EXPECT_EQ(basis.unrank(3), (BasisState{0, 1, 0}));
  EXPECT_EQ(basis.unrank(basis.dim() - 1), (BasisState{0, 0, 2}));
}

TEST(Basis, Errors) {
  const Basis basis(ModeSpace::uniform(3, 2));
  EXPECT_THROW(basis.rank(std::vector<int>{1, 1, 1}), InadmissibleState);
  EXPECT_THROW(basis.rank(std::vector<int>{-1, 0, 0}), InadmissibleState);
  EXPECT_THROW(basis.rank(std::vector<int>{0, 0}), InadmissibleState);
  EXPECT_THROW(basis.unrank(basis.dim()), IndexOutOfRange);
  EXPECT_THROW(Basis(ModeSpace::uniform(30, 30), 1000), DimensionOverflow);
  EXPECT_THROW(ModeSpace({1, 0}, 3), ConfigError);
}

TEST(EnumerateBasis, MatchesBasisOrder) {
  const ModeSpace space({1, 2}, 5);
  const auto states = enumerate_basis(space);
  const Basis basis(space);
  ASSERT_EQ(states.size(), basis.dim());
  for (std::size_t i = 0; i < states.size(); ++i) EXPECT_EQ(basis.rank(states[i]), i);
}

TEST(Ladder, MatrixElements) {
  const Basis basis(ModeSpace::uniform(2, 3));
  const auto a = lower(basis, 0);
  const auto ad = raise(basis, 0);
  const auto i2 = basis.rank(std::vector<int>{2, 1});
  const auto i1 = basis.rank(std::vector<int>{1, 1});
  EXPECT_NEAR(std::abs(a.coeff(i1, i2) - std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(ad.coeff(i2, i1) - std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_LT((adjoint(a) - ad).max_abs(), 1e-15);
  // Raising out of the truncated space is dropped.
  EXPECT_EQ(ad.apply(basis_vector(basis, std::vector<int>{2, 1})).norm(), 0.0);
}

TEST(Ladder, CommutatorIsIdentityBelowTruncation) {
  const Basis basis(ModeSpace({1, 1, 2}, 4));
  for (int m = 0; m < 3; ++m) {
    const auto c = commutator(lower(basis, m), raise(basis, m));
    for (std::size_t i = 0; i < basis.dim(); ++i) {
      auto s = basis.unrank(i);
      s[m] += 1;
      if (!basis.space().admissible(s)) continue;
      EXPECT_NEAR(std::abs(c.coeff(i, i) - 1.0), 0.0, 1e-14);
    }
    for (int n = 0; n < 3; ++n) {
      if (n == m) continue;
      const auto c_mn = commutator(lower(basis, m), raise(basis, n));
      for (std::size_t i = 0; i < basis.dim(); ++i) {
        const auto s = basis.unrank(i);
        if (basis.space().weighted_total(s) + basis.space().weight(n) > basis.space().max_total()) continue;
        EXPECT_LT(c_mn.apply(basis_vector(basis, s)).norm(), 1e-14);
      }
      EXPECT_LT(commutator(lower(basis, m), lower(basis, n)).max_abs(), 1e-15);
    }
  }
}

TEST(Ladder, NumberOperatorIsRaiseTimesLower) {
  const Basis basis(ModeSpace({1, 2, 1}, 5));
  for (int m = 0; m < 3; ++m) EXPECT_LT((raise(basis, m) * lower(basis, m) - number_op(basis, m)).max_abs(), 1e-14);
  SparseOperator w = SparseOperator(basis.dim());
  for (int m = 0; m < 3; ++m) w += static_cast<double>(basis.space().weight(m)) * number_op(basis, m);
  EXPECT_LT((w - weighted_number_op(basis)).max_abs(), 1e-14);
}

TEST(SparseOperator, MatchesDenseAlgebra) {
  std::mt19937_64 rng(19);
  std::normal_distribution<double> n(0.0, 1.0);
  const std::size_t dim = 12;
  std::vector<Entry> ex, ey;
  for (int k = 0; k < 40; ++k) {
    ex.push_back({rng() % dim, rng() % dim, cplx(n(rng), n(rng))});
    ey.push_back({rng() % dim, rng() % dim, cplx(n(rng), n(rng))});
  }
  const SparseOperator x(dim, ex), y(dim, ey);
  const Eigen::MatrixXcd dx = x.to_dense(), dy = y.to_dense();
  EXPECT_LT(((x * y).to_dense() - dx * dy).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(((x + y).to_dense() - (dx + dy)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((adjoint(x).to_dense() - dx.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((commutator(x, y).to_dense() - (dx * dy - dy * dx)).cwiseAbs().maxCoeff(), 1e-12);
  Eigen::VectorXcd v = Eigen::VectorXcd::Random(dim);
  EXPECT_LT((x.apply(v) - dx * v).norm(), 1e-13);
  EXPECT_NEAR(std::abs(x.expectation(v) - v.dot(dx * v)), 0.0, 1e-12);
  EXPECT_NEAR(hermiticity_defect(x + adjoint(x)), 0.0, 1e-15);
  EXPECT_THROW(x.apply(Eigen::VectorXcd::Zero(3)), DimMismatch);
  EXPECT_THROW(x + SparseOperator(3), DimMismatch);
}

TEST(SparseOperator, DuplicatesSumAndZerosArePruned) {
  const SparseOperator x(3, {{0, 1, 2.0}, {0, 1, -2.0}, {1, 2, 1.0}, {1, 2, 0.5}});
  EXPECT_EQ(x.non_zeros(), 1u);
  EXPECT_DOUBLE_EQ(x.coeff(1, 2).real(), 1.5);
  EXPECT_THROW(SparseOperator(2, {{2, 0, 1.0}}), IndexOutOfRange);
}

}  // namespace
