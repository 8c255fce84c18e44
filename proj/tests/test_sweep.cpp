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

#include <cmath>
#include <vector>

#include "polabh/sweep.hpp"

namespace {

using namespace polabh;
using namespace polabh::sweep;
using models::LatticeSpec;
using models::Species;

TEST(Grids, EndpointsAndSpacing) {
  const auto g = log_grid(0.1, 1000.0, 5);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_EQ(g.front(), 0.1);
  EXPECT_EQ(g.back(), 1000.0);
  EXPECT_NEAR(g[2], 10.0, 1e-12);
  const auto l = linear_grid(-1.0, 1.0, 3);
  EXPECT_EQ(l[1], 0.0);
  EXPECT_THROW(log_grid(0.0, 1.0, 3), ConfigError);
  EXPECT_THROW(linear_grid(1.0, 1.0, 3), ConfigError);
}

TEST(SweepOmega, Fig2Trends) {
  const auto p = params::fig2_params(1.0);
  const auto grid = log_grid(0.1, 1000.0, 201);
  const auto r = sweep_omega(p, grid, 0.1, 4);
  ASSERT_EQ(r.rows.size(), grid.size());
  const double b2_over_delta_floor = p.collective_g() * p.collective_g() / p.delta;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto& row = r.rows[i];
    ASSERT_TRUE(row.effective.has_value()) << row.error;
    const double w = grid[i];
    EXPECT_NEAR(row.mu_gap, b2_over_delta_floor + w * w / p.delta, 1e-12);
    if (i == 0) continue;
    const auto& prev = *r.rows[i - 1].effective;
    // Photon weight moves from c to b as Omega grows.
    EXPECT_GT(std::abs(row.effective->j_bb), std::abs(prev.j_bb));
    EXPECT_LT(std::abs(row.effective->j_cc), std::abs(prev.j_cc));
  }
  ASSERT_TRUE(r.crossover.has_value());
  const double g = p.collective_g();
  EXPECT_NEAR(r.crossover->omega_low / g, 0.167062978204150, 1e-8);
  EXPECT_NEAR(r.crossover->omega_high / g, 1.40894245518400, 1e-8);
}

TEST(SweepOmega, ThreadCountDoesNotChangeResults) {
  const auto p = params::fig2_params(1.0);
  const auto grid = log_grid(0.1, 1000.0, 97);
  const auto a = sweep_omega(p, grid, 0.1, 1);
  const auto b = sweep_omega(p, grid, 0.1, 8);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_EQ(a.rows[i].effective->u_bc, b.rows[i].effective->u_bc);
    EXPECT_EQ(a.rows[i].failed_conditions, b.rows[i].failed_conditions);
  }
}

TEST(SweepOmega, DegenerateRowsAreFlagged) {
  // g = 1, Omega = 1, delta = 4: Delta = -1 sits exactly on the pole Delta + 2B^2/delta = 0.
  params::PhysicalParams p;
  p.n_atoms = 1;
  p.delta = 4.0;
  p.big_delta = -1.0;
  const auto r = sweep_omega(p, {0.5, 1.0, 2.0});
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_TRUE(r.rows[0].effective.has_value());
  EXPECT_FALSE(r.rows[1].effective.has_value());
  EXPECT_NE(r.rows[1].error.find("DegenerateDetuning"), std::string::npos);
  EXPECT_DOUBLE_EQ(r.rows[1].mu_gap, 0.5);
  EXPECT_TRUE(r.rows[2].effective.has_value());
  EXPECT_THROW(sweep_omega(p, {1.0, 1.0}), ConfigError);
  EXPECT_THROW(sweep_omega(p, {-1.0}), ConfigError);
}

TEST(Compare, SingleUncoupledSiteAgrees) {
  auto p = params::fig3_params();
  const auto r = compare_full_vs_effective(p, LatticeSpec::chain(1), {{Species::b, 0}}, 50.0, 20);
  ASSERT_EQ(r.cavities.size(), 1u);
  EXPECT_LT(r.max_abs_diff(), 1e-3);
  EXPECT_LT(r.full_charge_drift, 1e-10);
}

TEST(Compare, RejectsBarePolaritonPlacements) {
  EXPECT_THROW(compare_full_vs_effective(params::fig3_params(), LatticeSpec::chain(1), {{Species::p_plus, 0}}, 1.0, 2),
               ConfigError);
}

// Three-cavity run with the Fig. 3 caption parameters. Reference envelope from
// an independent Python/NumPy propagation of the same bosonized models.
TEST(Compare, ThreeCavityDynamics) {
  const auto p = params::fig3_params();
  const auto r = compare_full_vs_effective(p, LatticeSpec::chain(3), {{Species::b, 0}, {Species::b, 1}, {Species::c, 2}},
                                           600.0, 600);
  EXPECT_TRUE(r.validity_pass);
  EXPECT_TRUE(r.pair_conversion_included);
  ASSERT_EQ(r.cavities.size(), 3u);
  EXPECT_NEAR(*std::max_element(r.cavities[0].max_abs_diff.begin(), r.cavities[0].max_abs_diff.end()), 0.0074, 1e-3);
  EXPECT_LT(r.full_charge_drift, 1e-8);
  EXPECT_LT(r.effective_charge_drift, 1e-8);
  EXPECT_LT(r.full_norm_drift, 1e-10);
  // Initial populations: b in cavities 1 and 2, c in cavity 3.
  EXPECT_NEAR(r.cavities[0].full[0].front(), 1.0, 1e-12);
  EXPECT_NEAR(r.cavities[2].full[1].front(), 1.0, 1e-12);
  EXPECT_NEAR(r.cavities[2].effective[1].front(), 1.0, 1e-12);
}

}  // namespace
