#include "elicit/family.hpp"

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "test_util.hpp"

namespace elicit {
namespace {

using testing::dist;
using testing::error_of;

TEST(LevelGrid, UniformOverTrimmedInterior) {
  const auto g = level_grid(PropertySpec::mean({0, 1}), 5);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_DOUBLE_EQ(g.front(), 1e-3);
  EXPECT_DOUBLE_EQ(g.back(), 1 - 1e-3);
  for (std::size_t k = 1; k < g.size(); ++k) EXPECT_NEAR(g[k] - g[k - 1], (1 - 2e-3) / 4, 1e-15);
}

TEST(BuildFamily, MeanMatchesClosedForm) {
  const SeparatingFamily fam = build_family(PropertySpec::mean({0, 1}), 9);
  ASSERT_EQ(fam.functionals.size(), 9u);
  ASSERT_EQ(fam.continuity_profile.size(), 8u);
  for (const auto& f : fam.functionals)
    EXPECT_NEAR((f.z - oracle::mean01_functional(f.r)).lpNorm<Eigen::Infinity>(), 0.0, 1e-9);
}

TEST(BuildFamily, IndependentOfThreads) {
  const auto prop = PropertySpec::expectile({0, 1, 2}, 0.6);
  FamilyConfig one;
  FamilyConfig four;
  four.threads = 4;
  const SeparatingFamily a = build_family(prop, 12, one);
  const SeparatingFamily b = build_family(prop, 12, four);
  for (std::size_t k = 0; k < a.functionals.size(); ++k) EXPECT_EQ(a.functionals[k].z, b.functionals[k].z);
}

TEST(BuildFamily, ErrorsCarryLevel) {
  try {
    build_family(PropertySpec::variance({0, 1, 2}), 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ResidualBreach);
    EXPECT_TRUE(e.level().has_value());
  }
}

TEST(SignFlipped, NegatesEveryFunctional) {
  const SeparatingFamily fam = build_family(PropertySpec::mean({0, 1, 2}), 4);
  const SeparatingFamily flipped = sign_flipped(fam);
  for (std::size_t k = 0; k < fam.functionals.size(); ++k) EXPECT_EQ(flipped.functionals[k].z, -fam.functionals[k].z);
}

TEST(ContinuityReport, MeanShrinksWithStep) {
  const SeparatingFamily fam = build_family(PropertySpec::mean({0, 1, 3}), 8);
  const ContinuityReport rep = continuity_report(fam, 3);
  EXPECT_EQ(rep.grid_sizes, (std::vector<int>{8, 16, 32, 64}));
  EXPECT_TRUE(rep.strictly_decreasing);
  EXPECT_TRUE(rep.pass);
}

TEST(DistanceToKernel, MatchesEuclideanProjection) {
  Rng rng(31);
  SeparatorConfig cfg;
  cfg.norm = NormSpec::l2();
  const auto prop = PropertySpec::mean({0, 1, 2, 4});
  const SeparatingFunctional f = separate(prop, 1.5, cfg);
  for (int i = 0; i < 200; ++i) {
    const Distribution x = sample_distribution(4, rng);
    EXPECT_NEAR(distance_to_kernel(x, f), oracle::projection_distance(x.weights(), f.z), 1e-9);
  }
}

TEST(GeometricLevels, ApproachFromBothSides) {
  const auto prop = PropertySpec::mean({0, 1});
  const auto up = geometric_levels(prop, 0.5, 6, 1);
  const auto down = geometric_levels(prop, 0.5, 6, -1);
  ASSERT_EQ(up.size(), 6u);
  EXPECT_DOUBLE_EQ(up[1], 0.75);
  EXPECT_DOUBLE_EQ(down[2], 0.375);
  for (std::size_t k = 1; k < up.size(); ++k) EXPECT_LT(up[k], up[k - 1]);
}

TEST(G5, MeanConverges) {
  const auto prop = PropertySpec::mean({0, 1, 2});
  const G5Report rep = g5_convergence_check(prop, 1.0, geometric_levels(prop, 1.0, 12, 1), dist({0.6, 0.3, 0.1}));
  EXPECT_TRUE(rep.pass);
  EXPECT_LE(rep.gaps.back(), 1e-3);
}

TEST(FamilyCsv, Format) {
  const SeparatingFamily fam = build_family(PropertySpec::mean({0, 1}), 3);
  std::istringstream in(family_csv(fam));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "r,z_1,z_2,residual,jump_to_next");
  int rows = 0;
  std::string last;
  while (std::getline(in, line)) {
    ++rows;
    last = line;
  }
  EXPECT_EQ(rows, 3);
  EXPECT_EQ(last.back(), ',');
}

}  // namespace
}  // namespace elicit
