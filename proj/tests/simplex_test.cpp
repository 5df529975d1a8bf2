#include "elicit/simplex.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "elicit/error.hpp"
#include "test_util.hpp"

namespace elicit {
namespace {

using testing::error_of;
using testing::vec;

TEST(MakeDistribution, AcceptsUniformAndVertex) {
  EXPECT_EQ(make_distribution(vec({0.5, 0.5})).weights(), vec({0.5, 0.5}));
  EXPECT_EQ(make_distribution(vec({1.0, 0.0})).weights(), vec({1.0, 0.0}));
}

TEST(MakeDistribution, RejectsBadWeights) {
  EXPECT_EQ(error_of([] { make_distribution(vec({0.6, 0.6})); }), Errc::SumNotOne);
  EXPECT_EQ(error_of([] { make_distribution(vec({1.5, -0.5})); }), Errc::NegativeWeight);
  EXPECT_EQ(error_of([] { make_distribution(vec({NAN, 1.0})); }), Errc::NonFinite);
  EXPECT_EQ(error_of([] { make_distribution(vec({1.0})); }), Errc::InvalidSpace);
}

TEST(MakeDistribution, ErrorNamesIndex) {
  try {
    make_distribution(vec({0.5, 0.7, -0.2}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("weight 2"), std::string::npos);
  }
}

TEST(OutcomeSpace, RejectsDegenerateSpaces) {
  EXPECT_EQ(error_of([] { OutcomeSpace::of_size(1); }), Errc::InvalidSpace);
  EXPECT_EQ(error_of([] { OutcomeSpace::with_labels({0.0, 0.0}); }), Errc::InvalidSpace);
  EXPECT_EQ(OutcomeSpace::with_labels({0.0, 1.0, 3.0}).dim(), 3);
}

TEST(NormSpec, DualExponents) {
  EXPECT_TRUE(std::isinf(NormSpec::l1().q));
  EXPECT_EQ(NormSpec::linf().q, 1.0);
  EXPECT_DOUBLE_EQ(NormSpec::from_p(3.0).q, 1.5);
  EXPECT_EQ(error_of([] { NormSpec::from_p(0.5); }), Errc::InvalidParameter);
}

TEST(DualNorm, Examples) {
  EXPECT_EQ(dual_norm(vec({0, 2}), NormSpec::l1()), 2.0);
  EXPECT_EQ(dual_norm(vec({3, 4}), NormSpec::l2()), 5.0);
  EXPECT_EQ(dual_norm(vec({-1, 3}), NormSpec::l1()), 3.0);
  EXPECT_EQ(dual_norm(vec({-1, 3}), NormSpec::linf()), 4.0);
}

TEST(NormalizeDual, Examples) {
  EXPECT_EQ(normalize_dual(vec({0, 2}), NormSpec::l1()), vec({0, 1}));
  const Vector a = normalize_dual(vec({-1, 3}), NormSpec::l1());
  EXPECT_DOUBLE_EQ(a[0], -1.0 / 3.0);
  EXPECT_DOUBLE_EQ(a[1], 1.0);
  const Vector b = normalize_dual(vec({3, 4}), NormSpec::l2());
  EXPECT_DOUBLE_EQ(b[0], 0.6);
  EXPECT_DOUBLE_EQ(b[1], 0.8);
  EXPECT_EQ(error_of([] { normalize_dual(vec({0, 0}), NormSpec::l1()); }), Errc::ZeroVector);
}

TEST(NormalizeDual, UnitDualNormProperty) {
  Rng rng(7);
  for (const NormSpec& spec : {NormSpec::l1(), NormSpec::l2(), NormSpec::linf(), NormSpec::from_p(3.0)}) {
    for (int i = 0; i < 1000; ++i) {
      Vector z(2 + static_cast<int>(rng.index(5)));
      for (auto& v : z) v = 4.0 * rng.uniform() - 2.0;
      EXPECT_NEAR(dual_norm(normalize_dual(z, spec), spec), 1.0, 1e-12);
    }
  }
}

TEST(DualNorm, HolderInequality) {
  Rng rng(11);
  for (const NormSpec& spec : {NormSpec::l1(), NormSpec::l2(), NormSpec::linf()}) {
    for (int i = 0; i < 1000; ++i) {
      const int n = 2 + static_cast<int>(rng.index(5));
      Vector z(n), x(n);
      for (auto& v : z) v = 4.0 * rng.uniform() - 2.0;
      for (auto& v : x) v = 4.0 * rng.uniform() - 2.0;
      EXPECT_LE(std::abs(z.dot(x)), dual_norm(z, spec) * lp_norm(x, spec.p) * (1 + 1e-12));
    }
  }
}

TEST(ConeDecompose, Examples) {
  const ConeSplit a = cone_decompose(vec({1, -2}), NormSpec::l1());
  EXPECT_EQ(a.pos, vec({1, 0}));
  EXPECT_EQ(a.neg, vec({0, 2}));
  EXPECT_EQ(a.bound_K, 1.0);
  EXPECT_LE(lp_norm(a.pos, 1) + lp_norm(a.neg, 1), a.bound_K * 3.0);

  const ConeSplit zero = cone_decompose(vec({0, 0}), NormSpec::l2());
  EXPECT_EQ(zero.pos, vec({0, 0}));
  EXPECT_EQ(zero.neg, vec({0, 0}));

  // Equality case at p = 2: 1 + 1 = 2^{1/2} * sqrt(2).
  const ConeSplit eq = cone_decompose(vec({1, -1}), NormSpec::l2());
  EXPECT_DOUBLE_EQ(eq.bound_K, std::sqrt(2.0));
  EXPECT_NEAR(lp_norm(eq.pos, 2) + lp_norm(eq.neg, 2), eq.bound_K * std::sqrt(2.0), 1e-15);
}

TEST(ConeDecompose, ReconstructionAndBoundProperty) {
  Rng rng(3);
  for (const NormSpec& spec : {NormSpec::l1(), NormSpec::l2()}) {
    for (int i = 0; i < 1000; ++i) {
      Vector h(2 + static_cast<int>(rng.index(6)));
      for (auto& v : h) v = 2.0 * rng.uniform() - 1.0;
      const ConeSplit s = cone_decompose(h, spec);
      EXPECT_EQ(s.pos - s.neg, h);
      EXPECT_GE(s.pos.minCoeff(), 0.0);
      EXPECT_GE(s.neg.minCoeff(), 0.0);
      EXPECT_LE(lp_norm(s.pos, spec.p) + lp_norm(s.neg, spec.p), s.bound_K * lp_norm(h, spec.p) * (1 + 1e-12));
    }
  }
}

TEST(Segment, MidpointAndEndpoints) {
  const Distribution x0 = Distribution::vertex(2, 0);
  const Distribution x1 = Distribution::vertex(2, 1);
  EXPECT_EQ(segment(x0, x1, 0.5).weights(), vec({0.5, 0.5}));

  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const Distribution a = sample_distribution(5, rng);
    const Distribution b = sample_distribution(5, rng);
    EXPECT_TRUE(segment(a, b, 0.0) == a);
    EXPECT_TRUE(segment(a, b, 1.0) == b);
    const Distribution m = segment(a, b, rng.uniform());
    EXPECT_NEAR(m.weights().sum(), 1.0, 1e-12);
    EXPECT_GE(m.weights().minCoeff(), 0.0);
  }
}

TEST(Segment, RejectsBadParameter) {
  const Distribution x = Distribution::barycenter(3);
  EXPECT_EQ(error_of([&] { segment(x, x, 1.5); }), Errc::TOutOfRange);
  EXPECT_EQ(error_of([&] { segment(x, x, -0.1); }), Errc::TOutOfRange);
  EXPECT_EQ(error_of([&] { segment(x, Distribution::barycenter(2), 0.5); }), Errc::DimensionMismatch);
}

TEST(SampleDistribution, ShapeAndDeterminism) {
  const OutcomeSpace two = OutcomeSpace::of_size(2);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Distribution d = sample_distribution(two, seed);
    EXPECT_GE(d[0], 0.0);
    EXPECT_LE(d[0], 1.0);
    EXPECT_NEAR(d[0] + d[1], 1.0, 1e-15);
    EXPECT_TRUE(d == sample_distribution(two, seed));
  }
}

TEST(SampleDistribution, EmpiricalMeanIsBarycenter) {
  Rng rng(2024);
  Vector acc = Vector::Zero(3);
  const int count = 10000;
  for (int i = 0; i < count; ++i) acc += sample_distribution(3, rng).weights();
  acc /= count;
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(acc[i], 1.0 / 3.0, 0.02);
}

TEST(SampleDistribution, MarginalMatchesFlatDirichlet) {
  // Under Dir(1,1,1) the first coordinate has density 2(1-x): P(w_0 <= 1/2) = 3/4.
  Rng rng(99);
  int below = 0;
  const int count = 20000;
  for (int i = 0; i < count; ++i) below += sample_distribution(3, rng)[0] <= 0.5;
  EXPECT_NEAR(static_cast<double>(below) / count, 0.75, 0.015);
}

}  // namespace
}  // namespace elicit
