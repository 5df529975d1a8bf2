#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "elicit/check_report.hpp"
#include "elicit/properties.hpp"
#include "elicit/simplex.hpp"

namespace elicit {

struct SeparatorConfig {
  NormSpec norm = NormSpec::l1();
  Tolerances tol;
  int sample_count = 0;    // level-set points per level; 0 picks max(8, 2(n-1))
  int draw_budget = 10000;  // proposal draws per level
  std::uint64_t seed = 42;
};

/// Points found on {Gamma = r} together with the dimension of their affine span.
struct LevelSample {
  double r = 0.0;
  std::vector<Distribution> points;
  int spanning_rank = 0;
};

/// The normalized separating functional z'_r: zero on {Gamma = r}, positive
/// on {Gamma > r}, unit dual norm.
struct SeparatingFunctional {
  double r = 0.0;
  Vector z;
  NormSpec norm;
  double residual = 0.0;
  Distribution orientation_witness = Distribution::barycenter(2);
};

/// Range of levels the separator accepts: the image interior with
/// `interior_margin` of its width trimmed at both ends.
std::pair<double, double> accepted_levels(const PropertySpec& prop, const Tolerances& tol = {});

/// Throws LevelOutOfRange unless r is an accepted level.
void require_accepted_level(const PropertySpec& prop, double r, const Tolerances& tol = {});

/// Proposal used by every randomized search: half the draws are uniform on the
/// simplex, half are pulled towards a random vertex so that levels close to
/// the ends of the image still get straddling pairs.
Distribution propose(int n, Rng& rng);

/// Draws proposals until it can pair one point below r - tau_level with one
/// above r + tau_level.
class StraddleSampler {
 public:
  StraddleSampler(const PropertySpec& prop, double r, std::uint64_t seed, int budget, double tau_level);

  /// (below, above), or nullopt once the draw budget is spent.
  std::optional<std::pair<Distribution, Distribution>> next();
  int draws() const noexcept { return draws_; }

 private:
  const PropertySpec& prop_;
  double r_;
  Rng rng_;
  int budget_;
  double tau_;
  int draws_ = 0;
  std::vector<Distribution> below_;
  std::vector<Distribution> above_;
};

/// Bisection along [x_minus, x_plus] for a point at level r. Valid because
/// Gamma is monotone on segments; for any continuous Gamma it still keeps the
/// bracket. Throws NotStraddling, or NoConvergence when Gamma jumps over r.
Distribution level_cross(const PropertySpec& prop, const Distribution& x_minus, const Distribution& x_plus, double r,
                         const Tolerances& tol = {});

/// Affine rank of a point cloud, counting singular values of the differences
/// against rank_tol times the largest singular value of the points.
int affine_rank(const std::vector<Distribution>& points, double rank_tol);

/// Throws LevelOutOfRange, InsufficientSpan (span stalls below n-2), or
/// NoConvergence from level_cross.
LevelSample sample_level_set(const PropertySpec& prop, double r, int count, std::uint64_t seed,
                             const SeparatorConfig& config = {});

/// Null vector of the stacked level points (smallest right singular vector).
/// Throws RankDeficient when the numerical null space is more than one-dimensional.
Vector null_space_fit(const LevelSample& sample, double rank_tol = Tolerances{}.rank);

/// Orients z positive on a sampled point of {Gamma > r} and normalizes it in
/// the dual norm. When `sample` is given the residual over its points is recorded.
SeparatingFunctional orient_and_normalize(const Vector& z, const PropertySpec& prop, double r, const NormSpec& norm,
                                          std::uint64_t seed, const LevelSample* sample = nullptr,
                                          const SeparatorConfig& config = {});

/// sample_level_set -> null_space_fit -> orient_and_normalize. Throws
/// ResidualBreach when the fitted hyperplane does not contain the level
/// samples to within tol.residual.
SeparatingFunctional separate(const PropertySpec& prop, double r, const SeparatorConfig& config = {},
                              LevelSample* sample_out = nullptr);

/// Checks sign(<z, P>) == sign(Gamma(P) - r) on fresh samples; the band
/// |Gamma(P) - r| <= tau_level counts as zero and is skipped.
CheckReport verify_separation(const SeparatingFunctional& f, const PropertySpec& prop, int trials,
                              std::uint64_t seed, const Tolerances& tol = {});

/// sup over the sample of |<z, x>|. Zero exactly when z vanishes on the level set.
double psi_diagnostic(const SeparatingFunctional& f, const LevelSample& sample);

}  // namespace elicit
