#pragma once

#include <string>
#include <vector>

#include "elicit/properties.hpp"
#include "elicit/separator.hpp"

namespace elicit {

struct FamilyConfig {
  SeparatorConfig separator;
  int threads = 1;
};

/// Normalized separating functionals on a strictly increasing level grid.
/// continuity_profile[k] = ||z_{k+1} - z_k||_q.
struct SeparatingFamily {
  PropertySpec prop;
  std::vector<double> levels;
  std::vector<SeparatingFunctional> functionals;
  NormSpec norm;
  std::vector<double> continuity_profile;
  FamilyConfig config;

  double max_jump() const;
};

/// grid_size uniform levels spanning the margin-trimmed image interior.
std::vector<double> level_grid(const PropertySpec& prop, int grid_size, const Tolerances& tol = {});

/// separate() at every grid level; level k uses seed derive_seed(seed, k), so
/// the result does not depend on the thread count. Separator errors are
/// rethrown tagged with their level.
SeparatingFamily build_family(const PropertySpec& prop, int grid_size, const FamilyConfig& config = {});

/// Same family with every functional negated. Only useful as a negative control.
SeparatingFamily sign_flipped(SeparatingFamily fam);

struct ContinuityReport {
  std::vector<int> grid_sizes;
  std::vector<double> steps;
  std::vector<double> max_jumps;
  double lipschitz = 0.0;  // least-squares fit of max_jump = L * step
  bool strictly_decreasing = false;
  bool within_lipschitz = false;
  bool pass = false;
};

/// Rebuilds the family at N, 2N, ..., 2^refinements N levels and tests that
/// the largest adjacent jump shrinks with the step: strictly decreasing, and
/// the finest jump within 2 L step for the fitted L.
ContinuityReport continuity_report(const SeparatingFamily& fam, int refinements);

/// |<z, x>|: for ||z||_q = 1 this is the p-norm distance from x to ker z.
double distance_to_kernel(const Distribution& x, const SeparatingFunctional& f);

/// r + side * (hi - lo) * 2^-k for k = 1..count, clipped to the accepted levels.
std::vector<double> geometric_levels(const PropertySpec& prop, double r, int count, int side = 1,
                                     const Tolerances& tol = {});

struct G5Report {
  double r = 0.0;
  double limit_distance = 0.0;  // d(x, span{Gamma = r})
  std::vector<double> levels;
  std::vector<double> distances;  // d(x, span{Gamma = r_k})
  std::vector<double> gaps;       // |distances[k] - limit_distance|
  double modulus = 0.0;           // fitted Lipschitz constant of r -> z_r times the final step
  bool pass = false;
};

/// Distance of x to the level-set spans along r_k -> r. Passes when the final
/// gap is at most 10x the continuity modulus at the final step (plus
/// tol.residual) and no larger than the first gap.
G5Report g5_convergence_check(const PropertySpec& prop, double r, const std::vector<double>& levels,
                              const Distribution& x, const FamilyConfig& config = {});

/// Header r,z_1..z_n,residual,jump_to_next; %.17g throughout. The last row's
/// jump_to_next is empty.
std::string family_csv(const SeparatingFamily& fam);

}  // namespace elicit
