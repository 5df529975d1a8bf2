#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "elicit/family.hpp"

namespace elicit {

/// Positive weight w(r) in the Osband integral.
struct Weight {
  std::string id;
  std::function<double(double)> fn;

  static Weight constant(double c);
  /// w(s) = a + b s
  static Weight affine(double a, double b);
};

/// Grid-discretized scoring function S(r_k, omega_i).
///
/// Built so that d/dr S(r, .) = -w(r) z'_r. Since <z'_r, P> > 0 exactly when
/// Gamma(P) > r, the expected score E_P S(r, Y) = <S(r, .), P> decreases while
/// r < Gamma(P) and increases afterwards, so it is minimized at Gamma(P).
struct ScoringRule {
  std::vector<double> levels;
  Eigen::MatrixXd table;        // levels.size() x n
  std::vector<double> weights;  // w(levels[k])
  std::string weight_id;
  double base_level = 0.0;  // grid node where S vanishes
  std::string family_ref;

  std::size_t node_index(double r) const;
  double step() const { return levels[1] - levels[0]; }
};

/// S(r_k, .) = -int_{r0}^{r_k} w(s) z'_s ds by the composite trapezoid rule.
/// r0 (default: middle of the grid) is snapped to the nearest node so that
/// S vanishes there exactly. Throws NonpositiveWeight, BaseLevelOutOfRange.
ScoringRule synthesize(const SeparatingFamily& fam, const Weight& w = Weight::constant(1.0),
                       std::optional<double> r0 = std::nullopt);

/// sum_i P_i S(r, omega_i) with r looked up at the nearest grid node.
double expected_score(const ScoringRule& rule, const Distribution& P, double r);

/// Grid node minimizing the expected score (first one on ties).
std::size_t argmin_node(const ScoringRule& rule, const Distribution& P);

struct ConsistencyFailure {
  Distribution P;
  double property_value = 0.0;
  double argmin_level = 0.0;
};

struct ConsistencyReport {
  int trials = 0;
  int matches = 0;
  double max_level_error = 0.0;
  double grid_step = 0.0;
  std::vector<ConsistencyFailure> failures;

  bool all_match() const { return matches == trials; }
};

/// Random P with Gamma(P) on the grid range; a trial matches when the grid
/// argmin lies within 1.5 grid steps of Gamma(P).
ConsistencyReport consistency_check(const ScoringRule& rule, const PropertySpec& prop, int trials, std::uint64_t seed,
                                    int threads = 1);

struct FirstOrderReport {
  int trials = 0;
  double max_relative_error = 0.0;
  double max_abs_error = 0.0;
  bool pass = false;
};

/// Central difference of r -> E_P S(r, Y) at interior nodes against
/// -w(r) <z'_r, P>. The error for one P is scaled by max_k |w(r_k) <z'_k, P>|
/// (absolute scale tol.residual when that vanishes). Passes at <= 1e-2.
FirstOrderReport first_order_check(const ScoringRule& rule, const SeparatingFamily& fam, const PropertySpec& prop,
                                   int trials, std::uint64_t seed);

/// Header r,S_omega_1..S_omega_n; %.17g.
std::string scoring_csv(const ScoringRule& rule);

}  // namespace elicit
