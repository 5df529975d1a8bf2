#pragma once

#include <cstdint>

#include "elicit/check_report.hpp"
#include "elicit/properties.hpp"
#include "elicit/separator.hpp"

namespace elicit {

struct CheckConfig {
  int trials = 200;
  int grid = 17;  // points per segment
  std::uint64_t seed = 42;
  double eps = 0.01;  // G2 ball radius
  NormSpec norm = NormSpec::l1();
  Tolerances tol;
  int threads = 1;
};

/// Gamma on the grid t_k = k/(m-1) of [x0, x1]. Fails when some grid point
/// sits strictly above both or strictly below both of two other grid points
/// around it (beyond tau_level); consecutive triples are reported first.
CheckReport check_segment_monotone(const PropertySpec& prop, const Distribution& x0, const Distribution& x1, int m,
                                   const Tolerances& tol = {});

/// check_segment_monotone on `trials` seeded uniform segments. The witness is
/// taken from the lowest failing trial index, independent of thread count.
CheckReport check_quasi_monotone(const PropertySpec& prop, int trials, int m, std::uint64_t seed, int threads = 1,
                                 const Tolerances& tol = {});

/// Midpoints of pairs of level points must stay on the level. Inconclusive
/// when no level points can be reached (e.g. Gamma jumps over r).
CheckReport check_level_convexity(const PropertySpec& prop, double r, int pairs, std::uint64_t seed,
                                  const Tolerances& tol = {});

/// Strict quasi-monotonicity on B0: along segments whose endpoint levels
/// differ and lie in I, interior grid values lie strictly between them.
CheckReport check_strict_on_b0(const PropertySpec& prop, int trials, int m, std::uint64_t seed,
                               const Tolerances& tol = {});

/// Searches the eps-sphere (ambient p-norm) around x for strictly lower and
/// strictly higher levels. Throws InvalidParameter if Gamma(x) != r.
CheckReport check_g2(const PropertySpec& prop, double r, const Distribution& x, double eps, int probes,
                     std::uint64_t seed, const NormSpec& norm = NormSpec::l1(), const Tolerances& tol = {});

/// Empirical continuity modulus at delta = 1e-2, 1e-3, 1e-4 from random close
/// pairs and from jump localization by bisection; passes when the modulus at
/// least halves per decade or drops below tau_level.
CheckReport check_continuity(const PropertySpec& prop, int trials, std::uint64_t seed,
                             const NormSpec& norm = NormSpec::l1(), int threads = 1, const Tolerances& tol = {});

struct ReplayResult {
  bool values_reproduced = false;
  bool violation_reproduced = false;
  double max_value_drift = 0.0;
  std::string detail;
};

/// Re-evaluates Gamma at a failing report's witness and re-checks the
/// violated inequality from scratch.
ReplayResult replay_witness(const PropertySpec& prop, const CheckReport& report, const Tolerances& tol = {});

}  // namespace elicit
