#include "elicit/quasimono.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "elicit/error.hpp"
#include "elicit/parallel.hpp"

namespace elicit {

const char* to_string(Condition c) noexcept {
  switch (c) {
    case Condition::SegmentMonotone: return "SegmentMonotone";
    case Condition::LevelConvex: return "LevelConvex";
    case Condition::StrictOnB0: return "StrictOnB0";
    case Condition::G2LocallyNonConstant: return "G2LocallyNonConstant";
    case Condition::Continuity: return "Continuity";
    case Condition::SignStructure: return "SignStructure";
  }
  return "Unknown";
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

const char* to_string(Guarantee g) noexcept { return g == Guarantee::Exact ? "exact" : "sampled"; }

std::optional<Condition> condition_from_string(const std::string& s) {
  for (Condition c : {Condition::SegmentMonotone, Condition::LevelConvex, Condition::StrictOnB0,
                      Condition::G2LocallyNonConstant, Condition::Continuity, Condition::SignStructure})
    if (s == to_string(c)) return c;
  return std::nullopt;
}

namespace {

Guarantee guarantee_for(const PropertySpec& prop) {
  return has_exact_guarantee(prop) ? Guarantee::Exact : Guarantee::Sampled;
}

// How far g[j] pokes out of [min(g[i], g[k]), max(g[i], g[k])].
double excursion(double gi, double gj, double gk) {
  return std::max(gj - std::max(gi, gk), std::min(gi, gk) - gj);
}

const std::array<double, 3> kDeltas = {1e-2, 1e-3, 1e-4};

}  // namespace

CheckReport check_segment_monotone(const PropertySpec& prop, const Distribution& x0, const Distribution& x1, int m,
                                   const Tolerances& tol) {
  if (m < 3) throw Error(Errc::InvalidParameter, "segment grid needs m >= 3 points");
  CheckReport report;
  report.condition = Condition::SegmentMonotone;
  report.guarantee = guarantee_for(prop);
  report.trials = 1;
  report.config = {{"grid", m}, {"tau_level", tol.level}};

  std::vector<double> t(static_cast<std::size_t>(m));
  std::vector<double> g(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    t[k] = static_cast<double>(k) / (m - 1);
    g[k] = eval(prop, segment(x0, x1, t[k]));
  }

  std::array<int, 3> worst{};
  double worst_excess = tol.level;
  for (int k = 1; k + 1 < m; ++k) {
    const double e = excursion(g[k - 1], g[k], g[k + 1]);
    if (e > worst_excess) {
      worst_excess = e;
      worst = {k - 1, k, k + 1};
    }
  }
  // Plateaus can hide a non-monotone shape from consecutive triples.
  if (worst_excess <= tol.level) {
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        for (int k = j + 1; k < m; ++k) {
          const double e = excursion(g[i], g[j], g[k]);
          if (e > worst_excess) {
            worst_excess = e;
            worst = {i, j, k};
          }
        }
  }

  if (worst_excess <= tol.level) {
    report.verdict = Verdict::Pass;
    return report;
  }
  report.verdict = Verdict::Fail;
  Witness w;
  for (int idx : worst) {
    w.points.push_back(segment(x0, x1, t[idx]));
    w.values.push_back(g[idx]);
  }
  w.params = {{"t0", t[worst[0]]}, {"t1", t[worst[1]]}, {"t2", t[worst[2]]}, {"excess", worst_excess}};
  w.description = "middle point is a strict extremum between the outer two";
  report.witness = std::move(w);
  return report;
}

CheckReport check_quasi_monotone(const PropertySpec& prop, int trials, int m, std::uint64_t seed, int threads,
                                 const Tolerances& tol) {
  if (trials < 1) throw Error(Errc::InvalidParameter, "trials must be >= 1");
  auto results = parallel_map(static_cast<std::size_t>(trials), threads, [&](std::size_t i) {
    Rng rng(derive_seed(seed, i));
    const Distribution x0 = sample_distribution(prop.dim(), rng);
    const Distribution x1 = sample_distribution(prop.dim(), rng);
    return check_segment_monotone(prop, x0, x1, m, tol);
  });

  CheckReport report;
  report.condition = Condition::SegmentMonotone;
  report.guarantee = guarantee_for(prop);
  report.trials = trials;
  report.config = {{"grid", m}, {"trials", trials}, {"tau_level", tol.level}};
  int failures = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].failed()) continue;
    if (failures++ == 0) {
      report.witness = results[i].witness;
      report.metrics["first_failing_trial"] = static_cast<double>(i);
    }
  }
  report.metrics["failures"] = failures;
  report.verdict = failures == 0 ? Verdict::Pass : Verdict::Fail;
  return report;
}

CheckReport check_level_convexity(const PropertySpec& prop, double r, int pairs, std::uint64_t seed,
                                  const Tolerances& tol) {
  require_accepted_level(prop, r, tol);
  CheckReport report;
  report.condition = Condition::LevelConvex;
  report.guarantee = guarantee_for(prop);
  report.trials = pairs;
  report.config = {{"r", r}, {"pairs", pairs}, {"tau_level", tol.level}};

  StraddleSampler sampler(prop, r, seed, 10000, tol.level);
  auto next_level_point = [&]() -> std::optional<Distribution> {
    while (auto pair = sampler.next()) {
      try {
        return level_cross(prop, pair->first, pair->second, r, tol);
      } catch (const Error& e) {
        if (e.code() != Errc::NoConvergence) throw;
        report.metrics["unreachable_crossings"] += 1;
      }
    }
    return std::nullopt;
  };

  int tested = 0;
  double worst = 0.0;
  for (int k = 0; k < pairs; ++k) {
    auto a = next_level_point();
    auto b = a ? next_level_point() : std::nullopt;
    if (!a || !b) break;
    ++tested;
    const Distribution mid = segment(*a, *b, 0.5);
    const double gm = eval(prop, mid);
    const double dev = std::abs(gm - r);
    if (dev > tol.level && dev > worst) {
      worst = dev;
      Witness w;
      w.points = {*a, *b, mid};
      w.values = {eval(prop, *a), eval(prop, *b), gm};
      w.params = {{"r", r}, {"deviation", dev}};
      w.description = "midpoint of two level points leaves the level set";
      report.witness = std::move(w);
    }
  }
  report.metrics["pairs_tested"] = tested;
  report.metrics["max_deviation"] = worst;
  if (report.witness) report.verdict = Verdict::Fail;
  else if (tested == 0) {
    report.verdict = Verdict::Inconclusive;
    report.note = "no level points reachable at this level";
  } else report.verdict = Verdict::Pass;
  return report;
}

CheckReport check_strict_on_b0(const PropertySpec& prop, int trials, int m, std::uint64_t seed,
                               const Tolerances& tol) {
  if (m < 3) throw Error(Errc::InvalidParameter, "segment grid needs m >= 3 points");
  const ImageInterval iv = image_interval(prop);
  const double min_spread = 1e-3 * iv.width();
  CheckReport report;
  report.condition = Condition::StrictOnB0;
  report.guarantee = guarantee_for(prop);
  report.trials = trials;
  report.config = {{"grid", m}, {"trials", trials}, {"tau_level", tol.level}};

  int tested = 0;
  for (int i = 0; i < trials && !report.witness; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    const Distribution x0 = sample_distribution(prop.dim(), rng);
    const Distribution x1 = sample_distribution(prop.dim(), rng);
    const double g0 = eval(prop, x0);
    const double g1 = eval(prop, x1);
    if (!iv.in_open_interior(g0) || !iv.in_open_interior(g1) || std::abs(g0 - g1) < min_spread) continue;
    ++tested;
    const double lo = std::min(g0, g1);
    const double hi = std::max(g0, g1);
    for (int k = 1; k + 1 < m; ++k) {
      const double t = static_cast<double>(k) / (m - 1);
      const Distribution x = segment(x0, x1, t);
      const double g = eval(prop, x);
      if (g > lo + tol.level && g < hi - tol.level) continue;
      Witness w;
      w.points = {x0, x, x1};
      w.values = {g0, g, g1};
      w.params = {{"t", t}};
      w.description = "interior point of a segment is not strictly between its endpoint levels";
      report.witness = std::move(w);
      break;
    }
  }
  report.metrics["segments_tested"] = tested;
  if (report.witness) report.verdict = Verdict::Fail;
  else if (tested == 0) {
    report.verdict = Verdict::Inconclusive;
    report.note = "no segment with distinct interior endpoint levels found";
  } else report.verdict = Verdict::Pass;
  return report;
}

CheckReport check_g2(const PropertySpec& prop, double r, const Distribution& x, double eps, int probes,
                     std::uint64_t seed, const NormSpec& norm, const Tolerances& tol) {
  if (!(eps > 0.0)) throw Error(Errc::InvalidParameter, "eps must be positive");
  const double gx = eval(prop, x);
  if (std::abs(gx - r) > tol.level) throw Error(Errc::InvalidParameter, "G2 check needs Gamma(x) = r");

  CheckReport report;
  report.condition = Condition::G2LocallyNonConstant;
  report.guarantee = Guarantee::Sampled;
  report.trials = probes;
  report.config = {{"r", r}, {"eps", eps}, {"p", norm.p}, {"probes", probes}};

  const int n = prop.dim();
  Rng rng(seed);
  bool lower = false;
  bool upper = false;
  std::vector<Distribution> visited;
  std::vector<double> values;
  auto probe = [&](const Distribution& p) {
    const double g = eval(prop, p);
    lower = lower || g < r - tol.level;
    upper = upper || g > r + tol.level;
    visited.push_back(p);
    values.push_back(g);
  };

  for (int k = 0; k < probes && !(lower && upper); ++k) {
    // Vertices first, then uniform targets; step along u - x and, when
    // feasible, against it.
    const Distribution u = k < n ? Distribution::vertex(n, k) : sample_distribution(n, rng);
    const Vector d = u.weights() - x.weights();
    const double len = lp_norm(d, norm.p);
    if (len == 0.0) continue;
    const double s = eps / len;
    probe(segment(x, u, std::min(s, 1.0)));
    const Vector back = x.weights() - s * d;
    if (back.minCoeff() >= 0.0) probe(make_distribution(back / back.sum()));
  }

  report.metrics = {{"found_lower", lower}, {"found_upper", upper}, {"probes_used", static_cast<double>(visited.size())}};
  if (lower && upper) {
    report.verdict = Verdict::Pass;
    return report;
  }
  report.verdict = Verdict::Fail;
  Witness w;
  w.points.push_back(x);
  w.values.push_back(gx);
  for (std::size_t i = 0; i < visited.size(); ++i) {
    w.points.push_back(visited[i]);
    w.values.push_back(values[i]);
  }
  w.params = {{"r", r}, {"eps", eps}, {"p", norm.p}, {"missing_lower", !lower}, {"missing_upper", !upper}};
  w.description = "no strictly lower/higher level within the eps-ball around x (plateau)";
  report.witness = std::move(w);
  return report;
}

CheckReport check_continuity(const PropertySpec& prop, int trials, std::uint64_t seed, const NormSpec& norm,
                             int threads, const Tolerances& tol) {
  if (trials < 1) throw Error(Errc::InvalidParameter, "trials must be >= 1");
  const int n = prop.dim();
  struct Pair {
    double diff = -1.0;
    std::optional<Distribution> a, b;
  };

  std::array<Pair, kDeltas.size()> best{};
  for (std::size_t di = 0; di < kDeltas.size(); ++di) {
    const double delta = kDeltas[di];
    auto pairs = parallel_map(static_cast<std::size_t>(trials), threads, [&](std::size_t i) {
      Rng rng(derive_seed(derive_seed(seed, di), i));
      Pair out;
      auto consider = [&](const Distribution& a, const Distribution& b) {
        const double diff = std::abs(eval(prop, a) - eval(prop, b));
        if (diff > out.diff) out = {diff, a, b};
      };
      // Random close pair.
      const Distribution x = sample_distribution(n, rng);
      const Distribution u = sample_distribution(n, rng);
      const double len = lp_norm(u.weights() - x.weights(), norm.p);
      if (len > 0.0) consider(x, segment(x, u, std::min(1.0, delta / len)));
      // Jump localization: halve [a, b], keeping the half with the larger change.
      Distribution a = sample_distribution(n, rng);
      Distribution b = sample_distribution(n, rng);
      for (int it = 0; it < 200 && lp_norm(a.weights() - b.weights(), norm.p) > delta; ++it) {
        const Distribution mid = segment(a, b, 0.5);
        const double left = std::abs(eval(prop, mid) - eval(prop, a));
        const double right = std::abs(eval(prop, b) - eval(prop, mid));
        if (left >= right) b = mid;
        else a = mid;
      }
      consider(a, b);
      return out;
    });
    for (auto& p : pairs)
      if (p.diff > best[di].diff) best[di] = std::move(p);
  }

  CheckReport report;
  report.condition = Condition::Continuity;
  report.guarantee = guarantee_for(prop);
  report.trials = trials;
  report.config = {{"trials", trials}, {"p", norm.p}, {"tau_level", tol.level}};
  for (std::size_t di = 0; di < kDeltas.size(); ++di) {
    char key[32];
    std::snprintf(key, sizeof key, "modulus_%.0e", kDeltas[di]);
    report.metrics[key] = best[di].diff;
  }

  report.verdict = Verdict::Pass;
  for (std::size_t di = 1; di < kDeltas.size(); ++di) {
    const double prev = best[di - 1].diff;
    const double cur = best[di].diff;
    if (cur <= tol.level || cur <= 0.5 * prev) continue;
    report.verdict = Verdict::Fail;
    Witness w;
    w.points = {*best[di].a, *best[di].b};
    w.values = {eval(prop, *best[di].a), eval(prop, *best[di].b)};
    w.params = {{"delta", kDeltas[di]}, {"threshold", std::max(tol.level, 0.5 * prev)}, {"p", norm.p}};
    w.description = "points within delta whose levels differ by more than the decayed modulus (jump)";
    report.witness = std::move(w);
  }
  return report;
}

ReplayResult replay_witness(const PropertySpec& prop, const CheckReport& report, const Tolerances& tol) {
  ReplayResult out;
  if (!report.witness) {
    out.detail = "report carries no witness";
    return out;
  }
  const Witness& w = *report.witness;
  std::vector<double> g;
  for (const auto& p : w.points) g.push_back(eval(prop, p));
  for (std::size_t i = 0; i < g.size() && i < w.values.size(); ++i)
    out.max_value_drift = std::max(out.max_value_drift, std::abs(g[i] - w.values[i]));
  out.values_reproduced = g.size() == w.values.size() && out.max_value_drift <= tol.level;

  auto param = [&](const char* key) {
    auto it = w.params.find(key);
    if (it == w.params.end()) throw Error(Errc::ConfigParse, std::string("witness lacks parameter ") + key);
    return it->second;
  };

  switch (report.condition) {
    case Condition::SegmentMonotone:
      out.violation_reproduced = g.size() == 3 && excursion(g[0], g[1], g[2]) > tol.level;
      break;
    case Condition::StrictOnB0: {
      if (g.size() != 3) break;
      const double lo = std::min(g[0], g[2]);
      const double hi = std::max(g[0], g[2]);
      out.violation_reproduced = hi - lo > tol.level && !(g[1] > lo + tol.level && g[1] < hi - tol.level);
      break;
    }
    case Condition::LevelConvex: {
      if (w.points.size() != 3) break;
      const double r = param("r");
      const double mid = eval(prop, segment(w.points[0], w.points[1], 0.5));
      out.violation_reproduced =
          std::abs(g[0] - r) <= tol.level && std::abs(g[1] - r) <= tol.level && std::abs(mid - r) > tol.level;
      break;
    }
    case Condition::G2LocallyNonConstant: {
      if (g.empty()) break;
      const double r = param("r");
      const double eps = param("eps");
      const double p = param("p");
      const bool miss_lo = param("missing_lower") != 0.0;
      const bool miss_hi = param("missing_upper") != 0.0;
      bool ok = std::abs(g[0] - r) <= tol.level && (miss_lo || miss_hi);
      for (std::size_t i = 1; i < g.size() && ok; ++i) {
        if (lp_norm(w.points[i].weights() - w.points[0].weights(), p) > eps * (1.0 + 1e-9)) continue;
        if (miss_lo && g[i] < r - tol.level) ok = false;
        if (miss_hi && g[i] > r + tol.level) ok = false;
      }
      out.violation_reproduced = ok;
      break;
    }
    case Condition::Continuity: {
      if (g.size() != 2) break;
      const double dist = lp_norm(w.points[0].weights() - w.points[1].weights(), param("p"));
      out.violation_reproduced =
          dist <= param("delta") * (1.0 + 1e-9) && std::abs(g[0] - g[1]) > param("threshold");
      break;
    }
    case Condition::SignStructure: {
      if (g.size() != 1 || !w.functional) break;
      const double r = param("r");
      const double gap = g[0] - r;
      const double s = w.functional->dot(w.points[0].weights());
      out.violation_reproduced = std::abs(gap) > tol.level && !((gap > 0 && s > 0) || (gap < 0 && s < 0));
      break;
    }
  }
  out.detail = out.violation_reproduced ? "violation reproduced" : "violation NOT reproduced";
  return out;
}

}  // namespace elicit
