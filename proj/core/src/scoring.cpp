#include "elicit/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "elicit/error.hpp"
#include "elicit/parallel.hpp"

namespace elicit {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Weight Weight::constant(double c) {
  return {"constant(" + num(c) + ")", [c](double) { return c; }};
}

Weight Weight::affine(double a, double b) {
  return {"affine(" + num(a) + "+" + num(b) + "*r)", [a, b](double s) { return a + b * s; }};
}

std::size_t ScoringRule::node_index(double r) const {
  auto it = std::lower_bound(levels.begin(), levels.end(), r);
  if (it == levels.begin()) return 0;
  if (it == levels.end()) return levels.size() - 1;
  const std::size_t hi = static_cast<std::size_t>(it - levels.begin());
  return (r - levels[hi - 1] <= levels[hi] - r) ? hi - 1 : hi;
}

ScoringRule synthesize(const SeparatingFamily& fam, const Weight& w, std::optional<double> r0) {
  const std::size_t m = fam.levels.size();
  const Eigen::Index n = fam.prop.dim();
  ScoringRule rule;
  rule.levels = fam.levels;
  rule.weight_id = w.id;
  rule.family_ref = fam.prop.describe() + " p=" + num(fam.norm.p) + " grid=" + std::to_string(m);

  const double base = r0.value_or(0.5 * (fam.levels.front() + fam.levels.back()));
  if (!(base >= fam.levels.front() && base <= fam.levels.back()))
    throw Error(Errc::BaseLevelOutOfRange, "base level " + num(base) + " outside the family grid");

  Eigen::MatrixXd integrand(static_cast<Eigen::Index>(m), n);
  for (std::size_t k = 0; k < m; ++k) {
    const double wk = w.fn(fam.levels[k]);
    if (!(wk > 0.0)) throw Error(Errc::NonpositiveWeight, "weight " + num(wk) + " at level " + num(fam.levels[k]));
    rule.weights.push_back(wk);
    integrand.row(static_cast<Eigen::Index>(k)) = wk * fam.functionals[k].z.transpose();
  }

  Eigen::MatrixXd cumulative = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), n);
  for (std::size_t k = 1; k < m; ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    const double h = fam.levels[k] - fam.levels[k - 1];
    cumulative.row(i) = cumulative.row(i - 1) + 0.5 * h * (integrand.row(i - 1) + integrand.row(i));
  }
  const std::size_t j = rule.node_index(base);
  rule.base_level = fam.levels[j];
  rule.table = -(cumulative.rowwise() - cumulative.row(static_cast<Eigen::Index>(j)));
  rule.table.row(static_cast<Eigen::Index>(j)).setZero();
  return rule;
}

double expected_score(const ScoringRule& rule, const Distribution& P, double r) {
  return rule.table.row(static_cast<Eigen::Index>(rule.node_index(r))).dot(P.weights());
}

std::size_t argmin_node(const ScoringRule& rule, const Distribution& P) {
  const Eigen::VectorXd scores = rule.table * P.weights();
  Eigen::Index best = 0;
  scores.minCoeff(&best);
  return static_cast<std::size_t>(best);
}

ConsistencyReport consistency_check(const ScoringRule& rule, const PropertySpec& prop, int trials, std::uint64_t seed,
                                    int threads) {
  if (trials < 1) throw Error(Errc::InvalidParameter, "trials must be >= 1");
  const double lo = rule.levels.front();
  const double hi = rule.levels.back();
  struct Trial {
    Distribution P;
    double value;
    double argmin;
  };
  auto results = parallel_map(static_cast<std::size_t>(trials), threads, [&](std::size_t i) {
    Rng rng(derive_seed(seed, i));
    for (int attempt = 0; attempt < 100000; ++attempt) {
      Distribution P = sample_distribution(prop.dim(), rng);
      const double v = eval(prop, P);
      if (v < lo || v > hi) continue;
      return Trial{P, v, rule.levels[argmin_node(rule, P)]};
    }
    throw Error(Errc::InsufficientSpan, "no sample with property value inside the grid range");
  });

  ConsistencyReport rep;
  rep.trials = trials;
  rep.grid_step = rule.step();
  for (auto& t : results) {
    const double err = std::abs(t.argmin - t.value);
    rep.max_level_error = std::max(rep.max_level_error, err);
    if (err <= 1.5 * rep.grid_step) ++rep.matches;
    else rep.failures.push_back({std::move(t.P), t.value, t.argmin});
  }
  return rep;
}

FirstOrderReport first_order_check(const ScoringRule& rule, const SeparatingFamily& fam, const PropertySpec& prop,
                                   int trials, std::uint64_t seed) {
  const std::size_t m = rule.levels.size();
  if (m < 5) throw Error(Errc::InvalidParameter, "first-order check needs grid_size >= 5");
  FirstOrderReport rep;
  rep.trials = trials;
  const double abs_scale = fam.config.separator.tol.residual;
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    const Distribution P = sample_distribution(prop.dim(), rng);
    const Eigen::VectorXd scores = rule.table * P.weights();
    std::vector<double> exact(m);
    double scale = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      exact[k] = -rule.weights[k] * fam.functionals[k].z.dot(P.weights());
      scale = std::max(scale, std::abs(exact[k]));
    }
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < m; ++k) {
      const auto i = static_cast<Eigen::Index>(k);
      const double fd = (scores[i + 1] - scores[i - 1]) / (rule.levels[k + 1] - rule.levels[k - 1]);
      worst = std::max(worst, std::abs(fd - exact[k]));
    }
    rep.max_abs_error = std::max(rep.max_abs_error, worst);
    rep.max_relative_error = std::max(rep.max_relative_error, worst / std::max(scale, abs_scale));
  }
  rep.pass = rep.max_relative_error <= 1e-2;
  return rep;
}

std::string scoring_csv(const ScoringRule& rule) {
  std::string out = "r";
  for (Eigen::Index i = 1; i <= rule.table.cols(); ++i) out += ",S_omega_" + std::to_string(i);
  out += "\n";
  for (std::size_t k = 0; k < rule.levels.size(); ++k) {
    out += num(rule.levels[k]);
    for (Eigen::Index i = 0; i < rule.table.cols(); ++i) out += "," + num(rule.table(static_cast<Eigen::Index>(k), i));
    out += "\n";
  }
  return out;
}

}  // namespace elicit
