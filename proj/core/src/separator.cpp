#include "elicit/separator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "elicit/error.hpp"

namespace elicit {

namespace {

Eigen::MatrixXd stack_points(const std::vector<Distribution>& points) {
  const Eigen::Index n = points.front().dim();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(points.size()), n);
  for (std::size_t i = 0; i < points.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = points[i].weights().transpose();
  return m;
}

int default_count(int n) { return std::max(8, 2 * (n - 1)); }

}  // namespace

std::pair<double, double> accepted_levels(const PropertySpec& prop, const Tolerances& tol) {
  const ImageInterval iv = image_interval(prop);
  return {iv.trimmed_lo(tol.interior_margin), iv.trimmed_hi(tol.interior_margin)};
}

void require_accepted_level(const PropertySpec& prop, double r, const Tolerances& tol) {
  const auto [lo, hi] = accepted_levels(prop, tol);
  if (!(r >= lo && r <= hi)) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "level %.17g outside accepted range [%.17g, %.17g]", r, lo, hi);
    throw Error(Errc::LevelOutOfRange, buf);
  }
}

Distribution propose(int n, Rng& rng) {
  Distribution u = sample_distribution(n, rng);
  if (rng.uniform() < 0.5) return u;
  const int v = static_cast<int>(rng.index(static_cast<std::size_t>(n)));
  const double t = rng.uniform();
  return segment(Distribution::vertex(n, v), u, t * t);
}

StraddleSampler::StraddleSampler(const PropertySpec& prop, double r, std::uint64_t seed, int budget, double tau_level)
    : prop_(prop), r_(r), rng_(seed), budget_(budget), tau_(tau_level) {}

std::optional<std::pair<Distribution, Distribution>> StraddleSampler::next() {
  while (below_.empty() || above_.empty()) {
    if (draws_ >= budget_) return std::nullopt;
    ++draws_;
    Distribution x = propose(prop_.dim(), rng_);
    const double v = eval(prop_, x);
    if (v < r_ - tau_) below_.push_back(std::move(x));
    else if (v > r_ + tau_) above_.push_back(std::move(x));
  }
  std::pair<Distribution, Distribution> pair{below_.back(), above_.back()};
  below_.pop_back();
  above_.pop_back();
  return pair;
}

Distribution level_cross(const PropertySpec& prop, const Distribution& x_minus, const Distribution& x_plus, double r,
                         const Tolerances& tol) {
  const double g_minus = eval(prop, x_minus);
  const double g_plus = eval(prop, x_plus);
  if (!(g_minus < r && r < g_plus)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "need Gamma(x-) < r < Gamma(x+), got %.17g, %.17g, %.17g", g_minus, r, g_plus);
    throw Error(Errc::NotStraddling, buf);
  }

  double lo = 0.0;
  double hi = 1.0;
  Distribution best = std::abs(g_minus - r) <= std::abs(g_plus - r) ? x_minus : x_plus;
  double best_gap = std::min(std::abs(g_minus - r), std::abs(g_plus - r));
  // Run the bracket down to machine resolution: the null-space fit downstream
  // profits from level points far more accurate than tau_level.
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    Distribution x = segment(x_minus, x_plus, mid);
    const double g = eval(prop, x);
    const double gap = std::abs(g - r);
    if (gap < best_gap) {
      best_gap = gap;
      best = x;
    }
    if (g == r) break;
    if (g < r) lo = mid;
    else hi = mid;
  }
  if (best_gap > tol.level) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "bisection stalled %.3g away from level %.17g (Gamma jumps over r)", best_gap, r);
    throw Error(Errc::NoConvergence, buf);
  }
  return best;
}

int affine_rank(const std::vector<Distribution>& points, double rank_tol) {
  if (points.size() < 2) return 0;
  const Eigen::MatrixXd m = stack_points(points);
  Eigen::MatrixXd diffs = m.bottomRows(m.rows() - 1).rowwise() - m.row(0);
  const double scale = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0);
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(diffs).singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] >= rank_tol * scale) ++rank;
  return rank;
}

LevelSample sample_level_set(const PropertySpec& prop, double r, int count, std::uint64_t seed,
                             const SeparatorConfig& config) {
  require_accepted_level(prop, r, config.tol);
  const int n = prop.dim();
  if (count < n - 1)
    throw Error(Errc::InvalidParameter, "need at least n-1 = " + std::to_string(n - 1) + " level points");

  LevelSample sample;
  sample.r = r;
  StraddleSampler pairs(prop, r, seed, config.draw_budget, config.tol.level);
  const int target_rank = n - 2;
  int goal = count;
  while (true) {
    while (static_cast<int>(sample.points.size()) < goal) {
      auto pair = pairs.next();
      if (!pair) {
        sample.spanning_rank = affine_rank(sample.points, config.tol.rank);
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "draw budget %d exhausted at level %.17g with %zu level points of affine rank %d (need %d)",
                      config.draw_budget, r, sample.points.size(), sample.spanning_rank, target_rank);
        throw Error(Errc::InsufficientSpan, buf);
      }
      sample.points.push_back(level_cross(prop, pair->first, pair->second, r, config.tol));
    }
    sample.spanning_rank = affine_rank(sample.points, config.tol.rank);
    if (sample.spanning_rank >= target_rank) break;
    goal += count;  // retry with fresh pairs until the budget runs out
  }
  return sample;
}

Vector null_space_fit(const LevelSample& sample, double rank_tol) {
  if (sample.points.empty()) throw Error(Errc::InvalidParameter, "empty level sample");
  const Eigen::MatrixXd m = stack_points(sample.points);
  const Eigen::Index n = m.cols();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] >= rank_tol * sv[0]) ++rank;
  const Eigen::Index nullity = n - rank;
  if (nullity > 1)
    throw Error(Errc::RankDeficient, "level points leave a " + std::to_string(nullity) +
                                         "-dimensional null space; the hyperplane is not determined");
  return svd.matrixV().col(n - 1);
}

SeparatingFunctional orient_and_normalize(const Vector& z, const PropertySpec& prop, double r, const NormSpec& norm,
                                          std::uint64_t seed, const LevelSample* sample,
                                          const SeparatorConfig& config) {
  if (!(dual_norm(z, norm) > 0.0)) throw Error(Errc::ZeroVector, "cannot orient the zero functional");
  Rng rng(seed);
  std::optional<Distribution> witness;
  for (int draw = 0; draw < config.draw_budget && !witness; ++draw) {
    Distribution x = propose(prop.dim(), rng);
    if (eval(prop, x) > r + config.tol.level) witness = std::move(x);
  }
  if (!witness) throw Error(Errc::NoUpperWitness, "no point above the level found within the draw budget");

  SeparatingFunctional f;
  f.r = r;
  f.norm = norm;
  f.z = z.dot(witness->weights()) < 0.0 ? Vector(-z) : z;
  f.z = normalize_dual(f.z, norm);
  f.orientation_witness = std::move(*witness);
  if (sample) f.residual = psi_diagnostic(f, *sample);
  return f;
}

SeparatingFunctional separate(const PropertySpec& prop, double r, const SeparatorConfig& config,
                              LevelSample* sample_out) {
  const int count = config.sample_count > 0 ? config.sample_count : default_count(prop.dim());
  LevelSample sample = sample_level_set(prop, r, count, derive_seed(config.seed, 1), config);
  const Vector z = null_space_fit(sample, config.tol.rank);
  SeparatingFunctional f = orient_and_normalize(z, prop, r, config.norm, derive_seed(config.seed, 2), &sample, config);
  if (f.residual > config.tol.residual) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "fitted hyperplane misses the level set by %.3g (> %.3g); level set is not flat",
                  f.residual, config.tol.residual);
    throw Error(Errc::ResidualBreach, buf);
  }
  if (sample_out) *sample_out = std::move(sample);
  return f;
}

CheckReport verify_separation(const SeparatingFunctional& f, const PropertySpec& prop, int trials, std::uint64_t seed,
                              const Tolerances& tol) {
  CheckReport report;
  report.condition = Condition::SignStructure;
  report.guarantee = Guarantee::Sampled;
  report.trials = trials;
  report.config = {{"r", f.r}, {"trials", trials}, {"tau_level", tol.level}};

  Rng rng(seed);
  int checked = 0;
  int violations = 0;
  for (int i = 0; i < trials; ++i) {
    Distribution P = propose(prop.dim(), rng);
    const double g = eval(prop, P) - f.r;
    if (std::abs(g) <= tol.level) continue;
    ++checked;
    const double s = f.z.dot(P.weights());
    const bool agree = (g > 0.0 && s > 0.0) || (g < 0.0 && s < 0.0);
    if (agree) continue;
    ++violations;
    if (!report.witness) {
      Witness w;
      w.points = {P};
      w.values = {g + f.r};
      w.params = {{"r", f.r}, {"pairing", s}};
      w.functional = f.z;
      w.description = "sign of <z, P> disagrees with sign of Gamma(P) - r";
      report.witness = std::move(w);
    }
  }
  report.metrics = {{"checked", checked}, {"violations", violations}};
  report.verdict = violations == 0 ? Verdict::Pass : Verdict::Fail;
  return report;
}

double psi_diagnostic(const SeparatingFunctional& f, const LevelSample& sample) {
  double sup = 0.0;
  for (const auto& x : sample.points) sup = std::max(sup, std::abs(f.z.dot(x.weights())));
  return sup;
}

}  // namespace elicit
