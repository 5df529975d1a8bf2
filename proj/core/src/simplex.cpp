#include "elicit/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "elicit/error.hpp"

namespace elicit {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

OutcomeSpace OutcomeSpace::of_size(int n) {
  if (n < 2) throw Error(Errc::InvalidSpace, "outcome space needs n >= 2, got " + std::to_string(n));
  return OutcomeSpace(n, std::nullopt);
}

OutcomeSpace OutcomeSpace::with_labels(std::vector<double> labels) {
  const int n = static_cast<int>(labels.size());
  if (n < 2) throw Error(Errc::InvalidSpace, "outcome space needs n >= 2, got " + std::to_string(n));
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(labels[i])) throw Error(Errc::NonFinite, "label " + std::to_string(i) + " is not finite");
    if (i > 0 && !(labels[i] > labels[i - 1]))
      throw Error(Errc::InvalidSpace, "labels must be strictly increasing (index " + std::to_string(i) + ")");
  }
  return OutcomeSpace(n, std::move(labels));
}

std::span<const double> OutcomeSpace::labels() const noexcept {
  if (!labels_) return {};
  return {labels_->data(), labels_->size()};
}

NormSpec NormSpec::from_p(double p) {
  if (!(p >= 1.0)) throw Error(Errc::InvalidParameter, "norm exponent p must lie in [1, inf], got " + fmt_double(p));
  if (p == 1.0) return {1.0, kInf};
  if (std::isinf(p)) return {kInf, 1.0};
  return {p, p / (p - 1.0)};
}

double lp_norm(const Vector& v, double p) {
  if (v.size() == 0) return 0.0;
  if (std::isinf(p)) return v.cwiseAbs().maxCoeff();
  if (p == 1.0) return v.cwiseAbs().sum();
  if (p == 2.0) return v.norm();
  const double scale = v.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  double acc = 0.0;
  for (double x : v) acc += std::pow(std::abs(x) / scale, p);
  return scale * std::pow(acc, 1.0 / p);
}

double dual_norm(const Vector& z, const NormSpec& spec) { return lp_norm(z, spec.q); }

Vector normalize_dual(const Vector& z, const NormSpec& spec) {
  const double norm = dual_norm(z, spec);
  if (!(norm > 0.0)) throw Error(Errc::ZeroVector, "cannot normalize the zero functional");
  if (!std::isfinite(norm)) throw Error(Errc::NonFinite, "functional has non-finite entries");
  return z / norm;
}

Distribution make_distribution(Vector w, double tau_sum) {
  if (w.size() < 2) throw Error(Errc::InvalidSpace, "distribution needs n >= 2 weights");
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (!std::isfinite(w[i])) throw Error(Errc::NonFinite, "weight " + std::to_string(i) + " is not finite");
    if (w[i] < 0.0)
      throw Error(Errc::NegativeWeight, "weight " + std::to_string(i) + " = " + fmt_double(w[i]) + " is negative");
  }
  const double sum = w.sum();
  if (std::abs(sum - 1.0) > tau_sum)
    throw Error(Errc::SumNotOne, "weights sum to " + fmt_double(sum) + ", expected 1 within " + fmt_double(tau_sum));
  return Distribution(std::move(w));
}

Distribution make_distribution(std::span<const double> w, double tau_sum) {
  Vector v(static_cast<Eigen::Index>(w.size()));
  for (std::size_t i = 0; i < w.size(); ++i) v[static_cast<Eigen::Index>(i)] = w[i];
  return make_distribution(std::move(v), tau_sum);
}

Distribution Distribution::vertex(int n, int i) {
  Vector w = Vector::Zero(n);
  w[i] = 1.0;
  return make_distribution(std::move(w));
}

Distribution Distribution::barycenter(int n) { return make_distribution(Vector::Constant(n, 1.0 / n)); }

Distribution segment(const Distribution& x0, const Distribution& x1, double t) {
  if (x0.dim() != x1.dim()) throw Error(Errc::DimensionMismatch, "segment endpoints live in different spaces");
  if (!(t >= 0.0 && t <= 1.0)) throw Error(Errc::TOutOfRange, "segment parameter t = " + fmt_double(t));
  Vector w = (1.0 - t) * x0.w_ + t * x1.w_;
  // Rounding can leave a -0 or a sum drift of a few ulps; only a real drift is repaired.
  w = w.cwiseMax(0.0);
  const double sum = w.sum();
  if (std::abs(sum - 1.0) > Tolerances{}.sum) w /= sum;
  return Distribution(std::move(w));
}

Distribution sample_distribution(int n, Rng& rng) {
  std::vector<double> cuts(static_cast<std::size_t>(n - 1));
  for (auto& c : cuts) c = rng.uniform();
  std::sort(cuts.begin(), cuts.end());
  Vector w(n);
  double prev = 0.0;
  for (int i = 0; i < n - 1; ++i) {
    w[i] = cuts[static_cast<std::size_t>(i)] - prev;
    prev = cuts[static_cast<std::size_t>(i)];
  }
  w[n - 1] = 1.0 - prev;
  return Distribution(std::move(w));
}

Distribution sample_distribution(const OutcomeSpace& space, std::uint64_t seed) {
  Rng rng(seed);
  return sample_distribution(space.dim(), rng);
}

ConeSplit cone_decompose(const Vector& h, const NormSpec& spec) {
  ConeSplit split;
  split.pos = h.cwiseMax(0.0);
  split.neg = (-h).cwiseMax(0.0);
  split.bound_K = std::isinf(spec.p) ? 2.0 : std::pow(2.0, 1.0 - 1.0 / spec.p);
  return split;
}

}  // namespace elicit
