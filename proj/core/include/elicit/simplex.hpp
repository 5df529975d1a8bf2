#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "elicit/random.hpp"
#include "elicit/tolerances.hpp"

namespace elicit {

using Vector = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Finite outcome set {0, ..., n-1}, optionally carrying strictly increasing
/// real outcome values.
class OutcomeSpace {
 public:
  static OutcomeSpace of_size(int n);
  static OutcomeSpace with_labels(std::vector<double> labels);

  int dim() const noexcept { return n_; }
  bool has_labels() const noexcept { return labels_.has_value(); }
  /// Outcome values; empty when the space is unlabelled.
  std::span<const double> labels() const noexcept;

 private:
  OutcomeSpace(int n, std::optional<std::vector<double>> labels) : n_(n), labels_(std::move(labels)) {}

  int n_;
  std::optional<std::vector<double>> labels_;
};

/// Ambient exponent p and its dual exponent q (1/p + 1/q = 1).
struct NormSpec {
  double p = 1.0;
  double q = kInf;

  static NormSpec from_p(double p);
  static NormSpec l1() { return from_p(1.0); }
  static NormSpec l2() { return from_p(2.0); }
  static NormSpec linf() { return from_p(kInf); }
};

double lp_norm(const Vector& v, double p);

/// ||z||_q, the operator norm of <z, .> on (R^n, ||.||_p).
double dual_norm(const Vector& z, const NormSpec& spec);

/// z / ||z||_q. Throws Errc::ZeroVector for z == 0.
Vector normalize_dual(const Vector& z, const NormSpec& spec);

/// A point of the probability simplex. Only constructed through the
/// validating factories, so every instance is nonnegative and sums to one.
class Distribution {
 public:
  const Vector& weights() const noexcept { return w_; }
  int dim() const noexcept { return static_cast<int>(w_.size()); }
  double operator[](int i) const { return w_[i]; }

  static Distribution vertex(int n, int i);
  static Distribution barycenter(int n);

  friend Distribution make_distribution(Vector w, double tau_sum);
  friend Distribution segment(const Distribution& x0, const Distribution& x1, double t);
  friend Distribution sample_distribution(int n, Rng& rng);

  friend bool operator==(const Distribution& a, const Distribution& b) { return a.w_ == b.w_; }

 private:
  explicit Distribution(Vector w) : w_(std::move(w)) {}
  Vector w_;
};

/// Validating gateway. Throws NegativeWeight / SumNotOne / NonFinite naming
/// the offending index or sum.
Distribution make_distribution(Vector w, double tau_sum = Tolerances{}.sum);
Distribution make_distribution(std::span<const double> w, double tau_sum = Tolerances{}.sum);

/// (1 - t) x0 + t x1. Endpoints are reproduced bitwise.
Distribution segment(const Distribution& x0, const Distribution& x1, double t);

/// Uniform draw from the simplex: gaps of n-1 sorted uniforms.
Distribution sample_distribution(int n, Rng& rng);
Distribution sample_distribution(const OutcomeSpace& space, std::uint64_t seed);

struct ConeSplit {
  Vector pos;
  Vector neg;
  double bound_K = 1.0;
};

/// h = pos - neg with pos = max(0, h), neg = max(0, -h). bound_K = 2^{1-1/p}
/// bounds ||pos||_p + ||neg||_p <= K ||h||_p.
ConeSplit cone_decompose(const Vector& h, const NormSpec& spec);

}  // namespace elicit
