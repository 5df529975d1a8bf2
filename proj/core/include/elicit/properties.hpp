#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "elicit/simplex.hpp"

namespace elicit {

enum class PropertyKind { Mean, Expectile, Ratio, Variance, Quantile, Custom };

const char* to_string(PropertyKind kind) noexcept;

using Evaluator = std::function<double(const Distribution&)>;

/// A property Gamma on the simplex: a built-in with parameters, or a black-box
/// evaluator. Cheap to copy; immutable.
class PropertySpec {
 public:
  static PropertySpec mean(std::vector<double> values);
  static PropertySpec expectile(std::vector<double> values, double tau);
  static PropertySpec ratio(std::vector<double> numerator, std::vector<double> denominator);
  static PropertySpec variance(std::vector<double> values);
  static PropertySpec quantile(std::vector<double> values, double alpha);
  static PropertySpec custom(OutcomeSpace space, Evaluator evaluator, std::string name = "custom");

  PropertyKind kind() const noexcept { return kind_; }
  const OutcomeSpace& space() const noexcept { return space_; }
  int dim() const noexcept { return space_.dim(); }

  double tau() const noexcept { return param_; }
  double alpha() const noexcept { return param_; }
  const std::vector<double>& numerator() const noexcept { return numerator_; }
  const std::vector<double>& denominator() const noexcept { return denominator_; }
  const std::string& name() const noexcept { return name_; }

  /// Short human-readable identifier, e.g. "expectile(tau=0.7)".
  std::string describe() const;

  double operator()(const Distribution& P) const;

  friend double eval(const PropertySpec& prop, const Distribution& P);

 private:
  PropertySpec(PropertyKind kind, OutcomeSpace space) : kind_(kind), space_(std::move(space)) {}

  PropertyKind kind_;
  OutcomeSpace space_;
  double param_ = 0.0;
  std::vector<double> numerator_;
  std::vector<double> denominator_;
  std::string name_;
  std::shared_ptr<const Evaluator> evaluator_;
};

double eval(const PropertySpec& prop, const Distribution& P);

/// Expectile of the outcome values under P: the root of the balance
/// tau E(Y - e)_+ = (1 - tau) E(e - Y)_+, found by bisection.
double expectile_value(std::span<const double> values, const Vector& P, double tau);

/// tau E(Y - e)_+ - (1 - tau) E(e - Y)_+ (strictly decreasing in e).
double expectile_balance(std::span<const double> values, const Vector& P, double tau, double e);

struct ImageInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool estimated = false;

  double width() const noexcept { return hi - lo; }
  bool in_open_interior(double r) const noexcept { return r > lo && r < hi; }
  /// Accepted levels [lo + m (hi - lo), hi - m (hi - lo)].
  double trimmed_lo(double margin) const noexcept { return lo + margin * width(); }
  double trimmed_hi(double margin) const noexcept { return hi - margin * width(); }
};

/// Closed form for built-ins; custom properties are estimated from the
/// vertices and 10^3 seeded samples and flagged `estimated`.
/// Throws ConstantProperty when the image is (numerically) a point.
ImageInterval image_interval(const PropertySpec& prop, std::uint64_t seed = 0);

/// Closed-form separating functional, unnormalized, for mean / expectile /
/// ratio; std::nullopt for the others. Throws LevelOutOfRange outside the
/// open image interior.
std::optional<Vector> oracle_functional(const PropertySpec& prop, double r);

/// Built-ins whose segment monotonicity follows from a closed form, so a pass
/// verdict is exact rather than "no counterexample found".
bool has_exact_guarantee(const PropertySpec& prop) noexcept;

}  // namespace elicit
