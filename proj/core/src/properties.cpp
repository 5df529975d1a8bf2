#include "elicit/properties.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "elicit/error.hpp"

namespace elicit {

namespace {

void require_finite(const std::vector<double>& v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i]))
      throw Error(Errc::NonFinite, std::string(what) + "[" + std::to_string(i) + "] is not finite");
}

void require_dim(const PropertySpec& prop, const Distribution& P) {
  if (P.dim() != prop.dim())
    throw Error(Errc::DimensionMismatch, "distribution has " + std::to_string(P.dim()) + " weights, property expects " +
                                             std::to_string(prop.dim()));
}

double dot(std::span<const double> a, const Vector& P) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * P[static_cast<Eigen::Index>(i)];
  return acc;
}

}  // namespace

const char* to_string(PropertyKind kind) noexcept {
  switch (kind) {
    case PropertyKind::Mean: return "mean";
    case PropertyKind::Expectile: return "expectile";
    case PropertyKind::Ratio: return "ratio";
    case PropertyKind::Variance: return "variance";
    case PropertyKind::Quantile: return "quantile";
    case PropertyKind::Custom: return "custom";
  }
  return "unknown";
}

PropertySpec PropertySpec::mean(std::vector<double> values) {
  return PropertySpec(PropertyKind::Mean, OutcomeSpace::with_labels(std::move(values)));
}

PropertySpec PropertySpec::expectile(std::vector<double> values, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw Error(Errc::InvalidParameter, "expectile level tau must lie in (0, 1)");
  PropertySpec prop(PropertyKind::Expectile, OutcomeSpace::with_labels(std::move(values)));
  prop.param_ = tau;
  return prop;
}

PropertySpec PropertySpec::ratio(std::vector<double> numerator, std::vector<double> denominator) {
  if (numerator.size() != denominator.size())
    throw Error(Errc::DimensionMismatch, "ratio numerator and denominator differ in length");
  require_finite(numerator, "numerator");
  require_finite(denominator, "denominator");
  for (std::size_t i = 0; i < denominator.size(); ++i)
    if (!(denominator[i] > 0.0))
      throw Error(Errc::InvalidParameter, "ratio denominator[" + std::to_string(i) + "] must be strictly positive");
  PropertySpec prop(PropertyKind::Ratio, OutcomeSpace::of_size(static_cast<int>(numerator.size())));
  prop.numerator_ = std::move(numerator);
  prop.denominator_ = std::move(denominator);
  return prop;
}

PropertySpec PropertySpec::variance(std::vector<double> values) {
  return PropertySpec(PropertyKind::Variance, OutcomeSpace::with_labels(std::move(values)));
}

PropertySpec PropertySpec::quantile(std::vector<double> values, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(Errc::InvalidParameter, "quantile level alpha must lie in (0, 1)");
  PropertySpec prop(PropertyKind::Quantile, OutcomeSpace::with_labels(std::move(values)));
  prop.param_ = alpha;
  return prop;
}

PropertySpec PropertySpec::custom(OutcomeSpace space, Evaluator evaluator, std::string name) {
  if (!evaluator) throw Error(Errc::InvalidParameter, "custom property needs an evaluator");
  PropertySpec prop(PropertyKind::Custom, std::move(space));
  prop.evaluator_ = std::make_shared<const Evaluator>(std::move(evaluator));
  prop.name_ = std::move(name);
  return prop;
}

std::string PropertySpec::describe() const {
  std::ostringstream os;
  os << to_string(kind_);
  switch (kind_) {
    case PropertyKind::Expectile: os << "(tau=" << param_ << ")"; break;
    case PropertyKind::Quantile: os << "(alpha=" << param_ << ")"; break;
    case PropertyKind::Custom: os << "(" << name_ << ")"; break;
    default: break;
  }
  os << " n=" << dim();
  return os.str();
}

double expectile_balance(std::span<const double> values, const Vector& P, double tau, double e) {
  double upper = 0.0;
  double lower = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double p = P[static_cast<Eigen::Index>(i)];
    if (values[i] > e) upper += p * (values[i] - e);
    else lower += p * (e - values[i]);
  }
  return tau * upper - (1.0 - tau) * lower;
}

double expectile_value(std::span<const double> values, const Vector& P, double tau) {
  double lo = *std::min_element(values.begin(), values.end());
  double hi = *std::max_element(values.begin(), values.end());
  // Bisect until the bracket cannot shrink further; well below the 1e-12 target.
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double b = expectile_balance(values, P, tau, mid);
    if (b > 0.0) lo = mid;
    else if (b < 0.0) hi = mid;
    else return mid;
  }
  const double blo = std::abs(expectile_balance(values, P, tau, lo));
  const double bhi = std::abs(expectile_balance(values, P, tau, hi));
  return blo <= bhi ? lo : hi;
}

double PropertySpec::operator()(const Distribution& P) const { return eval(*this, P); }

double eval(const PropertySpec& prop, const Distribution& P) {
  require_dim(prop, P);
  const Vector& w = P.weights();
  const auto y = prop.space().labels();
  switch (prop.kind()) {
    case PropertyKind::Mean: return dot(y, w);
    case PropertyKind::Expectile: return expectile_value(y, w, prop.tau());
    case PropertyKind::Ratio: return dot(prop.numerator(), w) / dot(prop.denominator(), w);
    case PropertyKind::Variance: {
      const double m = dot(y, w);
      double acc = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) acc += w[static_cast<Eigen::Index>(i)] * (y[i] - m) * (y[i] - m);
      return acc;
    }
    case PropertyKind::Quantile: {
      double cdf = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) {
        cdf += w[static_cast<Eigen::Index>(i)];
        if (cdf >= prop.alpha()) return y[i];
      }
      return y.back();
    }
    case PropertyKind::Custom: return (*prop.evaluator_)(P);
  }
  return 0.0;
}

ImageInterval image_interval(const PropertySpec& prop, std::uint64_t seed) {
  ImageInterval iv;
  const auto y = prop.space().labels();
  switch (prop.kind()) {
    case PropertyKind::Mean:
    case PropertyKind::Expectile:
    case PropertyKind::Quantile:
      iv.lo = y.front();
      iv.hi = y.back();
      break;
    case PropertyKind::Variance:
      iv.lo = 0.0;
      iv.hi = 0.25 * (y.back() - y.front()) * (y.back() - y.front());
      break;
    case PropertyKind::Ratio: {
      iv.lo = kInf;
      iv.hi = -kInf;
      for (std::size_t i = 0; i < prop.numerator().size(); ++i) {
        const double v = prop.numerator()[i] / prop.denominator()[i];
        iv.lo = std::min(iv.lo, v);
        iv.hi = std::max(iv.hi, v);
      }
      break;
    }
    case PropertyKind::Custom: {
      iv.lo = kInf;
      iv.hi = -kInf;
      iv.estimated = true;
      auto visit = [&](const Distribution& P) {
        const double v = eval(prop, P);
        iv.lo = std::min(iv.lo, v);
        iv.hi = std::max(iv.hi, v);
      };
      for (int i = 0; i < prop.dim(); ++i) visit(Distribution::vertex(prop.dim(), i));
      Rng rng(derive_seed(seed, 0x1a7e));
      for (int k = 0; k < 1000; ++k) visit(sample_distribution(prop.dim(), rng));
      break;
    }
  }
  if (!(iv.hi - iv.lo >= Tolerances{}.norm))
    throw Error(Errc::ConstantProperty, prop.describe() + " has a degenerate image");
  return iv;
}

std::optional<Vector> oracle_functional(const PropertySpec& prop, double r) {
  const ImageInterval iv = image_interval(prop);
  if (!iv.in_open_interior(r)) throw Error(Errc::LevelOutOfRange, "level outside the open image interior");
  const int n = prop.dim();
  Vector z(n);
  const auto y = prop.space().labels();
  switch (prop.kind()) {
    case PropertyKind::Mean:
      for (int i = 0; i < n; ++i) z[i] = y[static_cast<std::size_t>(i)] - r;
      return z;
    case PropertyKind::Expectile: {
      const double tau = prop.tau();
      for (int i = 0; i < n; ++i) {
        const double d = y[static_cast<std::size_t>(i)] - r;
        z[i] = tau * std::max(d, 0.0) - (1.0 - tau) * std::max(-d, 0.0);
      }
      return z;
    }
    case PropertyKind::Ratio:
      for (int i = 0; i < n; ++i)
        z[i] = prop.numerator()[static_cast<std::size_t>(i)] - r * prop.denominator()[static_cast<std::size_t>(i)];
      return z;
    default: return std::nullopt;
  }
}

bool has_exact_guarantee(const PropertySpec& prop) noexcept {
  return prop.kind() == PropertyKind::Mean || prop.kind() == PropertyKind::Ratio;
}

}  // namespace elicit
