#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the code path it is used to check.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace elicit::oracle {

/// Exact expectile: the balance function is linear between consecutive
/// outcome values, so locate the sign change and solve the linear piece.
inline double expectile(const std::vector<double>& y, const Eigen::VectorXd& p, double tau) {
  auto balance = [&](double e) {
    double up = 0.0, down = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      up += p[i] * std::max(y[i] - e, 0.0);
      down += p[i] * std::max(e - y[i], 0.0);
    }
    return tau * up - (1.0 - tau) * down;
  };
  for (std::size_t k = 0; k + 1 < y.size(); ++k) {
    const double a = balance(y[k]);
    const double b = balance(y[k + 1]);
    if (a == 0.0) return y[k];
    if (a > 0.0 && b <= 0.0) return y[k] + (y[k + 1] - y[k]) * a / (a - b);
  }
  return y.back();
}

/// Euclidean distance from x to {v : <z, v> = 0} by orthogonal projection.
inline double projection_distance(const Eigen::VectorXd& x, const Eigen::VectorXd& z) {
  const Eigen::VectorXd proj = x - (z.dot(x) / z.squaredNorm()) * z;
  return (x - proj).norm();
}

/// min ||x - v||_1 over the hyperplane <z, v> = 0, by enumerating the LP's
/// basic solutions: move along a single coordinate.
inline double l1_distance_enum(const Eigen::VectorXd& x, const Eigen::VectorXd& z) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    if (z[j] == 0.0) continue;
    Eigen::VectorXd v = x;
    v[j] -= z.dot(x) / z[j];
    best = std::min(best, (x - v).cwiseAbs().sum());
  }
  return best;
}

/// min ||x - v||_inf over the hyperplane, enumerating the vertices (sign
/// vectors) of the unit cube as LP basic directions.
inline double linf_distance_enum(const Eigen::VectorXd& x, const Eigen::VectorXd& z) {
  const int n = static_cast<int>(z.size());
  double best = std::numeric_limits<double>::infinity();
  for (int mask = 0; mask < (1 << n); ++mask) {
    Eigen::VectorXd s(n);
    for (int i = 0; i < n; ++i) s[i] = (mask >> i) & 1 ? 1.0 : -1.0;
    const double zs = z.dot(s);
    if (zs == 0.0) continue;
    const Eigen::VectorXd v = x - (z.dot(x) / zs) * s;
    best = std::min(best, (x - v).cwiseAbs().maxCoeff());
  }
  return best;
}

/// Closed-form separating functional of the mean with outcomes (0, 1) under
/// l_inf (dual of l_1) normalization.
inline Eigen::Vector2d mean01_functional(double r) {
  const double s = std::max(r, 1.0 - r);
  return {-r / s, (1.0 - r) / s};
}

}  // namespace elicit::oracle
