#include "elicit/family.hpp"

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

double SeparatingFamily::max_jump() const {
  return continuity_profile.empty() ? 0.0 : *std::max_element(continuity_profile.begin(), continuity_profile.end());
}

std::vector<double> level_grid(const PropertySpec& prop, int grid_size, const Tolerances& tol) {
  if (grid_size < 3) throw Error(Errc::InvalidParameter, "grid_size must be >= 3");
  const auto [lo, hi] = accepted_levels(prop, tol);
  std::vector<double> grid(static_cast<std::size_t>(grid_size));
  for (int k = 0; k < grid_size; ++k) grid[k] = lo + (hi - lo) * k / (grid_size - 1);
  grid.back() = hi;
  return grid;
}

SeparatingFamily build_family(const PropertySpec& prop, int grid_size, const FamilyConfig& config) {
  SeparatingFamily fam{prop, level_grid(prop, grid_size, config.separator.tol), {}, config.separator.norm, {}, config};
  fam.functionals = parallel_map(fam.levels.size(), config.threads, [&](std::size_t k) {
    SeparatorConfig sc = config.separator;
    sc.seed = derive_seed(config.separator.seed, k);
    try {
      return separate(prop, fam.levels[k], sc);
    } catch (const Error& e) {
      throw e.at_level(fam.levels[k]);
    }
  });
  for (std::size_t k = 0; k + 1 < fam.functionals.size(); ++k)
    fam.continuity_profile.push_back(dual_norm(fam.functionals[k + 1].z - fam.functionals[k].z, fam.norm));
  return fam;
}

SeparatingFamily sign_flipped(SeparatingFamily fam) {
  for (auto& f : fam.functionals) f.z = -f.z;
  return fam;
}

ContinuityReport continuity_report(const SeparatingFamily& fam, int refinements) {
  if (refinements < 2) throw Error(Errc::InvalidParameter, "continuity_report needs refinements >= 2");
  ContinuityReport rep;
  const int base = static_cast<int>(fam.levels.size());
  for (int k = 0; k <= refinements; ++k) {
    const int size = base << k;
    const SeparatingFamily f = k == 0 ? fam : build_family(fam.prop, size, fam.config);
    rep.grid_sizes.push_back(size);
    rep.steps.push_back(f.levels[1] - f.levels[0]);
    rep.max_jumps.push_back(f.max_jump());
  }
  double num_acc = 0.0;
  double den_acc = 0.0;
  for (std::size_t k = 0; k < rep.steps.size(); ++k) {
    num_acc += rep.max_jumps[k] * rep.steps[k];
    den_acc += rep.steps[k] * rep.steps[k];
  }
  rep.lipschitz = num_acc / den_acc;
  rep.strictly_decreasing = true;
  for (std::size_t k = 1; k < rep.max_jumps.size(); ++k)
    rep.strictly_decreasing = rep.strictly_decreasing && rep.max_jumps[k] < rep.max_jumps[k - 1];
  rep.within_lipschitz = rep.max_jumps.back() <= 2.0 * rep.lipschitz * rep.steps.back();
  rep.pass = rep.strictly_decreasing && rep.within_lipschitz;
  return rep;
}

double distance_to_kernel(const Distribution& x, const SeparatingFunctional& f) {
  return std::abs(f.z.dot(x.weights()));
}

std::vector<double> geometric_levels(const PropertySpec& prop, double r, int count, int side, const Tolerances& tol) {
  const ImageInterval iv = image_interval(prop);
  const auto [lo, hi] = accepted_levels(prop, tol);
  std::vector<double> out;
  for (int k = 1; k <= count; ++k)
    out.push_back(std::clamp(r + (side >= 0 ? 1.0 : -1.0) * iv.width() * std::ldexp(1.0, -k), lo, hi));
  return out;
}

G5Report g5_convergence_check(const PropertySpec& prop, double r, const std::vector<double>& levels,
                              const Distribution& x, const FamilyConfig& config) {
  if (levels.empty()) throw Error(Errc::InvalidParameter, "empty level sequence");
  G5Report rep;
  rep.r = r;
  rep.levels = levels;

  auto at = [&](double level, std::uint64_t index) {
    SeparatorConfig sc = config.separator;
    sc.seed = derive_seed(config.separator.seed, index);
    try {
      return separate(prop, level, sc);
    } catch (const Error& e) {
      throw e.at_level(level);
    }
  };
  const SeparatingFunctional limit = at(r, 0);
  rep.limit_distance = distance_to_kernel(x, limit);
  auto fns = parallel_map(levels.size(), config.threads, [&](std::size_t k) { return at(levels[k], k + 1); });

  double lipschitz = 0.0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const double d = distance_to_kernel(x, fns[k]);
    rep.distances.push_back(d);
    rep.gaps.push_back(std::abs(d - rep.limit_distance));
    const double step = std::abs(levels[k] - r);
    if (step > 0.0) lipschitz = std::max(lipschitz, dual_norm(fns[k].z - limit.z, config.separator.norm) / step);
  }
  rep.modulus = lipschitz * std::abs(levels.back() - r);
  const double tol = config.separator.tol.residual;
  rep.pass = rep.gaps.back() <= 10.0 * rep.modulus + tol && rep.gaps.back() <= std::max(rep.gaps.front(), tol);
  return rep;
}

std::string family_csv(const SeparatingFamily& fam) {
  std::string out = "r";
  for (int i = 1; i <= fam.prop.dim(); ++i) out += ",z_" + std::to_string(i);
  out += ",residual,jump_to_next\n";
  for (std::size_t k = 0; k < fam.functionals.size(); ++k) {
    const auto& f = fam.functionals[k];
    out += num(f.r);
    for (double v : f.z) out += "," + num(v);
    out += "," + num(f.residual) + ",";
    if (k < fam.continuity_profile.size()) out += num(fam.continuity_profile[k]);
    out += "\n";
  }
  return out;
}

}  // namespace elicit
