#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "elicit/simplex.hpp"

namespace elicit {

enum class Condition {
  SegmentMonotone,
  LevelConvex,
  StrictOnB0,
  G2LocallyNonConstant,
  Continuity,
  SignStructure,
};

enum class Verdict { Pass, Fail, Inconclusive };

/// "exact" passes follow from a closed form; "sampled" passes only mean no
/// counterexample was found.
enum class Guarantee { Exact, Sampled };

const char* to_string(Condition c) noexcept;
const char* to_string(Verdict v) noexcept;
const char* to_string(Guarantee g) noexcept;
std::optional<Condition> condition_from_string(const std::string& s);

/// Points and observed values refuting a condition. Everything needed to
/// re-check the violation is stored here; see replay_witness().
struct Witness {
  std::vector<Distribution> points;
  std::vector<double> values;
  std::map<std::string, double> params;
  std::optional<Vector> functional;
  std::string description;
};

struct CheckReport {
  Condition condition = Condition::SegmentMonotone;
  Verdict verdict = Verdict::Pass;
  Guarantee guarantee = Guarantee::Sampled;
  int trials = 0;
  std::optional<Witness> witness;
  std::map<std::string, double> config;
  std::map<std::string, double> metrics;
  std::string note;

  bool passed() const noexcept { return verdict == Verdict::Pass; }
  bool failed() const noexcept { return verdict == Verdict::Fail; }
};

}  // namespace elicit
