#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace elicit {

enum class Errc {
  NegativeWeight,
  SumNotOne,
  NonFinite,
  DimensionMismatch,
  ZeroVector,
  TOutOfRange,
  InvalidSpace,
  InvalidParameter,
  ConstantProperty,
  LevelOutOfRange,
  NotStraddling,
  NoConvergence,
  InsufficientSpan,
  RankDeficient,
  NoUpperWitness,
  ResidualBreach,
  NonpositiveWeight,
  BaseLevelOutOfRange,
  ConfigParse,
};

const char* to_string(Errc code) noexcept;

/// Structural condition on the property whose failure the error signals,
/// or an empty string when the error is a plain usage/range problem.
const char* signalled_condition(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }
  const std::optional<double>& level() const noexcept { return level_; }

  /// Copy of this error tagged with the level it occurred at.
  Error at_level(double r) const;

 private:
  Errc code_;
  std::optional<double> level_;
};

}  // namespace elicit
