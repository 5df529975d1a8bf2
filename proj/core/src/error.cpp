#include "elicit/error.hpp"

#include <cstdio>

namespace elicit {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NegativeWeight: return "NegativeWeight";
    case Errc::SumNotOne: return "SumNotOne";
    case Errc::NonFinite: return "NonFinite";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::TOutOfRange: return "TOutOfRange";
    case Errc::InvalidSpace: return "InvalidSpace";
    case Errc::InvalidParameter: return "InvalidParameter";
    case Errc::ConstantProperty: return "ConstantProperty";
    case Errc::LevelOutOfRange: return "LevelOutOfRange";
    case Errc::NotStraddling: return "NotStraddling";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::InsufficientSpan: return "InsufficientSpan";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::NoUpperWitness: return "NoUpperWitness";
    case Errc::ResidualBreach: return "ResidualBreach";
    case Errc::NonpositiveWeight: return "NonpositiveWeight";
    case Errc::BaseLevelOutOfRange: return "BaseLevelOutOfRange";
    case Errc::ConfigParse: return "ConfigParse";
  }
  return "Unknown";
}

const char* signalled_condition(Errc code) noexcept {
  switch (code) {
    case Errc::InsufficientSpan: return "G2";
    case Errc::NoConvergence: return "G1*";
    case Errc::RankDeficient: return "uniqueness";
    case Errc::ResidualBreach: return "G1";
    default: return "";
  }
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

Error Error::at_level(double r) const {
  char buf[64];
  std::snprintf(buf, sizeof buf, " [level %.17g]", r);
  // runtime_error::what() already carries the code prefix; strip it before re-wrapping.
  std::string msg = what();
  const std::string prefix = std::string(to_string(code_)) + ": ";
  if (msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
  Error tagged(code_, msg + buf);
  tagged.level_ = r;
  return tagged;
}

}  // namespace elicit
