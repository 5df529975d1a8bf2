#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "elicit/check_report.hpp"
#include "elicit/family.hpp"
#include "elicit/properties.hpp"
#include "elicit/scoring.hpp"

namespace elicit {

namespace exit_code {
inline constexpr int kPass = 0;
inline constexpr int kInternal = 1;
inline constexpr int kRefuted = 2;
inline constexpr int kInconclusive = 3;
inline constexpr int kUsage = 4;
}  // namespace exit_code

/// Property JSON, e.g. {"kind": "expectile", "tau": 0.9, "values": [0, 1, 2]}.
/// Fields: kind (mean | expectile | ratio | variance | quantile), values,
/// tau, alpha, numerator, denominator. Throws ConfigParse naming the field.
PropertySpec parse_property(const nlohmann::json& j);
PropertySpec load_property_file(const std::string& path);
nlohmann::json property_to_json(const PropertySpec& prop);

struct RunConfig {
  explicit RunConfig(PropertySpec prop) : property(std::move(prop)) {}

  PropertySpec property;
  NormSpec norm = NormSpec::l1();
  int grid = 64;
  int trials = 200;
  std::uint64_t seed = 42;
  int segment_grid = 17;
  double eps = 0.01;
  Tolerances tol;
  std::string out_dir = ".";
  bool force = false;
  std::optional<double> level;
  bool sign_flip = false;  // debug: negate the family before synthesis
  int threads = 1;

  /// Throws ConfigParse when a tolerance is not positive or grid < 3.
  void validate() const;
};

enum class OverallVerdict { ElicitableEvidence, Refuted, Inconclusive };
const char* to_string(OverallVerdict v) noexcept;

/// Aggregated verdict: refuted on any fail, inconclusive on any
/// inconclusive, otherwise elicitable-evidence.
OverallVerdict aggregate(const std::vector<CheckReport>& reports);

struct CommandResult {
  int exit_code = exit_code::kPass;
  nlohmann::json report;
  /// Extra artifacts (file name, contents) written next to report.json.
  std::vector<std::pair<std::string, std::string>> files;
};

CommandResult cmd_check(const RunConfig& config);
CommandResult cmd_separate(const RunConfig& config);
CommandResult cmd_score(const RunConfig& config);
/// Replays every witness in a previously written report. Exit 2 when every
/// witness reproduces its violation, 3 when one does not, 0 when there is
/// nothing to replay.
CommandResult cmd_replay(const nlohmann::json& report, const Tolerances& tol = {});

/// Writes report.json (2-space indent, trailing newline) and the artifacts.
void write_outputs(const std::string& dir, const CommandResult& result);

nlohmann::json to_json(const CheckReport& report);
CheckReport check_report_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Distribution& d);

}  // namespace elicit
