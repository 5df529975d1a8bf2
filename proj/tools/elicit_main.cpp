// elicit: structural checks, separating families and Osband scoring rules
// for properties of finite-outcome distributions.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "elicit/error.hpp"
#include "elicit/report.hpp"

namespace {

int threads_from_env() {
  const char* env = std::getenv("ELICIT_THREADS");
  if (!env || !*env) return 1;
  try {
    return std::max(1, std::stoi(env));
  } catch (...) {
    return 1;
  }
}

elicit::NormSpec parse_norm(const std::string& p) {
  if (p == "inf" || p == "Inf" || p == "infinity") return elicit::NormSpec::linf();
  return elicit::NormSpec::from_p(std::stod(p));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Separating families and consistent scoring functions for simplex properties"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string p = "1";
  int grid = 64;
  int trials = 200;
  std::uint64_t seed = 42;
  std::string out = ".";
  bool force = false;
  double level = NAN;
  double margin = elicit::Tolerances{}.interior_margin;
  double tau_level = elicit::Tolerances{}.level;
  double tau_res = elicit::Tolerances{}.residual;
  bool sign_flip = false;
  std::string report_path;

  auto add_common = [&](CLI::App* cmd, bool needs_spec) {
    auto* opt = cmd->add_option("--spec", spec_path, "Property JSON file");
    if (needs_spec) opt->required();
    cmd->add_option("--p", p, "Ambient norm exponent (1, 2, ..., inf)");
    cmd->add_option("--grid", grid, "Level grid size");
    cmd->add_option("--trials", trials, "Randomized trials per check");
    cmd->add_option("--seed", seed, "Master seed");
    cmd->add_option("--out", out, "Output directory");
    cmd->add_flag("--force", force, "Skip the structural-check gate");
    cmd->add_option("--level", level, "Separate at a single level");
    cmd->add_option("--margin", margin, "Interior margin (fraction of the image trimmed at each end)");
    cmd->add_option("--tau-level", tau_level, "Level-equality tolerance");
    cmd->add_option("--tau-res", tau_res, "Residual tolerance for fitted hyperplanes");
  };

  auto* check = app.add_subcommand("check", "Verify quasi-monotonicity, level convexity, G2 and continuity");
  auto* separate = app.add_subcommand("separate", "Compute the normalized separating family (family.csv)");
  auto* score = app.add_subcommand("score", "Synthesize a scoring rule and check its consistency");
  auto* replay = app.add_subcommand("replay", "Re-check every counterexample witness of a report");
  add_common(check, true);
  add_common(separate, true);
  add_common(score, true);
  add_common(replay, false);
  score->add_flag("--sign-flip", sign_flip, "Debug: negate the family (negative control)");
  replay->add_option("--report", report_path, "Report to replay (default: OUT/report.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : elicit::exit_code::kUsage;
  }

  try {
    elicit::CommandResult result;
    if (replay->parsed()) {
      const std::string path = report_path.empty() ? out + "/report.json" : report_path;
      std::ifstream in(path);
      if (!in) throw elicit::Error(elicit::Errc::ConfigParse, "cannot open report " + path);
      nlohmann::json source;
      try {
        source = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw elicit::Error(elicit::Errc::ConfigParse, path + ": " + e.what());
      }
      elicit::Tolerances tol;
      tol.level = tau_level;
      result = elicit::cmd_replay(source, tol);
    } else {
      elicit::RunConfig config(elicit::load_property_file(spec_path));
      config.norm = parse_norm(p);
      config.grid = grid;
      config.trials = trials;
      config.seed = seed;
      config.out_dir = out;
      config.force = force;
      config.sign_flip = sign_flip;
      config.tol.interior_margin = margin;
      config.tol.level = tau_level;
      config.tol.residual = tau_res;
      config.threads = threads_from_env();
      if (!std::isnan(level)) config.level = level;

      if (check->parsed()) result = elicit::cmd_check(config);
      else if (separate->parsed()) result = elicit::cmd_separate(config);
      else result = elicit::cmd_score(config);
    }
    elicit::write_outputs(out, result);
    std::cout << "verdict: " << result.report.value("verdict", "inconclusive") << " (exit " << result.exit_code << ")\n";
    if (result.report.contains("error")) std::cerr << result.report["error"]["message"].get<std::string>() << "\n";
    return result.exit_code;
  } catch (const elicit::Error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == elicit::Errc::ConfigParse || e.code() == elicit::Errc::InvalidParameter
               ? elicit::exit_code::kUsage
               : elicit::exit_code::kInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return elicit::exit_code::kInternal;
  }
}
