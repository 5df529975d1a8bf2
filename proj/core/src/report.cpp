#include "elicit/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "elicit/error.hpp"
#include "elicit/quasimono.hpp"
#include "elicit/separator.hpp"

namespace elicit {

using nlohmann::json;

namespace {

std::vector<double> number_array(const json& j, const char* field) {
  if (!j.contains(field)) throw Error(Errc::ConfigParse, std::string("missing field \"") + field + "\"");
  const json& a = j.at(field);
  if (!a.is_array()) throw Error(Errc::ConfigParse, std::string("field \"") + field + "\" must be an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number())
      throw Error(Errc::ConfigParse, std::string("field \"") + field + "[" + std::to_string(i) + "]\" must be a number");
    out.push_back(a[i].get<double>());
  }
  return out;
}

double number_field(const json& j, const char* field) {
  if (!j.contains(field)) throw Error(Errc::ConfigParse, std::string("missing field \"") + field + "\"");
  if (!j.at(field).is_number()) throw Error(Errc::ConfigParse, std::string("field \"") + field + "\" must be a number");
  return j.at(field).get<double>();
}

json vector_json(const Vector& v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

// JSON has no infinities; p = inf is written as the string "inf".
json number_json(double v) {
  if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
  return v;
}

double number_from_json(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    throw Error(Errc::ConfigParse, "expected a number, got \"" + s + "\"");
  }
  return j.get<double>();
}

json map_json(const std::map<std::string, double>& m) {
  json o = json::object();
  for (const auto& [k, v] : m) o[k] = number_json(v);
  return o;
}

json config_json(const RunConfig& c) {
  return {{"p", number_json(c.norm.p)},
          {"grid", c.grid},
          {"trials", c.trials},
          {"seed", c.seed},
          {"segment_grid", c.segment_grid},
          {"eps", c.eps},
          {"force", c.force},
          {"sign_flip", c.sign_flip},
          {"level", c.level ? json(*c.level) : json(nullptr)},
          {"tolerances",
           {{"sum", c.tol.sum},
            {"norm", c.tol.norm},
            {"level", c.tol.level},
            {"residual", c.tol.residual},
            {"rank", c.tol.rank},
            {"interior_margin", c.tol.interior_margin}}}};
}

json envelope(const char* command, const RunConfig& c) {
  return {{"schema", "elicit-report/1"},
          {"command", command},
          {"property", property_to_json(c.property)},
          {"config", config_json(c)},
          {"conditions", json::array()}};
}

int exit_for(OverallVerdict v) {
  switch (v) {
    case OverallVerdict::ElicitableEvidence: return exit_code::kPass;
    case OverallVerdict::Refuted: return exit_code::kRefuted;
    case OverallVerdict::Inconclusive: return exit_code::kInconclusive;
  }
  return exit_code::kInternal;
}

int exit_for(Errc code) {
  switch (code) {
    case Errc::LevelOutOfRange:
    case Errc::ConfigParse:
    case Errc::InvalidParameter:
    case Errc::InvalidSpace:
    case Errc::BaseLevelOutOfRange:
    case Errc::NonpositiveWeight:
      return exit_code::kUsage;
    case Errc::InsufficientSpan:
    case Errc::NoConvergence:
    case Errc::RankDeficient:
    case Errc::ResidualBreach:
    case Errc::NoUpperWitness:
    case Errc::ConstantProperty:
      // Structural failure without a replayable witness.
      return exit_code::kInconclusive;
    default:
      return exit_code::kInternal;
  }
}

CommandResult error_result(json report, const Error& e) {
  json err = {{"code", to_string(e.code())}, {"condition", signalled_condition(e.code())}, {"message", e.what()}};
  if (e.level()) err["level"] = *e.level();
  report["error"] = err;
  const int code = exit_for(e.code());
  report["verdict"] = to_string(OverallVerdict::Inconclusive);
  report["exit_code"] = code;
  return {code, std::move(report), {}};
}

SeparatorConfig separator_config(const RunConfig& c) {
  SeparatorConfig sc;
  sc.norm = c.norm;
  sc.tol = c.tol;
  sc.seed = derive_seed(c.seed, 0x5e9a);
  return sc;
}

std::vector<CheckReport> run_checks(const RunConfig& c) {
  const PropertySpec& prop = c.property;
  std::vector<CheckReport> out;
  out.push_back(check_quasi_monotone(prop, c.trials, c.segment_grid, derive_seed(c.seed, 1), c.threads, c.tol));
  out.push_back(check_strict_on_b0(prop, c.trials, c.segment_grid, derive_seed(c.seed, 2), c.tol));

  const std::vector<double> levels = level_grid(prop, 7, c.tol);
  for (std::size_t k = 1; k + 1 < levels.size(); ++k)
    out.push_back(check_level_convexity(prop, levels[k], 20, derive_seed(c.seed, 10 + k), c.tol));

  // G2 around a few random points whose level is accepted.
  const auto [lo, hi] = accepted_levels(prop, c.tol);
  Rng rng(derive_seed(c.seed, 3));
  int g2_points = 0;
  for (int draw = 0; draw < 10000 && g2_points < 5; ++draw) {
    const Distribution x = sample_distribution(prop.dim(), rng);
    const double r = eval(prop, x);
    if (r < lo || r > hi) continue;
    out.push_back(check_g2(prop, r, x, c.eps, c.trials, derive_seed(c.seed, 20 + g2_points), c.norm, c.tol));
    ++g2_points;
  }

  out.push_back(check_continuity(prop, c.trials, derive_seed(c.seed, 4), c.norm, c.threads, c.tol));
  return out;
}

// Runs the structural checks unless --force; returns an early result when
// they do not support elicitability.
std::optional<CommandResult> gate(const RunConfig& c, json& report) {
  if (c.force) return std::nullopt;
  const auto checks = run_checks(c);
  for (const auto& r : checks) report["conditions"].push_back(to_json(r));
  const OverallVerdict v = aggregate(checks);
  if (v == OverallVerdict::ElicitableEvidence) return std::nullopt;
  report["verdict"] = to_string(v);
  report["exit_code"] = exit_for(v);
  report["note"] = "structural checks did not pass; rerun with --force to separate anyway";
  return CommandResult{exit_for(v), report, {}};
}

json family_summary(const SeparatingFamily& fam, std::uint64_t seed, int trials) {
  json levels = json::array();
  json residuals = json::array();
  json sign_checks = json::array();
  bool all_signs = true;
  for (std::size_t k = 0; k < fam.functionals.size(); ++k) {
    const auto& f = fam.functionals[k];
    levels.push_back(f.r);
    residuals.push_back(f.residual);
    const CheckReport sign = verify_separation(f, fam.prop, trials, derive_seed(seed, k), fam.config.separator.tol);
    all_signs = all_signs && sign.passed();
    if (!sign.passed()) sign_checks.push_back(to_json(sign));
  }
  json profile = json::array();
  for (double j : fam.continuity_profile) profile.push_back(j);
  return {{"grid_size", fam.levels.size()},
          {"levels", levels},
          {"residuals", residuals},
          {"continuity_profile", profile},
          {"max_jump", fam.max_jump()},
          {"sign_structure", all_signs ? "pass" : "fail"},
          {"sign_failures", sign_checks}};
}

}  // namespace

PropertySpec parse_property(const json& j) {
  if (!j.is_object()) throw Error(Errc::ConfigParse, "property spec must be a JSON object");
  if (!j.contains("kind") || !j.at("kind").is_string())
    throw Error(Errc::ConfigParse, "missing string field \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "mean") return PropertySpec::mean(number_array(j, "values"));
    if (kind == "variance") return PropertySpec::variance(number_array(j, "values"));
    if (kind == "expectile") return PropertySpec::expectile(number_array(j, "values"), number_field(j, "tau"));
    if (kind == "quantile") return PropertySpec::quantile(number_array(j, "values"), number_field(j, "alpha"));
    if (kind == "ratio") return PropertySpec::ratio(number_array(j, "numerator"), number_array(j, "denominator"));
  } catch (const Error& e) {
    if (e.code() == Errc::ConfigParse) throw;
    throw Error(Errc::ConfigParse, std::string("invalid ") + kind + " spec: " + e.what());
  }
  if (kind == "custom")
    throw Error(Errc::ConfigParse, "field \"kind\": custom properties are only available through the library API");
  throw Error(Errc::ConfigParse, "field \"kind\": unknown property kind \"" + kind + "\"");
}

PropertySpec load_property_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ConfigParse, "cannot open property spec " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(Errc::ConfigParse,
                path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
  try {
    return parse_property(j);
  } catch (const Error& e) {
    throw Error(Errc::ConfigParse, path + ": " + std::string(e.what()).substr(std::string("ConfigParse: ").size()));
  }
}

json property_to_json(const PropertySpec& prop) {
  json j = {{"kind", to_string(prop.kind())}};
  const auto y = prop.space().labels();
  switch (prop.kind()) {
    case PropertyKind::Ratio:
      j["numerator"] = prop.numerator();
      j["denominator"] = prop.denominator();
      break;
    case PropertyKind::Custom:
      j["name"] = prop.name();
      j["n"] = prop.dim();
      break;
    default: j["values"] = std::vector<double>(y.begin(), y.end());
  }
  if (prop.kind() == PropertyKind::Expectile) j["tau"] = prop.tau();
  if (prop.kind() == PropertyKind::Quantile) j["alpha"] = prop.alpha();
  return j;
}

void RunConfig::validate() const {
  for (double t : {tol.sum, tol.norm, tol.level, tol.residual, tol.rank, tol.interior_margin, eps})
    if (!(t > 0.0)) throw Error(Errc::ConfigParse, "tolerances must be positive");
  if (tol.interior_margin >= 0.5) throw Error(Errc::ConfigParse, "interior margin must be below 0.5");
  if (grid < 3) throw Error(Errc::ConfigParse, "--grid must be >= 3");
  if (trials < 1) throw Error(Errc::ConfigParse, "--trials must be >= 1");
  if (segment_grid < 3) throw Error(Errc::ConfigParse, "segment grid must be >= 3");
}

const char* to_string(OverallVerdict v) noexcept {
  switch (v) {
    case OverallVerdict::ElicitableEvidence: return "elicitable-evidence";
    case OverallVerdict::Refuted: return "refuted";
    case OverallVerdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

OverallVerdict aggregate(const std::vector<CheckReport>& reports) {
  bool inconclusive = false;
  for (const auto& r : reports) {
    if (r.failed() && r.witness) return OverallVerdict::Refuted;
    if (!r.passed()) inconclusive = true;
  }
  return inconclusive ? OverallVerdict::Inconclusive : OverallVerdict::ElicitableEvidence;
}

json to_json(const Distribution& d) { return vector_json(d.weights()); }

json to_json(const CheckReport& r) {
  json j = {{"condition", to_string(r.condition)},
            {"verdict", to_string(r.verdict)},
            {"guarantee", to_string(r.guarantee)},
            {"trials", r.trials},
            {"config", map_json(r.config)},
            {"metrics", map_json(r.metrics)},
            {"note", r.note}};
  if (r.witness) {
    json pts = json::array();
    for (const auto& p : r.witness->points) pts.push_back(to_json(p));
    json w = {{"points", pts},
              {"values", r.witness->values},
              {"params", map_json(r.witness->params)},
              {"description", r.witness->description}};
    if (r.witness->functional) w["functional"] = vector_json(*r.witness->functional);
    j["witness"] = w;
  }
  return j;
}

CheckReport check_report_from_json(const json& j) {
  CheckReport r;
  const auto cond = condition_from_string(j.at("condition").get<std::string>());
  if (!cond) throw Error(Errc::ConfigParse, "unknown condition in report");
  r.condition = *cond;
  const std::string verdict = j.at("verdict").get<std::string>();
  r.verdict = verdict == "pass" ? Verdict::Pass : verdict == "fail" ? Verdict::Fail : Verdict::Inconclusive;
  r.guarantee = j.value("guarantee", "sampled") == "exact" ? Guarantee::Exact : Guarantee::Sampled;
  r.trials = j.value("trials", 0);
  if (j.contains("witness")) {
    const json& w = j.at("witness");
    Witness out;
    for (const auto& p : w.at("points")) out.points.push_back(make_distribution(p.get<std::vector<double>>()));
    out.values = w.at("values").get<std::vector<double>>();
    for (const auto& [k, v] : w.at("params").items()) out.params[k] = number_from_json(v);
    out.description = w.value("description", "");
    if (w.contains("functional")) {
      const auto f = w.at("functional").get<std::vector<double>>();
      out.functional = Eigen::Map<const Vector>(f.data(), static_cast<Eigen::Index>(f.size()));
    }
    r.witness = std::move(out);
  }
  return r;
}

CommandResult cmd_check(const RunConfig& c) {
  json report = envelope("check", c);
  try {
    c.validate();
    const auto checks = run_checks(c);
    for (const auto& r : checks) report["conditions"].push_back(to_json(r));
    const OverallVerdict v = aggregate(checks);
    report["verdict"] = to_string(v);
    report["exit_code"] = exit_for(v);
    return {exit_for(v), report, {}};
  } catch (const Error& e) {
    return error_result(report, e);
  }
}

CommandResult cmd_separate(const RunConfig& c) {
  json report = envelope("separate", c);
  try {
    c.validate();
    if (auto early = gate(c, report)) return *early;
    FamilyConfig fc{separator_config(c), c.threads};
    SeparatingFamily fam = [&] {
      if (!c.level) return build_family(c.property, c.grid, fc);
      // A single requested level is a one-row family.
      require_accepted_level(c.property, *c.level, c.tol);
      SeparatingFamily single{c.property, {*c.level}, {}, c.norm, {}, fc};
      single.functionals.push_back(separate(c.property, *c.level, fc.separator));
      return single;
    }();
    report["family"] = family_summary(fam, derive_seed(c.seed, 5), c.trials);
    const bool ok = report["family"]["sign_structure"] == "pass";
    report["verdict"] = ok ? "elicitable-evidence" : "refuted";
    report["exit_code"] = ok ? exit_code::kPass : exit_code::kRefuted;
    return {ok ? exit_code::kPass : exit_code::kRefuted, report, {{"family.csv", family_csv(fam)}}};
  } catch (const Error& e) {
    return error_result(report, e);
  }
}

CommandResult cmd_score(const RunConfig& c) {
  json report = envelope("score", c);
  try {
    c.validate();
    if (auto early = gate(c, report)) return *early;
    FamilyConfig fc{separator_config(c), c.threads};
    SeparatingFamily fam = build_family(c.property, c.grid, fc);
    if (c.sign_flip) fam = sign_flipped(std::move(fam));
    const ScoringRule rule = synthesize(fam);
    const ConsistencyReport cons = consistency_check(rule, c.property, c.trials, derive_seed(c.seed, 6), c.threads);

    json failures = json::array();
    for (const auto& f : cons.failures)
      failures.push_back({{"P", to_json(f.P)}, {"property_value", f.property_value}, {"argmin_level", f.argmin_level}});
    json consistency = {{"trials", cons.trials},
                        {"matches", cons.matches},
                        {"max_level_error", cons.max_level_error},
                        {"grid_step", cons.grid_step},
                        {"failures", failures}};
    if (c.grid >= 5) {
      const FirstOrderReport fo = first_order_check(rule, fam, c.property, std::min(c.trials, 50), derive_seed(c.seed, 7));
      consistency["first_order_max_relative_error"] = fo.max_relative_error;
    }

    json profile = json::array();
    for (double j : fam.continuity_profile) profile.push_back(j);
    report["family"] = {{"grid_size", fam.levels.size()}, {"continuity_profile", profile}, {"max_jump", fam.max_jump()}};
    report["scoring"] = {{"weight_id", rule.weight_id}, {"base_level", rule.base_level}, {"consistency", consistency}};

    const bool ok = cons.all_match();
    report["verdict"] = ok ? "elicitable-evidence" : "refuted";
    report["exit_code"] = ok ? exit_code::kPass : exit_code::kRefuted;

    json levels = json::array();
    for (double r : rule.levels) levels.push_back(r);
    json meta = {{"property", property_to_json(c.property)},
                 {"weight_id", rule.weight_id},
                 {"r0", rule.base_level},
                 {"grid", levels},
                 {"family_ref", rule.family_ref},
                 {"sign_flip", c.sign_flip}};
    return {ok ? exit_code::kPass : exit_code::kRefuted,
            report,
            {{"family.csv", family_csv(fam)}, {"scoring.csv", scoring_csv(rule)}, {"scoring.json", meta.dump(2) + "\n"}}};
  } catch (const Error& e) {
    return error_result(report, e);
  }
}

CommandResult cmd_replay(const json& source, const Tolerances& tol) {
  json report = {{"schema", "elicit-report/1"}, {"command", "replay"}, {"conditions", json::array()}};
  try {
    if (!source.contains("property")) throw Error(Errc::ConfigParse, "report has no \"property\" field");
    const PropertySpec prop = parse_property(source.at("property"));
    report["property"] = property_to_json(prop);
    json replays = json::array();
    int total = 0;
    int reproduced = 0;
    for (const auto& cj : source.value("conditions", json::array())) {
      if (!cj.contains("witness") || cj.value("verdict", "") != "fail") continue;
      const CheckReport cr = check_report_from_json(cj);
      const ReplayResult rr = replay_witness(prop, cr, tol);
      ++total;
      if (rr.values_reproduced && rr.violation_reproduced) ++reproduced;
      replays.push_back({{"condition", to_string(cr.condition)},
                         {"values_reproduced", rr.values_reproduced},
                         {"violation_reproduced", rr.violation_reproduced},
                         {"max_value_drift", rr.max_value_drift},
                         {"detail", rr.detail}});
    }
    report["replays"] = replays;
    const int code = total == 0 ? exit_code::kPass : reproduced == total ? exit_code::kRefuted : exit_code::kInconclusive;
    report["verdict"] = total == 0 ? "elicitable-evidence" : reproduced == total ? "refuted" : "inconclusive";
    report["exit_code"] = code;
    return {code, report, {}};
  } catch (const Error& e) {
    json err = {{"code", to_string(e.code())}, {"condition", ""}, {"message", e.what()}};
    report["error"] = err;
    report["verdict"] = "inconclusive";
    report["exit_code"] = exit_code::kUsage;
    return {exit_code::kUsage, report, {}};
  } catch (const json::exception& e) {
    report["error"] = {{"code", "ConfigParse"}, {"condition", ""}, {"message", e.what()}};
    report["verdict"] = "inconclusive";
    report["exit_code"] = exit_code::kUsage;
    return {exit_code::kUsage, report, {}};
  }
}

void write_outputs(const std::string& dir, const CommandResult& result) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& contents) {
    std::ofstream out(std::filesystem::path(dir) / name, std::ios::binary);
    if (!out) throw Error(Errc::ConfigParse, "cannot write " + (std::filesystem::path(dir) / name).string());
    out << contents;
  };
  write("report.json", result.report.dump(2) + "\n");
  for (const auto& [name, contents] : result.files) write(name, contents);
}

}  // namespace elicit
