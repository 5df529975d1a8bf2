#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("elicit_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + ELICIT_CLI + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string spec(const std::string& name) { return std::string(ELICIT_SPECS_DIR) + "/" + name + ".json"; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Cli, CheckExitCodes) {
  const fs::path out = scratch("check");
  EXPECT_EQ(run("check --spec " + spec("mean") + " --trials 50 --out " + out.string()), 0);
  EXPECT_EQ(nlohmann::json::parse(slurp(out / "report.json"))["verdict"], "elicitable-evidence");
  EXPECT_EQ(run("check --spec " + spec("variance") + " --trials 50 --out " + out.string()), 2);
  EXPECT_EQ(run("replay --out " + out.string()), 2);
  EXPECT_EQ(run("check --spec " + spec("quantile") + " --trials 50 --out " + out.string()), 2);
}

TEST(Cli, SeparateAndScore) {
  const fs::path out = scratch("score");
  EXPECT_EQ(run("separate --spec " + spec("mean") + " --grid 9 --trials 20 --out " + out.string()), 0);
  EXPECT_TRUE(fs::exists(out / "family.csv"));
  EXPECT_EQ(run("separate --spec " + spec("mean") + " --level 0.9999 --trials 20 --out " + out.string()), 4);
  EXPECT_EQ(run("score --spec " + spec("expectile") + " --grid 32 --trials 50 --out " + out.string()), 0);
  EXPECT_TRUE(fs::exists(out / "scoring.csv"));
  EXPECT_EQ(run("score --spec " + spec("mean") + " --grid 32 --trials 50 --sign-flip --out " + out.string()), 2);
}

TEST(Cli, UsageErrors) {
  const fs::path out = scratch("usage");
  EXPECT_EQ(run("check --spec " + (out / "missing.json").string() + " --out " + out.string()), 4);
  EXPECT_EQ(run("bogus"), 4);
  EXPECT_EQ(run("check --spec " + spec("mean") + " --grid 2 --out " + out.string()), 4);
}

TEST(Cli, OutputIndependentOfThreads) {
  const fs::path a = scratch("threads_a");
  const fs::path b = scratch("threads_b");
  const std::string args = "score --spec " + spec("mean3") + " --grid 16 --trials 40 --out ";
  ASSERT_EQ(run(args + a.string(), "ELICIT_THREADS=1"), 0);
  ASSERT_EQ(run(args + b.string(), "ELICIT_THREADS=4"), 0);
  for (const char* f : {"report.json", "family.csv", "scoring.csv", "scoring.json"})
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
}

}  // namespace
