// Exit-code contract of the jetlag binary over the fixture corpus.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

const std::string kBin = JETLAG_BIN;
const std::string kFix = JETLAG_FIXTURES;

int run(const std::string& args, const std::string& env = "") {
  std::string cmd = env + " " + kBin + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Case {
  const char* command;
  const char* fixture;
  int exit;
};

}  // namespace

TEST(Cli, ExitCodeContract) {
  const Case cases[] = {
      {"analyze", "flat_harmonic_p2.json", 0},      {"analyze", "quartic_p2.json", 2},
      {"analyze", "malformed.json", 64},            {"analyze", "unknown_field.json", 64},
      {"analyze", "finsler_p1.json", 0},            {"analyze", "rich_electro_p2.json", 0},
      {"connection", "autonomous_electro_p2.json", 0}, {"connection", "quartic_p2.json", 2},
      {"torsion", "rich_electro_p2.json", 0},       {"curvature", "sphere_p1.json", 0},
      {"extremal", "sphere_p1.json", 0},            {"extremal", "finsler_p1.json", 64},
      {"extremal", "flat_harmonic_p2.json", 64},    {"residual", "affine_grid_p2.json", 0},
      {"residual", "sphere_p1.json", 64},           {"verify", "flat_harmonic_p2.json", 0},
      {"verify", "asymmetric_g_p2.json", 0},        {"verify", "mis_signed_u_p2.json", 1},
      {"verify", "quartic_p2.json", 1},             {"verify", "malformed.json", 64},
  };
  for (const auto& c : cases)
    EXPECT_EQ(run(std::string(c.command) + " --config " + kFix + "/" + c.fixture), c.exit) << c.command << " " << c.fixture;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run(""), 64);
  EXPECT_EQ(run("analyze"), 64);
  EXPECT_EQ(run("frobnicate --config " + kFix + "/flat_harmonic_p2.json"), 64);
  EXPECT_EQ(run("analyze --config /nonexistent/file.json"), 64);
  EXPECT_EQ(run("analyze --config " + kFix + "/flat_harmonic_p2.json --seed abc"), 64);
  EXPECT_EQ(run("connection --config " + kFix + "/flat_harmonic_p2.json --point 't=1'"), 64);
  EXPECT_EQ(run("--help"), 0);
}

TEST(Cli, ByteIdenticalReportsAcrossRunsAndThreads) {
  const std::string dir = ::testing::TempDir();
  const std::string cfg = " --config " + kFix + "/rich_electro_p2.json";
  ASSERT_EQ(run("analyze" + cfg + " --out " + dir + "/a.json"), 0);
  ASSERT_EQ(run("analyze" + cfg + " --out " + dir + "/b.json", "JETLAG_THREADS=4"), 0);
  ASSERT_EQ(run("curvature" + cfg + " --out " + dir + "/c.json"), 0);
  ASSERT_EQ(run("curvature" + cfg + " --out " + dir + "/d.json", "JETLAG_THREADS=3"), 0);
  EXPECT_FALSE(slurp(dir + "/a.json").empty());
  EXPECT_EQ(slurp(dir + "/a.json"), slurp(dir + "/b.json"));
  EXPECT_EQ(slurp(dir + "/c.json"), slurp(dir + "/d.json"));
}
