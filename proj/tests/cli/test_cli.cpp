#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
};

Outcome run(const std::string& args) {
  static int counter = 0;
  const fs::path out = fs::temp_directory_path() / ("hessiso_cli_test_" + std::to_string(::getpid()) + "_" +
                                                    std::to_string(counter++) + ".txt");
  const std::string cmd = std::string(HESSISO_CLI) + " " + args + " > " + out.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  fs::remove(out);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string data(const char* name) { return std::string(HESSISO_DATA_DIR) + "/" + name; }

}  // namespace

TEST(Cli, TensorsReportsTheMetric) {
  const Outcome r = run("tensors --spec " + data("randers3.json") + " --point 1,0.5,-0.2");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("\"g\""), std::string::npos);
  EXPECT_NE(r.out.find("\"curvature_max_abs\""), std::string::npos);
}

TEST(Cli, ReportsAreDeterministic) {
  const std::string args = "legendre-check --spec " + data("profile3.json") + " --samples 30 --seed 9";
  const Outcome a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("\"ok\": true"), std::string::npos);
}

TEST(Cli, ClassifiesTheBundledSamples) {
  const Outcome r = run("classify --spec " + data("profile3.json") + " --input " + data("legendre_samples.csv") + " --band 0.2,1.2");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("\"verdict\": \"legendre\""), std::string::npos);
}

TEST(Cli, SynthThenClassifyRoundTrip) {
  const fs::path csv = fs::temp_directory_path() / ("hessiso_synth_" + std::to_string(::getpid()) + ".csv");
  const Outcome s = run("synth --spec " + data("profile3.json") + " --model linear --a 1.2 --b 0.7 --band 0.2,1.2 --samples 40 --out " +
                    csv.string());
  ASSERT_EQ(s.code, 0) << s.out;
  const Outcome c = run("classify --spec " + data("profile3.json") + " --input " + csv.string() + " --band 0.2,1.2");
  fs::remove(csv);
  ASSERT_EQ(c.code, 0) << c.out;
  EXPECT_NE(c.out.find("\"verdict\": \"linear\""), std::string::npos);
}

TEST(Cli, GlueAndPolar2d) {
  const Outcome g = run("glue --samples 40");
  ASSERT_EQ(g.code, 0) << g.out;
  EXPECT_NE(g.out.find("\"ok\": true"), std::string::npos);
  const Outcome p = run("polar2d --spec " + data("randers2.json") + " --spec2 " + data("randers2_rotated.json"));
  ASSERT_EQ(p.code, 0) << p.out;
  EXPECT_NE(p.out.find("\"isometric\": true"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("no-such-command").code, 2);
  EXPECT_EQ(run("tensors --spec " + data("missing.json") + " --point 1,0,0").code, 2);
  EXPECT_EQ(run("tensors --spec " + data("euclidean3.json") + " --point 0,0,0").code, 2);
  EXPECT_EQ(run("tensors --spec " + data("euclidean3.json") + " --point 1,x,0").code, 2);
  EXPECT_EQ(run("polar2d --spec " + data("randers2.json") + " --spec2 " + data("euclidean3.json")).code, 2);
  // Both 2-D, but the indicatrix lengths differ.
  const Outcome m = run("polar2d --spec " + data("randers2.json") + " --spec2 " + data("euclidean2.json"));
  EXPECT_EQ(m.code, 1) << m.out;
  EXPECT_EQ(run("--help").code, 0);
}
