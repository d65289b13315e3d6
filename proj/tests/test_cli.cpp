#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun invoke(const std::string& args) {
  const std::string cmd = std::string(ARBLOBO_CLI_PATH) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST(Cli, BoundCurveTv) {
  const CliRun r = invoke("bound-curve --kind tv --accept 0.5 --horizon 3");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "t,lower_bound\n1,0.5\n2,0.25\n3,0.125\n");
}

TEST(Cli, BoundCurveWasserstein) {
  const CliRun r = invoke("bound-curve --kind wasserstein --accept 0.5 --horizon 1 --d 1 --sup-density 1");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "t,lower_bound\n1,0.03125\n");
}

TEST(Cli, EstimateAccept) {
  const CliRun r = invoke("estimate-accept --target gaussian --sigma2 1 --proposal rw --h 3 --at 0 --n 100000 --seed 7");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  const double mean = j.at("mean"), se = j.at("std_err");
  EXPECT_NEAR(mean, 0.5, 3.0 * se);
  EXPECT_EQ(j.at("samples"), 100000);
  EXPECT_EQ(invoke("estimate-accept --target gaussian --sigma2 1 --proposal rw --h 3 --at 0 --n 100000 --seed 7").out, r.out);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(invoke("bound-curve --kind tv --accept 1.5 --horizon 2").code, 1);
  EXPECT_EQ(invoke("bound-curve --kind nope --accept 0.5").code, 1);
  EXPECT_EQ(invoke("no-such-command").code, 1);
  EXPECT_EQ(invoke("estimate-accept --target gaussian --h -1").code, 1);
}

TEST(Cli, ConfigErrors) {
  const std::string path = testing::TempDir() + "arblobo_bad.json";
  std::ofstream(path) << "{\"experiment\":\"zellner\",\"bogus\":1}";
  EXPECT_EQ(invoke("experiment --config " + path).code, 1);
}

TEST(Cli, PrintConfigRoundTrip) {
  const CliRun r = invoke("experiment --experiment flat-logistic --seed 5 --print-config");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("experiment"), "flat-logistic");
  EXPECT_EQ(j.at("seed"), 5);
  const std::string path = testing::TempDir() + "arblobo_cfg.json";
  std::ofstream(path) << r.out;
  EXPECT_EQ(invoke("experiment --config " + path + " --print-config").out, r.out);
}

TEST(Cli, SmallExperimentDeterministic) {
  const std::string path = testing::TempDir() + "arblobo_small.json";
  std::ofstream(path) << R"j({"experiment":"zellner","replications":2,"samples":100,"grid":[[2,8]],"seed":3})j";
  const CliRun a = invoke("experiment --config " + path + " --threads 1");
  const CliRun b = invoke("experiment --config " + path + " --threads 3");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind("experiment,replication,d,n,h_rule,h,accept_mean", 0), 0u);
}

TEST(Cli, Oracle) {
  EXPECT_EQ(invoke("oracle --chains 500 --seed 1").code, 0);
}

TEST(Cli, Examples) {
  const CliRun r = invoke("examples --samples 2000");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("mixture_origin"), std::string::npos);
}

TEST(Cli, GenerateData) {
  const CliRun r = invoke("generate-data --n 5 --d 2 --seed 1");
  EXPECT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string line;
  int lines = 0;
  std::getline(in, line);
  EXPECT_EQ(line, "y,x1,x2");
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 5);
}
