#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "mdl/io.hpp"

namespace {

namespace fs = std::filesystem;
using ::testing::HasSubstr;

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(MDL_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

fs::path temp(const std::string& name) { return fs::temp_directory_path() / ("mdl_cli_" + name); }

void write(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

TEST(Cli, ExactBernoulliComplexity) {
  const auto r = run("complexity --model bernoulli --n 2 --method exact");
  EXPECT_EQ(r.status, 0);
  EXPECT_THAT(r.out, HasSubstr("1.321928095"));
}

TEST(Cli, AsymptoticCarriesWarning) {
  const auto r = run("complexity --model bernoulli --n 100 --method asymptotic --format json");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["models"][0]["complexity_bits"].get<double>(), 3.6476761596235217, 1e-9);
  EXPECT_FALSE(j["warnings"].empty());
}

TEST(Cli, GaussianConditionalComplexity) {
  const auto r = run("complexity --model gaussian --K 1 --sigma 1 --n 8");
  EXPECT_EQ(r.status, 0);
  EXPECT_THAT(r.out, HasSubstr("1.174251935"));
}

TEST(Cli, EnumerationCapIsUsageError) {
  EXPECT_EQ(run("complexity --model markov:1 --n 21").status, 2);
  EXPECT_EQ(run("complexity --model markov:1 --n 10").status, 0);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("complexity --model zebra --n 3").status, 2);
  EXPECT_EQ(run("select markov --input x --code nope").status, 2);
  EXPECT_EQ(run("complexity --n notanumber").status, 2);
}

TEST(Cli, MissingFileIsInputError) {
  const auto r = run("select markov --input /nonexistent/seq.txt");
  EXPECT_EQ(r.status, 1);
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, MalformedSequenceIsInputError) {
  const auto p = temp("bad.txt");
  write(p, "0101x");
  EXPECT_EQ(run("select markov --input " + p.string()).status, 1);
  fs::remove(p);
}

TEST(Cli, SelectMarkovOnPeriodicFile) {
  const auto p = temp("periodic.txt");
  ASSERT_EQ(run("generate --spec repeat:0001 --n 400 --output " + p.string()).status, 0);
  const auto r = run("select markov --input " + p.string() + " --format json");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["selected"], "markov:3");
  EXPECT_EQ(j["models"].size(), 6u);
  fs::remove(p);
}

TEST(Cli, SelectPolyOnExactQuadratic) {
  const auto p = temp("quad.csv");
  std::string csv = "x,y\n";
  for (int i = 0; i < 30; ++i) {
    const double x = -3.0 + 0.2 * i;
    csv += std::to_string(x) + "," + std::to_string(2.0 + x - 0.5 * x * x) + "\n";
  }
  write(p, csv);
  const auto r = run("select poly --input " + p.string() + " --code plugin");
  ASSERT_EQ(r.status, 0);
  EXPECT_THAT(r.out, HasSubstr("selected\tpoly:2"));
  fs::remove(p);
}

TEST(Cli, JsonRoundTripsThroughLibrary) {
  const auto p = temp("coin.txt");
  ASSERT_EQ(run("generate --spec bernoulli:0.3 --n 300 --seed 5 --output " + p.string()).status, 0);
  const auto r = run("select markov --input " + p.string() + " --format json --code two-part");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  const auto back = mdl::io::run_report_from_json(j);
  EXPECT_EQ(mdl::io::to_json(back), j);
  fs::remove(p);
}

TEST(Cli, GenerateIsSeededAndParseable) {
  const auto a = run("generate --spec bernoulli:0.5 --n 200 --seed 3");
  const auto b = run("generate --spec bernoulli:0.5 --n 200 --seed 3");
  const auto c = run("generate --spec bernoulli:0.5 --n 200 --seed 4");
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
  EXPECT_EQ(mdl::io::parse_sequence(a.out).size(), 200u);
  EXPECT_EQ(run("generate --spec bernoulli:2 --n 10").status, 2);
}

TEST(Cli, Demo) {
  const auto r = run("demo --n 1000 --format json");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["models"].size(), 3u);
}

}  // namespace
