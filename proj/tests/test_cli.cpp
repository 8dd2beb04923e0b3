#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"

using json = nlohmann::json;

namespace {

struct Run {
  int status = 0;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(HOROLAB_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string data(const std::string& name) { return std::string(HOROLAB_DATA) + "/" + name; }

// every report carries the schema version and the manifest
void expect_envelope(const json& doc, const std::string& sub) {
  EXPECT_EQ(doc.at("schema_version"), "1.0");
  EXPECT_EQ(doc.at("manifest").at("subcommand"), sub);
  EXPECT_TRUE(doc.at("manifest").at("parameters").is_object());
}

}  // namespace

TEST(Cli, ConstructPadeSection) {
  auto r = run("construct --system " + data("efn.json") + " --degree 2 --points 0 --order 5");
  ASSERT_EQ(r.status, 0) << r.out;
  auto doc = json::parse(r.out);
  expect_envelope(doc, "construct");
  EXPECT_EQ(doc["manifest"]["parameters"]["order"], 5);
  const auto& rep = doc["report"];
  EXPECT_EQ(rep["coefficients"], json({"-12", "-6", "-1", "12", "-6", "1"}));
  EXPECT_EQ(rep["achieved_orders"], json({5}));
}

TEST(Cli, GrowthWritesCsvWithFittedOrder) {
  auto dir = std::filesystem::temp_directory_path() / "horolab_cli_growth";
  std::filesystem::remove_all(dir);
  auto r = run("growth --map exp --rmax 100 --out " + dir.string());
  ASSERT_EQ(r.status, 0) << r.out;
  auto doc = json::parse(r.out);
  expect_envelope(doc, "growth");
  EXPECT_NEAR(doc["report"]["rho"].get<double>(), 1.0, 0.05);
  std::ifstream csv(dir / "growth.csv");
  ASSERT_TRUE(csv);
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line.rfind("# {", 0), 0u);
  std::getline(csv, line);
  EXPECT_EQ(line.rfind("# rho ", 0), 0u);
  std::getline(csv, line);
  EXPECT_EQ(line, "r,T,N,m,residual");
  std::size_t rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 16u);
  EXPECT_EQ(json::parse(std::ifstream(dir / "growth.json")), doc);
}

TEST(Cli, DeterministicAcrossThreadCounts) {
  auto a = run("growth --map exp2 --rgrid 2:200:8 --samples 2048");
  auto b = run("growth --map exp2 --rgrid 2:200:8 --samples 2048");
  auto c = json::parse(run("growth --map exp2 --rgrid 2:200:8 --samples 2048").out);
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  setenv("HOROLAB_THREADS", "3", 1);
  auto d = json::parse(run("growth --map exp2 --rgrid 2:200:8 --samples 2048").out);
  unsetenv("HOROLAB_THREADS");
  EXPECT_EQ(d["manifest"]["threads"], "3");
  EXPECT_EQ(d["report"], c["report"]);
}

TEST(Cli, ModuleErrorsAreJson) {
  auto r = run("construct --system " + data("efn.json") + " --degree 2 --order 9");
  EXPECT_NE(r.status, 0);
  auto doc = json::parse(r.out);
  expect_envelope(doc, "construct");
  EXPECT_EQ(doc["error"]["kind"], "over-constrained");

  auto missing = json::parse(run("solve --system /nonexistent.json").out);
  EXPECT_EQ(missing["error"]["kind"], "data-error");
  auto bad_map = json::parse(run("growth --map sin").out);
  EXPECT_EQ(bad_map["error"]["kind"], "invalid-argument");
}

TEST(Cli, CertifyAndIndependence) {
  auto lg = json::parse(run("certify-lg --germ inv-factorial-squared --truncation 50 --sweep 50,100,200").out);
  EXPECT_FALSE(lg["report"]["bad_primes"].empty());
  EXPECT_TRUE(lg["report"]["sweep"]["refuted"]);
  auto ind = json::parse(run("independence --constants 'sqrt(2)' --degree 2 --height 10 --precision 40").out);
  EXPECT_EQ(ind["report"]["relation"]["text"], "x^2 - 2");
}

TEST(Cli, ZeroLemmaAndSolve) {
  auto z = json::parse(run("zero-lemma --system " + data("efn.json") + " --degree 3").out);
  EXPECT_EQ(z["report"]["measured_c"], 1);
  EXPECT_EQ(z["report"]["wedge"]["indices"].size(), 2u);
  auto s = json::parse(run("solve --system " + data("efn.json") + " --points 0 --truncation 3 --initial 1,1").out);
  EXPECT_EQ(s["report"]["expansions"][0]["solution"][1]["coefficients"], json({"1", "1", "1/2", "1/6"}));
}

TEST(Cli, IsomonodromyFamilyFile) {
  auto r = run("isomono --family " + data("family_corrected.json") + " --precision 15");
  ASSERT_EQ(r.status, 0) << r.out;
  auto doc = json::parse(r.out);
  EXPECT_TRUE(doc["report"]["integrable"]);
  EXPECT_TRUE(doc["report"]["conjugacy"]["conjugate"]);
  auto printed = json::parse(run("isomono --family printed --precision 15").out);
  EXPECT_FALSE(printed["report"]["integrable"]);
  EXPECT_FALSE(printed["report"]["conjugacy"]["conjugate"]);
}
