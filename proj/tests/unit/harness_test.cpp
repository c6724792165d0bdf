#include <gtest/gtest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wnls/harness/harness.hpp"

namespace {

using namespace wnls;
using namespace wnls::harness;
namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("wnls_harness_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::vector<std::string> run_payloads(const Config& cfg, const std::string& name,
                                      SuiteResult (*suite)(const Config&, RunWriter*)) {
  const auto dir = scratch(name);
  {
    RunWriter w(dir, cfg);
    suite(cfg, &w);
  }
  EXPECT_TRUE(verify_run(dir).ok);
  std::vector<std::string> out;
  for (const auto& r : load_payloads(dir)) out.push_back(payload(r));
  return out;
}

Config smoke_counting() { return Config::load(std::string(WNLS_GOLDEN_DIR) + "/counting_smoke.json"); }

TEST(Config, SeedRanges) {
  EXPECT_EQ(parse_seed_range("3").seeds(), (std::vector<std::uint64_t>{3}));
  EXPECT_EQ(parse_seed_range("2..5").seeds(), (std::vector<std::uint64_t>{2, 3, 4, 5}));
  EXPECT_THROW(parse_seed_range("5..2"), ConfigError);
  EXPECT_THROW(parse_seed_range("a..b"), ConfigError);
  EXPECT_THROW(parse_seed_range(""), ConfigError);
}

TEST(Config, FlatSchemaAndTypes) {
  const auto c = Config::parse(R"({"N": 16, "gamma": "one", "N_list": [8, 16], "flag": true})");
  EXPECT_EQ(c.get<std::int64_t>("N", 0), 16);
  EXPECT_EQ(c.get<std::int64_t>("missing", 7), 7);
  EXPECT_EQ(c.torus().gamma(), 1.0);
  EXPECT_EQ(c.get<std::vector<std::int64_t>>("N_list", {}), (std::vector<std::int64_t>{8, 16}));
  EXPECT_THROW(Config::parse(R"({"nested": {"a": 1}})"), ConfigError);
  EXPECT_THROW(Config::parse(R"({"list": [[1]]})"), ConfigError);
  EXPECT_THROW(Config::parse("[1, 2]"), ConfigError);
  EXPECT_THROW(Config::parse("{not json"), ConfigError);
  EXPECT_THROW(c.get<std::string>("N", ""), ConfigError);
}

TEST(Config, HashIgnoresRunLocalKeys) {
  auto a = Config::parse(R"({"N": 16, "workers": 1, "out": "x"})");
  auto b = Config::parse(R"({"out": "y", "workers": 8, "N": 16})");
  EXPECT_EQ(a.hash(), b.hash());
  b.set<std::int64_t>("N", 32);
  EXPECT_NE(a.hash(), b.hash());
  EXPECT_EQ(a.hash().size(), 64u);
}

TEST(Manifest, VerifiesAndDetectsTampering) {
  const auto dir = scratch("manifest");
  const auto cfg = Config::parse(R"({"gamma": "sqrt2"})");
  {
    RunWriter w(dir, cfg);
    w.emit({{"kind", "a"}, {"value", 1}, {"timing", {{"elapsed", 0.5}}}});
    w.emit({{"kind", "b"}, {"value", 2}});
    CsvTable t{"t", {"x"}, {}};
    t.add({"1"});
    w.summary(t);
  }
  const auto check = verify_run(dir);
  EXPECT_TRUE(check.ok);
  EXPECT_EQ(check.records, 2u);

  std::ifstream mf(dir / kManifestFile);
  const json m = json::parse(mf);
  EXPECT_EQ(m.at("artifact_version"), kArtifactVersion);
  EXPECT_EQ(m.at("config_hash"), cfg.hash());
  EXPECT_EQ(m.at("prng_id"), kPrngId);
  EXPECT_EQ(m.at("record_count"), 2);

  std::ofstream(dir / kRecordsFile, std::ios::app) << R"({"kind":"extra"})" << '\n';
  EXPECT_FALSE(verify_run(dir).ok);
}

TEST(Manifest, TimingDoesNotEnterChecksums) {
  EXPECT_EQ(payload({{"a", 1}, {"timing", 3.0}}), payload({{"a", 1}, {"timing", 4.0}}));
  EXPECT_NE(payload({{"a", 1}}), payload({{"a", 2}}));
}

TEST(CountingSuite, ValidationErrors) {
  auto cfg = smoke_counting();
  cfg.set<std::vector<std::int64_t>>("fix12_N3_list", {});
  cfg.set<std::vector<std::int64_t>>("fix13_N1_list", {});
  cfg.set<std::vector<std::int64_t>>("fix1_N_list", {});
  EXPECT_THROW(run_counting_suite(cfg), ConfigError);
  auto bad = smoke_counting();
  bad.set<std::vector<std::int64_t>>("fix12_N3_list", {12});
  EXPECT_THROW(run_counting_suite(bad), ConfigError);
  bad = smoke_counting();
  bad.set<std::string>("method", "guess");
  EXPECT_THROW(run_counting_suite(bad), ConfigError);
}

TEST(CountingSuite, OracleAndStripRunsAgree) {
  auto oracle = smoke_counting(), strip = smoke_counting();
  oracle.set<std::string>("method", "oracle");
  strip.set<std::string>("method", "strip");
  const auto a = run_payloads(oracle, "oracle", run_counting_suite);
  const auto b = run_payloads(strip, "strip", run_counting_suite);
  ASSERT_EQ(a.size(), b.size());
  std::size_t compared = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    json ra = json::parse(a[i]), rb = json::parse(b[i]);
    if (ra.at("kind") != "count") continue;
    ra.erase("method");
    rb.erase("method");
    EXPECT_EQ(ra, rb) << i;
    ++compared;
  }
  EXPECT_GT(compared, 50u);
}

TEST(CountingSuite, SmokeMatchesGoldenRecords) {
  const auto start = std::chrono::steady_clock::now();
  const auto got = run_payloads(smoke_counting(), "smoke", run_counting_suite);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 10.0);
  std::ifstream f(std::string(WNLS_GOLDEN_DIR) + "/counting_smoke.jsonl");
  ASSERT_TRUE(f) << "golden file missing";
  std::vector<std::string> want;
  for (std::string line; std::getline(f, line);)
    if (!line.empty()) want.push_back(payload(json::parse(line)));
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_EQ(got[i], want[i]) << "record " << i;
}

TEST(Determinism, PayloadsIndependentOfWorkerCount) {
  auto one = smoke_counting(), many = smoke_counting();
  many.set<std::int64_t>("workers", 3);
  EXPECT_EQ(run_payloads(one, "w1", run_counting_suite), run_payloads(many, "w3", run_counting_suite));

  auto cs1 = Config::parse(R"({"instances": 200, "max_dim": 6})");
  auto cs3 = cs1;
  cs3.set<std::int64_t>("workers", 3);
  EXPECT_EQ(run_payloads(cs1, "cs1", run_cs_suite), run_payloads(cs3, "cs3", run_cs_suite));
}

TEST(ConvergenceSuite, SingleScaleGivesEmptyTable) {
  const auto cfg = Config::parse(R"({"N_list": [8], "seed_range": "1..2", "delta": 0.01, "dt": 1e-3, "dt_check": false})");
  const auto payloads = run_payloads(cfg, "conv1", run_convergence_suite);
  std::size_t seeds = 0;
  for (const auto& p : payloads) {
    const json r = json::parse(p);
    if (r.at("kind") != "convergence") continue;
    EXPECT_TRUE(r.at("differences").empty());
    ++seeds;
  }
  EXPECT_EQ(seeds, 2u);
  EXPECT_TRUE(run_convergence_suite(cfg).verdicts.empty());
}

TEST(ConvergenceSuite, RejectsNonDyadicChain) {
  EXPECT_THROW(run_convergence_suite(Config::parse(R"({"N_list": [8, 24]})")), ConfigError);
  EXPECT_THROW(run_convergence_suite(Config::parse(R"({"N_list": [8, 32]})")), ConfigError);
  EXPECT_THROW(run_convergence_suite(Config::parse(R"({"N_list": []})")), ConfigError);
}

TEST(ProbabilitySuite, RejectsZeroTrials) {
  EXPECT_THROW(run_probability_suite(Config::parse(R"({"chaos_trials": 0})")), ConfigError);
}

TEST(Checkpoint, RoundTrip) {
  const auto u0 = sample_data({3, TorusSpec(1.41421356237)}, 4);
  const auto tr = evolve(u0, 1e-3, 0.01, kSchemeGl4If, {.record_every = 5});
  std::stringstream ss;
  write_checkpoint(ss, tr, 3);
  const auto back = read_checkpoint(ss);
  EXPECT_EQ(back.header.at("gamma"), "1.41421356237");
  EXPECT_EQ(back.header.at("N"), 4);
  EXPECT_EQ(back.header.at("scheme_id"), kSchemeGl4If);
  EXPECT_EQ(back.header.at("seed"), 3);
  EXPECT_EQ(back.header.at("prng_id"), kPrngId);
  ASSERT_EQ(back.states.size(), tr.states.size());
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    EXPECT_EQ(back.times[k], tr.times[k]);
    for (std::size_t i = 0; i < tr.states[k].size(); ++i) EXPECT_EQ(back.states[k][i], tr.states[k][i]);
  }
}

TEST(Checkpoint, ModesAreLexicographic) {
  const auto tr = evolve(sample_data({1, TorusSpec(1.0)}, 3), 0.01, 0.01);
  std::stringstream ss;
  write_checkpoint(ss, tr, 1);
  std::string line;
  std::getline(ss, line);
  std::getline(ss, line);
  const auto modes = json::parse(line).at("modes");
  for (std::size_t i = 1; i < modes.size(); ++i) {
    const auto a = std::make_pair(modes[i - 1][0].get<int>(), modes[i - 1][1].get<int>());
    const auto b = std::make_pair(modes[i][0].get<int>(), modes[i][1].get<int>());
    EXPECT_LT(a, b);
  }
}

TEST(DivisorSuite, SmallBoundsPass) {
  const auto res = run_divisor_suite(Config::parse(R"({"bounds": [100, 1000, 10000], "spot_checks": 20})"));
  EXPECT_TRUE(res.all_pass());
  EXPECT_THROW(run_divisor_suite(Config::parse(R"({"bounds": [1000, 100]})")), ConfigError);
}

TEST(CsSuite, NoViolations) { EXPECT_TRUE(run_cs_suite(Config::parse(R"({"instances": 500})")).all_pass()); }

}  // namespace
