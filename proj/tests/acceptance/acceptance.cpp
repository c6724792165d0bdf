// Acceptance checks.  With no arguments every criterion runs; otherwise
// only the listed criterion numbers.  One PASS/FAIL line per criterion,
// exit status 1 if any line is FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "wnls/harness/harness.hpp"
#include "wnls/wick.hpp"

namespace {

using namespace wnls;
using namespace wnls::harness;
namespace fs = std::filesystem;

const std::string kGolden = WNLS_GOLDEN_DIR;

struct Outcome {
  bool pass;
  std::string detail;
};

// Folds suite verdicts into one line; `names` picks which verdicts count.
Outcome from_verdicts(const SuiteResult& r, const std::set<std::string>& names = {}) {
  Outcome o{true, ""};
  for (const auto& v : r.verdicts) {
    if (!names.empty() && !names.count(v.name)) continue;
    o.pass = o.pass && v.pass;
    o.detail += (o.detail.empty() ? "" : "; ") + v.name + " " + (v.pass ? "ok" : "FAIL") + " (" + v.detail + ")";
  }
  if (o.detail.empty()) return {false, "no matching verdicts"};
  return o;
}

SpectralField gaussian_field(std::int64_t N, std::uint64_t seed) {
  SpectralField u(N, TorusSpec(presets::kSqrt2));
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = complex_gaussian(seed, static_cast<std::uint32_t>(i), 0u, 5u);
  return u;
}

double rel_l2(const SpectralField& a, const SpectralField& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

Outcome wick_identity() {
  double worst = 0.0;
  for (std::int64_t N : {4, 8})
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const auto u = gaussian_field(N, seed);
      worst = std::max(worst, rel_l2(wick_fast(u, u, u), wick_oracle(u, u, u)));
    }
  return {worst < 1e-12, "200 fields, max relative error " + fmt(worst) + " (limit 1e-12)"};
}

Outcome single_mode() {
  const TorusSpec torus(presets::kSqrt2);
  double worst = 0.0;
  for (FreqIndex n : {FreqIndex{1, 0}, FreqIndex{2, 1}, FreqIndex{-3, 2}}) {
    SpectralField u(4, torus);
    const cplx a0{0.8, -0.3};
    u.set(n, a0);
    const auto tr = evolve(u, 1e-3, 1.0, kSchemeRk4If);
    const double omega = qform(n, torus) - std::norm(a0);
    for (std::size_t k = 0; k < tr.times.size(); ++k)
      worst = std::max(worst, std::abs(tr.states[k].at(n) - a0 * std::polar(1.0, omega * tr.times[k])));
  }
  return {worst < 1e-8, "rk4-if, dt 1e-3, max error " + fmt(worst) + " (limit 1e-8)"};
}

Outcome plancherel() {
  double worst = 0.0;
  std::size_t fields = 0;
  for (std::int64_t N : {4, 8, 16})
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const auto f = gaussian_field(N, seed);
      for (double delta : {0.05, 0.5}) {
        const auto v = windowed_free_wave(f, delta, 257);
        worst = std::max(worst, std::abs(xsb_norm(v, {0.0, 0.0}) / l2_tx(v) - 1.0));
        ++fields;
      }
      // A generic (non-free) space-time field.
      SpaceTimeField w(N, f.torus(), TimeGrid::symmetric(1.0, 129), true);
      for (std::int64_t k = 0; k < w.grid().K; ++k) {
        const double c = cutoff(w.grid().time(k), 0.5);
        for (std::size_t i = 0; i < w.modes(); ++i)
          w.at(k, i) = c * complex_gaussian(seed, static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(i), 6u);
      }
      worst = std::max(worst, std::abs(xsb_norm(w, {0.0, 0.0}) / l2_tx(w) - 1.0));
      ++fields;
    }
  return {worst < 1e-10, std::to_string(fields) + " fields, max relative gap " + fmt(worst) + " (limit 1e-10)"};
}

// Frozen per-seed differences from the first verified run.
Outcome convergence() {
  const auto dir = fs::temp_directory_path() / "wnls_acceptance_converge";
  const Config cfg;
  SuiteResult res;
  {
    RunWriter w(dir, cfg);
    res = run_convergence_suite(cfg, &w);
  }
  Outcome o = from_verdicts(res, {"monotone_differences"});
  std::ifstream f(kGolden + "/convergence_baseline.jsonl");
  if (!f) return {false, "golden baseline missing; " + o.detail};
  std::map<std::uint64_t, json> want;
  for (std::string line; std::getline(f, line);)
    if (!line.empty()) {
      const json r = json::parse(line);
      if (r.at("kind") == "convergence") want[r.at("seed").get<std::uint64_t>()] = r.at("differences");
    }
  double worst = 0.0;
  std::size_t compared = 0;
  for (const auto& r : load_payloads(dir)) {
    if (r.at("kind") != "convergence") continue;
    const auto it = want.find(r.at("seed").get<std::uint64_t>());
    if (it == want.end() || it->second.size() != r.at("differences").size()) return {false, "baseline shape differs"};
    for (std::size_t k = 0; k < it->second.size(); ++k)
      for (const char* key : {"hs_sup", "hs_end", "xsb"}) {
        const double a = r["differences"][k][key].get<double>(), b = it->second[k][key].get<double>();
        worst = std::max(worst, std::abs(a - b) / std::abs(b));
        ++compared;
      }
  }
  const bool baseline = compared > 0 && worst < 1e-9;
  return {o.pass && baseline,
          o.detail + "; baseline " + std::to_string(compared) + " values, max relative deviation " + fmt(worst)};
}

std::vector<std::string> payloads_of(const std::string& tag, const Config& cfg,
                                     SuiteResult (*suite)(const Config&, RunWriter*)) {
  const auto dir = fs::temp_directory_path() / ("wnls_acceptance_det_" + tag);
  {
    RunWriter w(dir, cfg);
    suite(cfg, &w);
  }
  if (!verify_run(dir).ok) return {"manifest verification failed"};
  std::vector<std::string> out;
  for (const auto& r : load_payloads(dir)) out.push_back(payload(r));
  return out;
}

Outcome determinism() {
  struct Case {
    const char* name;
    const char* config;
    SuiteResult (*suite)(const Config&, RunWriter*);
  };
  const Case cases[] = {
      {"count-verify", nullptr, run_counting_suite},
      {"converge", R"({"N_list": [8, 16], "seed_range": "1..2", "dt": 1e-3, "dt_check": false})", run_convergence_suite},
      {"evolve", R"({"N": 8, "T": 0.05, "dt": 1e-3, "seed_range": "1..3", "record_every": 10})", run_evolve_suite},
      {"picard", R"({"N_list": [8], "seed_range": "1..2"})", run_picard_suite},
      {"prob-verify", R"({"chaos_trials": 3000, "N_list": [16, 32], "seed_range": "1..6", "chaos_k2_R": 2})",
       run_probability_suite},
      {"strichartz-scan", R"({"gammas": ["one", "sqrt2"], "N_list": [8, 16], "seed_range": "1..3"})", run_strichartz_suite},
      {"tloc-scan", R"({"delta_list": [0.4, 0.2, 0.1]})", run_tloc_suite},
      {"cs-check", R"({"instances": 300})", run_cs_suite},
      {"divisor-scan", R"({"bounds": [100, 1000, 10000], "spot_checks": 20})", run_divisor_suite},
  };
  std::string bad;
  std::size_t records = 0;
  for (const auto& c : cases) {
    Config cfg = c.config ? Config::parse(c.config) : Config::load(kGolden + "/counting_smoke.json");
    const auto first = payloads_of(std::string(c.name) + "_a", cfg, c.suite);
    const auto again = payloads_of(std::string(c.name) + "_b", cfg, c.suite);
    cfg.set<std::int64_t>("workers", 3);
    const auto threaded = payloads_of(std::string(c.name) + "_c", cfg, c.suite);
    if (first != again || first != threaded || first.size() < 2) bad += std::string(bad.empty() ? "" : " ") + c.name;
    records += first.size();
  }
  return {bad.empty(), std::to_string(std::size(cases)) + " suites, " + std::to_string(records) +
                           " records, 3 runs each (workers 1, 1, 3)" + (bad.empty() ? "" : "; differing: " + bad)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> check;
};

std::vector<Criterion> criteria() {
  return {
      {1, "wick_fast_matches_oracle", wick_identity},
      {2, "single_mode_closed_form", single_mode},
      {3, "conservation", [] { return from_verdicts(run_evolve_suite(Config())); }},
      {4, "counting_fix12_slope", [] { return from_verdicts(run_counting_suite(Config()), {"fix12_slope"}); }},
      {5, "counting_fix13_constants",
       [] { return from_verdicts(run_counting_suite(Config()), {"fix13_branch_A", "fix13_branch_B"}); }},
      {6, "counting_fix1_slope", [] { return from_verdicts(run_counting_suite(Config()), {"fix1_slope"}); }},
      {7, "counting_cross_method", [] { return from_verdicts(run_counting_suite(Config()), {"cross_method"}); }},
      {8, "divisor_pairs", [] { return from_verdicts(run_divisor_suite(Config())); }},
      {9, "chaos_tails",
       [] {
         return from_verdicts(run_probability_suite(Config::parse(R"({"N_list": []})")),
                              {"chaos_k1_gaussian_tail", "chaos_k2_bound"});
       }},
      {10, "linf_growth", [] { return from_verdicts(run_probability_suite(Config()), {"linf_median_slope"}); }},
      {11, "strichartz_slope", [] { return from_verdicts(run_strichartz_suite(Config())); }},
      {12, "picard_contraction", [] { return from_verdicts(run_picard_suite(Config())); }},
      {13, "convergence_monotone", convergence},
      {14, "matrix_cauchy_schwarz", [] { return from_verdicts(run_cs_suite(Config())); }},
      {15, "xsb_plancherel", plancherel},
      {16, "determinism", determinism},
  };
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  bool all = true;
  for (const auto& c : criteria()) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
