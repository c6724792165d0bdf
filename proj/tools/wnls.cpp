// Command-line front end for the experiment suites.
//
//   wnls <subcommand> [--config PATH] [--out DIR] [--workers K]
//        [--seed-range A..B] [--gamma PRESET|LITERAL] [--set KEY=JSON]...
//
// Each run writes records.jsonl, per-suite CSV tables and manifest.json into
// the output directory (default runs/<subcommand>, or $WNLS_OUT when set).
// Exit status: 0 when every verdict passes, 1 on any FAIL, 2 on bad input.

#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wnls/harness/harness.hpp"

namespace {

using Suite = std::function<wnls::harness::SuiteResult(const wnls::harness::Config&, wnls::harness::RunWriter*)>;

struct Command {
  std::string name;
  std::string help;
  Suite run;
};

const std::vector<Command>& commands() {
  using namespace wnls::harness;
  static const std::vector<Command> list = {
      {"count-verify", "lattice counting sweeps, exponent fits and cross-method check", run_counting_suite},
      {"converge", "nested-data convergence of the nonlinear part", run_convergence_suite},
      {"evolve", "truncated flow with mass and energy monitoring (optional checkpoints)", run_evolve_suite},
      {"picard", "contraction of the Duhamel map", run_picard_suite},
      {"prob-verify", "Wiener chaos tails and the sup-norm scan", run_probability_suite},
      {"strichartz-scan", "L4/L2 ratio of the free evolution against N", run_strichartz_suite},
      {"tloc-scan", "time-localization exponents", run_tloc_suite},
      {"cs-check", "random instances of the matrix Cauchy-Schwarz inequality", run_cs_suite},
      {"divisor-scan", "divisor-pair running maxima and brute-force spot checks", run_divisor_suite},
  };
  return list;
}

struct Common {
  std::string config, out, seed_range, gamma;
  int workers = 0;
  std::vector<std::string> sets;
};

wnls::harness::Config build_config(const Common& c, const std::string& name) {
  using wnls::harness::Config;
  using wnls::harness::ConfigError;
  nlohmann::json j = c.config.empty() ? nlohmann::json::object() : Config::load(c.config).raw();
  for (const auto& kv : c.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects KEY=JSON, got '" + kv + "'");
    const std::string value = kv.substr(eq + 1);
    // Bare words are taken as strings so --set method=oracle works unquoted.
    j[kv.substr(0, eq)] = nlohmann::json::accept(value) ? nlohmann::json::parse(value) : nlohmann::json(value);
  }
  if (!c.seed_range.empty()) j["seed_range"] = c.seed_range;
  if (!c.gamma.empty()) j["gamma"] = c.gamma;
  if (c.workers > 0) j["workers"] = c.workers;
  if (!c.out.empty()) {
    j["out"] = c.out;
  } else if (const char* env = std::getenv("WNLS_OUT")) {
    j["out"] = std::string(env);
  } else if (!j.contains("out")) {
    j["out"] = "runs/" + name;
  }
  Config cfg(j);
  wnls::harness::parse_seed_range(cfg.get<std::string>("seed_range", "1..1"));
  cfg.torus();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Experiment suites for the Wick-ordered cubic NLS on irrational tori"};
  app.require_subcommand(1);
  Common common;
  std::map<std::string, CLI::App*> subs;
  for (const auto& cmd : commands()) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->add_option("--config", common.config, "JSON config file (flat keys)")->check(CLI::ExistingFile);
    sub->add_option("--out", common.out, "output directory");
    sub->add_option("--workers", common.workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed-range", common.seed_range, "seeds as A..B or A");
    sub->add_option("--gamma", common.gamma, "torus preset (one, sqrt2, golden, three-halves) or decimal literal");
    sub->add_option("--set", common.sets, "override a config key, KEY=JSON (repeatable)");
    subs[cmd.name] = sub;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  for (const auto& cmd : commands()) {
    if (!subs[cmd.name]->parsed()) continue;
    try {
      const auto cfg = build_config(common, cmd.name);
      const auto dir = cfg.get<std::string>("out", "runs/" + cmd.name);
      wnls::harness::SuiteResult res;
      {
        wnls::harness::RunWriter writer(dir, cfg);
        res = cmd.run(cfg, &writer);
      }
      for (const auto& v : res.verdicts)
        std::printf("%s %s: %s\n", v.pass ? "PASS" : "FAIL", v.name.c_str(), v.detail.c_str());
      std::printf("wrote %s\n", dir.c_str());
      return res.all_pass() ? 0 : 1;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 2;
    }
  }
  return 2;
}
