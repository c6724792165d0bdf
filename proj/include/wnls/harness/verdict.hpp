#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "wnls/harness/records.hpp"
#include "wnls/fit.hpp"
#include "wnls/torus.hpp"

namespace wnls::harness {

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::vector<Verdict> verdicts;
  json summary = json::object();

  bool all_pass() const {
    for (const auto& v : verdicts)
      if (!v.pass) return false;
    return true;
  }
};

inline json to_json(const Verdict& v) { return {{"kind", "verdict"}, {"name", v.name}, {"pass", v.pass}, {"detail", v.detail}}; }

inline json to_json(const FreqIndex& n) { return json::array({n.n1, n.n2}); }

inline json to_json(const FitResult& f) { return {{"slope", f.slope}, {"intercept", f.intercept}, {"r_squared", f.r_squared}}; }

inline std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

/// Verdict rows plus one CSV table for the run directory.
inline CsvTable verdict_table(const SuiteResult& r) {
  CsvTable t{r.suite + "_verdicts", {"name", "pass", "detail"}, {}};
  for (const auto& v : r.verdicts) t.add({v.name, v.pass ? "PASS" : "FAIL", v.detail});
  return t;
}

}  // namespace wnls::harness
