#pragma once

// Counting verification: sweeps of the resonance counts with one or two
// frequencies fixed, best-constant reports, and the oracle cross-check.
//
// Keys (defaults in parentheses):
//   gamma, seed_range ("1..1": the first seed drives cell sampling), W (1.0)
//   mu_mode         "worst" | "sampled" ("worst")
//   method          "auto" | "oracle" | "strip" ("auto": strip, plus the
//                   oracle on every query with all scales <= cross_N_max)
//   cross_N_max     (32)
//   mu_list         optional; replaces the sampled level of each cell
//   fix12_N3_list   ([8,16,32,64]), N1 = N2 = N3; fix12_cells (20)
//   fix13_N1_list   ([16,32,64,128,256]); fix13_cells (20)
//   fix1_N_list     ([4,8,16,32,64,128]); fix1_cells (3)
//   fix12_max_slope (1.15), fix1_max_slope (1.15), fix13_max_spread (2.0)
// An empty list skips that family; every list present must be non-empty
// unless all three are given and at least one is non-empty.
//
// A cell is (n1, n2, n3) drawn uniformly from the shells.  With mu_mode
// "worst" (default) the fixed-pair families use the level maximizing the
// count: the levels of the free shell are sorted and the window [mu - W,
// mu + W] slid across them, since the bounds under test are uniform in mu.
// With mu_mode "sampled", and always for fix1, mu = <n2-n1, n2-n3> +
// W (2U - 1), so every window contains a solution.  For fix13 with N3 = N1,
// odd cells take n3 = -n1 + s with |s| <= 2 N2, the near-antipodal pairs that
// realize the largest counts.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "wnls/counting.hpp"
#include "wnls/fit.hpp"
#include "wnls/harness/records.hpp"
#include "wnls/harness/verdict.hpp"
#include "wnls/rng.hpp"

namespace wnls::harness {

enum class Family : std::uint32_t { fix12 = 12, fix13 = 13, fix1 = 1 };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::fix12: return "fix12";
    case Family::fix13: return "fix13";
    default: return "fix1";
  }
}

struct CountCell {
  FreqIndex n1, n2, n3;
  double mu = 0.0;
};

/// Left-aligned window over sorted levels holding the most of them; returns its center.
inline double densest_window(std::vector<double> levels, double W) {
  if (levels.empty()) return 0.0;
  std::sort(levels.begin(), levels.end());
  std::size_t best = 0, best_i = 0;
  for (std::size_t i = 0, j = 0; i < levels.size(); ++i) {
    j = std::max(j, i);
    while (j < levels.size() && levels[j] <= levels[i] + 2.0 * W) ++j;
    if (j - i > best) {
      best = j - i;
      best_i = i;
    }
  }
  return levels[best_i] + W;
}

inline CountCell sample_cell(std::uint64_t seed, Family family, std::uint32_t scale_slot, std::uint32_t cell,
                             std::int64_t N1, std::int64_t N2, std::int64_t N3, double W, const TorusSpec& torus,
                             bool worst = false) {
  UniformStream u(seed, static_cast<std::uint32_t>(family), scale_slot * 4096u + cell, 2u);
  auto pick = [&](std::int64_t N) {
    const auto pts = shell_points(N);
    return pts[u.below(pts.size())];
  };
  CountCell c{pick(N1), pick(N2), pick(N3), 0.0};
  if (family == Family::fix12)
    while (c.n2 == c.n1) c.n2 = pick(N2);
  // With N3 = N1 the level set in n2 is an ellipse centred at (n1 + n3)/2;
  // odd cells put that centre near shell N2, where counts are largest.
  if (family == Family::fix13 && N3 == N1 && cell % 2 == 1) {
    const auto span = static_cast<std::uint64_t>(4 * N2 + 1);
    for (int attempt = 0; attempt < 64; ++attempt) {
      const FreqIndex s{static_cast<std::int64_t>(u.below(span)) - 2 * N2, static_cast<std::int64_t>(u.below(span)) - 2 * N2};
      const FreqIndex n3{s.n1 - c.n1.n1, s.n2 - c.n1.n2};
      if (in_shell(n3, N1)) {
        c.n3 = n3;
        break;
      }
    }
  }
  c.mu = resonance_level(c.n1, c.n2, c.n3, torus) + W * (2.0 * u() - 1.0);
  if (worst && family != Family::fix1) {
    std::vector<double> levels;
    if (family == Family::fix12) {
      for (const auto& n3 : shell_points(N3))
        if (n3 != c.n2) levels.push_back(resonance_level(c.n1, c.n2, n3, torus));
    } else {
      for (const auto& n2 : shell_points(N2))
        if (n2 != c.n1 && n2 != c.n3) levels.push_back(resonance_level(c.n1, n2, c.n3, torus));
    }
    c.mu = densest_window(std::move(levels), W);
  }
  return c;
}

struct CountingPlan {
  TorusSpec torus{};
  std::uint64_t seed = 1;
  double W = 1.0;
  std::string method = "auto";
  std::string mu_mode = "worst";
  std::int64_t cross_N_max = 32;
  std::vector<double> mu_list;
  std::vector<std::int64_t> fix12_N3, fix13_N1, fix1_N;
  std::int64_t fix12_cells = 20, fix13_cells = 20, fix1_cells = 3;
  double fix12_max_slope = 1.15, fix1_max_slope = 1.15, fix13_max_spread = 2.0;
  unsigned workers = 1;

  static CountingPlan from(const Config& cfg) {
    CountingPlan p;
    p.torus = cfg.torus();
    p.seed = cfg.seed_range().first;
    p.W = cfg.get<double>("W", 1.0);
    p.method = cfg.get<std::string>("method", "auto");
    p.mu_mode = cfg.get<std::string>("mu_mode", "worst");
    p.cross_N_max = cfg.get<std::int64_t>("cross_N_max", 32);
    p.mu_list = cfg.get<std::vector<double>>("mu_list", {});
    p.fix12_N3 = cfg.get<std::vector<std::int64_t>>("fix12_N3_list", {8, 16, 32, 64});
    p.fix13_N1 = cfg.get<std::vector<std::int64_t>>("fix13_N1_list", {16, 32, 64, 128, 256});
    p.fix1_N = cfg.get<std::vector<std::int64_t>>("fix1_N_list", {4, 8, 16, 32, 64, 128});
    p.fix12_cells = cfg.get<std::int64_t>("fix12_cells", 20);
    p.fix13_cells = cfg.get<std::int64_t>("fix13_cells", 20);
    p.fix1_cells = cfg.get<std::int64_t>("fix1_cells", 3);
    p.fix12_max_slope = cfg.get<double>("fix12_max_slope", 1.15);
    p.fix1_max_slope = cfg.get<double>("fix1_max_slope", 1.15);
    p.fix13_max_spread = cfg.get<double>("fix13_max_spread", 2.0);
    p.workers = cfg.workers();
    p.validate();
    return p;
  }

  void validate() const {
    if (fix12_N3.empty() && fix13_N1.empty() && fix1_N.empty()) throw ConfigError("counting: every scale list is empty");
    if (method != "auto" && method != "oracle" && method != "strip")
      throw ConfigError("counting: method must be auto, oracle or strip");
    if (mu_mode != "worst" && mu_mode != "sampled") throw ConfigError("counting: mu_mode must be worst or sampled");
    if (!(W >= 0.0)) throw ConfigError("counting: W must be >= 0");
    if (fix12_cells < 1 || fix13_cells < 1 || fix1_cells < 1) throw ConfigError("counting: cell counts must be >= 1");
    for (const auto* list : {&fix12_N3, &fix13_N1, &fix1_N})
      for (auto N : *list)
        if (!is_dyadic(N)) throw ConfigError("counting: scales must be powers of two");
    for (auto N : fix13_N1)
      if (N < 8) throw ConfigError("counting: fix13 needs N1 >= 8 so that N2 <= N1/8 exists");
  }
};

struct CountQuery {
  Family family;
  ResonanceQuery q;
  CountCell cell;
  std::string branch;  // fix13 only: "A" (N2, N3 <= N1/8) or "B" (N3 = N1)
};

inline std::vector<CountQuery> counting_queries(const CountingPlan& p) {
  std::vector<CountQuery> out;
  auto add = [&](Family f, std::uint32_t slot, std::int64_t cells, std::int64_t N1, std::int64_t N2, std::int64_t N3,
                 const std::string& branch) {
    for (std::int64_t c = 0; c < cells; ++c) {
      const CountCell cell = sample_cell(p.seed, f, slot, static_cast<std::uint32_t>(c), N1, N2, N3, p.W, p.torus,
                                         p.mu_mode == "worst" && p.mu_list.empty());
      ResonanceQuery q{N1, N2, N3, cell.mu, p.W, p.torus, true};
      if (p.mu_list.empty()) {
        out.push_back({f, q, cell, branch});
      } else {
        for (double mu : p.mu_list) {
          q.mu = mu;
          CountCell fixed = cell;
          fixed.mu = mu;
          out.push_back({f, q, fixed, branch});
        }
      }
    }
  };
  std::uint32_t slot = 0;
  for (auto N : p.fix12_N3) add(Family::fix12, slot++, p.fix12_cells, N, N, N, "");
  slot = 0;
  for (auto N1 : p.fix13_N1) {
    for (std::int64_t N2 = 1; N2 <= N1 / 8; N2 *= 2) {
      for (std::int64_t N3 = 1; N3 <= N1 / 8; N3 *= 2) add(Family::fix13, slot++, p.fix13_cells, N1, N2, N3, "A");
      add(Family::fix13, slot++, p.fix13_cells, N1, N2, N1, "B");
    }
  }
  slot = 0;
  for (auto N1 : p.fix1_N)
    for (auto N2 : p.fix1_N)
      for (auto N3 : p.fix1_N)
        if (N2 <= N1 && N3 <= N1) add(Family::fix1, slot++, p.fix1_cells, N1, N2, N3, "");
  return out;
}

inline CountRecord run_count(const CountQuery& cq, CountMethod m) {
  switch (cq.family) {
    case Family::fix12: return count_fix12(cq.cell.n1, cq.cell.n2, cq.q, m);
    case Family::fix13: return count_fix13(cq.cell.n1, cq.cell.n3, cq.q, m);
    default: return count_fix1(cq.cell.n1, cq.q, m);
  }
}

inline json count_json(const CountQuery& cq, const CountRecord& r) {
  auto opt = [](const std::optional<FreqIndex>& n) { return n ? to_json(*n) : json(nullptr); };
  json j = {{"kind", "count"},
            {"family", to_string(cq.family)},
            {"gamma", cq.q.torus.gamma_string()},
            {"N1", cq.q.N1},
            {"N2", cq.q.N2},
            {"N3", cq.q.N3},
            {"mu", cq.q.mu},
            {"W", cq.q.W},
            {"wick", cq.q.wick},
            {"n1", opt(r.fixed.n1)},
            {"n2", opt(r.fixed.n2)},
            {"n3", opt(r.fixed.n3)},
            {"method", to_string(r.method)},
            {"count", r.count},
            {"timing", {{"elapsed", r.elapsed}}}};
  if (!cq.branch.empty()) j["branch"] = cq.branch;
  return j;
}

/// Bound of the fixed-(n1, n3) count in each branch.
inline double fix13_bound(const CountQuery& cq) {
  const double N1 = static_cast<double>(cq.q.N1), N2 = static_cast<double>(cq.q.N2);
  return cq.branch == "A" ? std::max(N2 / std::cbrt(N1), 1.0) : std::pow(N2, 2.0 / 3.0);
}

inline SuiteResult run_counting_suite(const Config& cfg, RunWriter* out = nullptr) {
  const CountingPlan p = CountingPlan::from(cfg);
  const auto queries = counting_queries(p);

  auto cross = [&](const CountQuery& cq) {
    return p.method == "auto" && std::max({cq.q.N1, cq.q.N2, cq.q.N3}) <= p.cross_N_max;
  };
  const CountMethod primary = p.method == "oracle" ? CountMethod::oracle : CountMethod::strip;
  std::vector<CountRecord> main(queries.size()), check(queries.size());
  parallel_for(queries.size(), p.workers, [&](std::size_t i) {
    main[i] = run_count(queries[i], primary);
    if (cross(queries[i])) check[i] = run_count(queries[i], CountMethod::oracle);
  });

  SuiteResult res;
  res.suite = "counting";
  std::size_t compared = 0, mismatched = 0;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    if (out) out->emit(count_json(queries[i], main[i]));
    if (cross(queries[i])) {
      if (out) out->emit(count_json(queries[i], check[i]));
      ++compared;
      if (check[i].count != main[i].count) ++mismatched;
    }
  }

  CsvTable table{"counting_summary", {"family", "branch", "scale", "max_count", "constant"}, {}};

  // Fixed (n1, n2): max count against N3.
  if (!p.fix12_N3.empty()) {
    std::map<std::int64_t, std::uint64_t> best;
    for (std::size_t i = 0; i < queries.size(); ++i)
      if (queries[i].family == Family::fix12) best[queries[i].q.N3] = std::max(best[queries[i].q.N3], main[i].count);
    std::vector<std::pair<double, double>> pts;
    for (auto [N, c] : best) {
      pts.emplace_back(static_cast<double>(N), std::max<double>(static_cast<double>(c), 1.0));
      table.add({"fix12", "", std::to_string(N), std::to_string(c), num(static_cast<double>(c) / static_cast<double>(N))});
    }
    json s = {{"max_count", best}};
    if (pts.size() >= 2) {
      const FitResult fit = fit_exponent(pts);
      s["fit"] = to_json(fit);
      res.verdicts.push_back({"fix12_slope", fit.slope <= p.fix12_max_slope,
                              "slope " + fmt(fit.slope) + " (limit " + fmt(p.fix12_max_slope) + ")"});
    }
    res.summary["fix12"] = s;
  }

  // Fixed (n1, n3): best constant per branch and scale.
  if (!p.fix13_N1.empty()) {
    json s = json::object();
    for (std::string branch : {"A", "B"}) {
      std::map<std::int64_t, double> C;
      for (std::size_t i = 0; i < queries.size(); ++i)
        if (queries[i].family == Family::fix13 && queries[i].branch == branch)
          C[queries[i].q.N1] = std::max(C[queries[i].q.N1], static_cast<double>(main[i].count) / fix13_bound(queries[i]));
      std::vector<double> values;
      for (auto [N1, c] : C) {
        values.push_back(c);
        table.add({"fix13", branch, std::to_string(N1), "", num(c)});
      }
      const std::size_t upper = values.size() / 2;  // upper half of the scale range
      double lo = INFINITY, hi = 0.0, overall = 0.0;
      for (std::size_t k = 0; k < values.size(); ++k) {
        overall = std::max(overall, values[k]);
        if (k >= upper) {
          lo = std::min(lo, values[k]);
          hi = std::max(hi, values[k]);
        }
      }
      const double spread = lo > 0.0 ? hi / lo : INFINITY;
      s[branch] = {{"constant_by_N1", C}, {"constant", overall}, {"upper_half_spread", spread}};
      res.verdicts.push_back({"fix13_branch_" + branch, std::isfinite(overall) && overall > 0.0 && spread < p.fix13_max_spread,
                              "C " + fmt(overall) + ", upper-half spread " + fmt(spread) + " (limit " +
                                  fmt(p.fix13_max_spread) + ")"});
    }
    res.summary["fix13"] = s;
  }

  // Fixed n1: max count against N2 N3.
  if (!p.fix1_N.empty()) {
    std::map<std::int64_t, std::uint64_t> best;
    for (std::size_t i = 0; i < queries.size(); ++i)
      if (queries[i].family == Family::fix1) {
        const auto P = queries[i].q.N2 * queries[i].q.N3;
        best[P] = std::max(best[P], main[i].count);
      }
    std::vector<std::pair<double, double>> pts;
    for (auto [P, c] : best) {
      pts.emplace_back(static_cast<double>(P), std::max<double>(static_cast<double>(c), 1.0));
      table.add({"fix1", "", std::to_string(P), std::to_string(c), num(static_cast<double>(c) / static_cast<double>(P))});
    }
    json s = {{"max_count_by_N2N3", best}};
    if (pts.size() >= 2) {
      const FitResult fit = fit_exponent(pts);
      s["fit"] = to_json(fit);
      res.verdicts.push_back({"fix1_slope", fit.slope <= p.fix1_max_slope,
                              "slope " + fmt(fit.slope) + " (limit " + fmt(p.fix1_max_slope) + ")"});
    }
    res.summary["fix1"] = s;
  }

  if (compared > 0)
    res.verdicts.push_back({"cross_method", mismatched == 0,
                            std::to_string(compared) + " queries compared, " + std::to_string(mismatched) + " mismatches"});
  res.summary["queries"] = queries.size();
  res.summary["cross_checked"] = compared;

  if (out) {
    out->emit({{"kind", "summary"}, {"suite", res.suite}, {"summary", res.summary}});
    for (const auto& v : res.verdicts) out->emit(to_json(v));
    out->summary(table);
    out->summary(verdict_table(res));
  }
  return res;
}

}  // namespace wnls::harness
