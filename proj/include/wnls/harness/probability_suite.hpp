#pragma once

// Probability checks: Gaussian-chaos tails and the sup-norm growth of the
// random data.
//
// Keys (defaults in parentheses):
//   chaos_seed (1), chaos_trials (100000), lambda_grid ([0.5,1,1.5,2])
//   chaos_k2_R (8): radius of the order-2 reference tensor
//   chaos_k2_grid ([0.5,1,2,3,4,6,8]): thresholds in units of ||F_2||
//   chaos_K (4.0): constant of the order-2 bound exp(1 - lambda / (K ||F_2||))
//   split_sample (true): repeat the order-1 tail on seed chaos_seed + 1 and
//                        require agreement within 3 combined standard errors
//   gamma, seed_range ("1..200"), N_list ([16,32,64,128,256]), oversample (4)
//   linf_max_slope (0.45)
// Set chaos_trials to a positive count; an empty N_list skips the sup-norm scan.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "wnls/harness/records.hpp"
#include "wnls/harness/verdict.hpp"
#include "wnls/randomfield.hpp"

namespace wnls::harness {

inline json tail_json(const TailReport& r, const std::string& label) {
  return {{"kind", "tail"},
          {"label", label},
          {"k", r.k},
          {"seed", r.seed},
          {"trials", r.trials},
          {"l2_norm", r.l2_norm},
          {"lambda", r.lambda_grid},
          {"empirical_tail", r.empirical_tail},
          {"standard_error", r.standard_error},
          {"bound_constant", r.bound_constant},
          {"bound", r.bound},
          {"calibrated_K", r.calibrated_K}};
}

inline SuiteResult run_probability_suite(const Config& cfg, RunWriter* out = nullptr) {
  const auto trials = cfg.get<std::int64_t>("chaos_trials", 100000);
  if (trials <= 0) throw ConfigError("probability: chaos_trials must be positive");
  const auto seed = cfg.get<std::uint64_t>("chaos_seed", 1);
  const auto grid1 = cfg.get<std::vector<double>>("lambda_grid", {0.5, 1.0, 1.5, 2.0});
  const auto R = cfg.get<std::int64_t>("chaos_k2_R", 8);
  const auto grid2_units = cfg.get<std::vector<double>>("chaos_k2_grid", {0.5, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0});
  const double K = cfg.get<double>("chaos_K", 4.0);
  const bool split = cfg.get<bool>("split_sample", true);
  const auto N_list = cfg.get<std::vector<std::int64_t>>("N_list", {16, 32, 64, 128, 256});
  const auto oversample = cfg.get<std::int64_t>("oversample", 4);
  const double max_slope = cfg.get<double>("linf_max_slope", 0.45);
  const unsigned workers = cfg.workers();
  if (grid1.empty() || grid2_units.empty()) throw ConfigError("probability: lambda grids must be non-empty");
  if (R < 1) throw ConfigError("probability: chaos_k2_R must be >= 1");
  if (N_list.size() == 1) throw ConfigError("probability: N_list needs >= 2 scales (or none)");

  SuiteResult res;
  res.suite = "probability";
  CsvTable table{"probability_summary", {"check", "lambda_or_N", "empirical", "reference", "standard_error"}, {}};
  const auto n = static_cast<std::uint64_t>(trials);

  // Order 1, unit coefficient: |g| has tail exp(-lambda^2) exactly.
  const ChaosTensor unit{1, 1, {1.0}};
  const TailReport t1 = chaos_tail(unit, grid1, n, seed, K, workers);
  bool within = true;
  std::string worst;
  double worst_z = 0.0;
  for (std::size_t i = 0; i < grid1.size(); ++i) {
    const double exact = std::exp(-grid1[i] * grid1[i]);
    const double se = std::sqrt(exact * (1.0 - exact) / static_cast<double>(n));
    const double z = se > 0.0 ? std::abs(t1.empirical_tail[i] - exact) / se : 0.0;
    within = within && z <= 3.0;
    if (z >= worst_z) {
      worst_z = z;
      worst = "max |z| " + fmt(z) + " at lambda " + fmt(grid1[i]);
    }
    table.add({"k1", num(grid1[i]), num(t1.empirical_tail[i]), num(exact), num(se)});
  }
  res.verdicts.push_back({"chaos_k1_gaussian_tail", within, worst + " (limit 3)"});

  // Order 2 reference tensor against exp(1 - lambda / (K ||F||)).
  const ChaosTensor F2 = reference_tensor_k2(R);
  std::vector<double> grid2;
  for (double u : grid2_units) grid2.push_back(u * F2.l2_norm());
  const TailReport t2 = chaos_tail(F2, grid2, n, seed, K, workers);
  std::size_t violations = 0;
  for (std::size_t i = 0; i < grid2.size(); ++i) {
    if (t2.empirical_tail[i] > t2.bound[i]) ++violations;
    table.add({"k2", num(grid2[i]), num(t2.empirical_tail[i]), num(t2.bound[i]), num(t2.standard_error[i])});
  }
  res.verdicts.push_back({"chaos_k2_bound", violations == 0,
                          std::to_string(violations) + " of " + std::to_string(grid2.size()) +
                              " thresholds above the bound; calibrated K " + fmt(t2.calibrated_K)});

  json summary = {{"k1", {{"l2_norm", t1.l2_norm}}}, {"k2", {{"l2_norm", t2.l2_norm}, {"calibrated_K", t2.calibrated_K}}}};
  if (out) {
    out->emit(tail_json(t1, "k1_unit"));
    out->emit(tail_json(t2, "k2_reference"));
  }

  if (split) {
    const TailReport tb = chaos_tail(unit, grid1, n, seed + 1, K, workers);
    double zmax = 0.0;
    for (std::size_t i = 0; i < grid1.size(); ++i) {
      const double se = std::hypot(t1.standard_error[i], tb.standard_error[i]);
      const double d = std::abs(t1.empirical_tail[i] - tb.empirical_tail[i]);
      zmax = std::max(zmax, se > 0.0 ? d / se : (d > 0.0 ? INFINITY : 0.0));
    }
    res.verdicts.push_back({"split_sample_consistency", zmax <= 3.0, "max |z| " + fmt(zmax) + " (limit 3)"});
    summary["split_sample_max_z"] = zmax;
    if (out) out->emit(tail_json(tb, "k1_unit_split"));
  }

  if (!N_list.empty()) {
    const auto seeds = cfg.get<std::string>("seed_range", "1..200");
    const LinfScan s = linf_scan(parse_seed_range(seeds).seeds(), N_list, cfg.torus(), oversample, workers);
    for (std::size_t k = 0; k < N_list.size(); ++k) {
      if (out)
        out->emit({{"kind", "linf"},
                   {"gamma", cfg.torus().gamma_string()},
                   {"N", N_list[k]},
                   {"oversample", oversample},
                   {"median", s.median[k]},
                   {"p99", s.p99[k]},
                   {"values", s.values[k]}});
      table.add({"linf_median", std::to_string(N_list[k]), num(s.median[k]), "", ""});
    }
    const bool slope_ok = s.median_fit.slope <= max_slope;
    const bool decreasing = s.median_fit_upper.slope < s.median_fit_lower.slope;
    res.verdicts.push_back({"linf_median_slope", slope_ok && decreasing,
                            "slope " + fmt(s.median_fit.slope) + " (limit " + fmt(max_slope) + "), lower half " +
                                fmt(s.median_fit_lower.slope) + ", upper half " + fmt(s.median_fit_upper.slope)});
    summary["linf"] = {{"median_fit", to_json(s.median_fit)},
                       {"p99_fit", to_json(s.p99_fit)},
                       {"lower_fit", to_json(s.median_fit_lower)},
                       {"upper_fit", to_json(s.median_fit_upper)}};
  }

  res.summary = summary;
  if (out) {
    out->emit({{"kind", "summary"}, {"suite", res.suite}, {"summary", res.summary}});
    for (const auto& v : res.verdicts) out->emit(to_json(v));
    out->summary(table);
    out->summary(verdict_table(res));
  }
  return res;
}

}  // namespace wnls::harness
