#pragma once

// Convergence study of the nonlinear part w_N = u_N - e^{itD} u_{0,N} along a
// dyadic chain of truncations sharing nested random data.
//
// Keys (defaults in parentheses):
//   gamma, seed_range ("1..5"), N_list ([8,16,32,64]), delta (0.01)
//   dt (1e-4): must divide delta; scheme ("rk4-if"); s_prime (0.05); b0 (0.51)
//   dt_check (true): repeat with 2 dt and report the largest relative change
//   min_monotone (4): seeds whose differences must decrease in N
//   dt_tolerance (0.05)
//
// For each seed and N the flow is run over [-2 delta, 2 delta] on the grid
// t_k = k dt.  Reported per consecutive pair (N, 2N):
//   hs_sup  sup_{|t| <= delta} ||w_2N(t) - w_N(t)||_{H^s'}   (the verdict norm)
//   hs_end  the same at t = delta
//   xsb     ||phi_delta (w_2N - w_N)||_{X^{s', b0}} on [-2 delta, 2 delta]

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "wnls/cutoff.hpp"
#include "wnls/flow.hpp"
#include "wnls/harness/records.hpp"
#include "wnls/harness/verdict.hpp"
#include "wnls/norms.hpp"
#include "wnls/randomfield.hpp"
#include "wnls/spacetime.hpp"

namespace wnls::harness {

struct ConvergencePlan {
  TorusSpec torus{};
  std::vector<std::uint64_t> seeds;
  std::vector<std::int64_t> N_list;
  double delta = 0.01, dt = 1e-4, s_prime = 0.05, b0 = 0.51, dt_tolerance = 0.05;
  std::string scheme = kSchemeRk4If;
  bool dt_check = true;
  std::int64_t min_monotone = 4;
  unsigned workers = 1;

  static ConvergencePlan from(const Config& cfg) {
    ConvergencePlan p;
    p.torus = cfg.torus();
    p.seeds = parse_seed_range(cfg.get<std::string>("seed_range", "1..5")).seeds();
    p.N_list = cfg.get<std::vector<std::int64_t>>("N_list", {8, 16, 32, 64});
    p.delta = cfg.get<double>("delta", 0.01);
    p.dt = cfg.get<double>("dt", 1e-4);
    p.s_prime = cfg.get<double>("s_prime", 0.05);
    p.b0 = cfg.get<double>("b0", 0.51);
    p.scheme = cfg.get<std::string>("scheme", kSchemeRk4If);
    p.dt_check = cfg.get<bool>("dt_check", true);
    p.min_monotone = cfg.get<std::int64_t>("min_monotone", 4);
    p.dt_tolerance = cfg.get<double>("dt_tolerance", 0.05);
    p.workers = cfg.workers();
    if (p.N_list.empty()) throw ConfigError("convergence: N_list is empty");
    for (std::size_t i = 0; i < p.N_list.size(); ++i)
      if (!is_dyadic(p.N_list[i]) || (i > 0 && p.N_list[i] != 2 * p.N_list[i - 1]))
        throw ConfigError("convergence: N_list must be a dyadic chain N, 2N, 4N, ...");
    if (!(p.delta > 0.0) || !(p.dt > 0.0)) throw ConfigError("convergence: delta and dt must be positive");
    if (std::abs(p.delta / p.dt - std::round(p.delta / p.dt)) > 1e-9 * (p.delta / p.dt))
      throw ConfigError("convergence: dt must divide delta");
    return p;
  }
};

/// w_N(t_k) on the grid t_k = k dt, k = -2 spd .. 2 spd, spd = delta / dt.
inline std::vector<SpectralField> nonlinear_part(const SpectralField& u0, double delta, double dt,
                                                 const std::string& scheme) {
  const auto spd = static_cast<std::int64_t>(std::llround(delta / dt));
  const double h = delta / static_cast<double>(spd);
  const double T = 2.0 * delta;
  const Trajectory fwd = evolve(u0, h, T, scheme, {.record_every = 1, .log_energy = false});
  const Trajectory bwd = evolve(u0, -h, -T, scheme, {.record_every = 1, .log_energy = false});
  std::vector<SpectralField> w;
  w.reserve(static_cast<std::size_t>(4 * spd + 1));
  for (std::int64_t k = -2 * spd; k <= 2 * spd; ++k) {
    const auto& tr = k < 0 ? bwd : fwd;
    const auto idx = static_cast<std::size_t>(std::abs(k));
    const double t = static_cast<double>(k) * h;
    SpectralField wk = tr.states[idx];
    const SpectralField lin = propagate(u0, t);
    for (std::size_t i = 0; i < wk.size(); ++i) wk[i] -= lin[i];
    w.push_back(std::move(wk));
  }
  return w;
}

struct PairDifference {
  double hs_sup = 0.0, hs_end = 0.0, xsb = 0.0;
};

inline PairDifference pair_difference(const std::vector<SpectralField>& coarse, const std::vector<SpectralField>& fine,
                                      double delta, double s_prime, double b0) {
  const std::int64_t N = fine.front().N();
  const auto K = static_cast<std::int64_t>(fine.size());
  const std::int64_t spd = (K - 1) / 4;
  const TimeGrid grid = TimeGrid::symmetric(2.0 * delta, K);
  SpaceTimeField d(N, fine.front().torus(), grid, true);
  PairDifference r;
  for (std::int64_t k = 0; k < K; ++k) {
    SpectralField diff = coarse[static_cast<std::size_t>(k)].resized(N);
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = fine[static_cast<std::size_t>(k)][i] - diff[i];
    if (k >= spd && k <= 3 * spd) {
      const double h = sobolev_norm(diff, s_prime);
      r.hs_sup = std::max(r.hs_sup, h);
      if (k == 3 * spd) r.hs_end = h;
    }
    const double phi = cutoff(grid.time(k), delta);
    for (auto& c : diff.coeffs()) c *= phi;
    d.set_slice(k, diff);
  }
  r.xsb = xsb_norm(d, {s_prime, b0});
  return r;
}

/// Differences for one seed over the chain, one entry per consecutive pair.
inline std::vector<PairDifference> convergence_chain(const ConvergencePlan& p, std::uint64_t seed, double dt) {
  std::vector<PairDifference> out;
  std::vector<SpectralField> prev;
  for (auto N : p.N_list) {
    auto w = nonlinear_part(sample_data({seed, p.torus}, N), p.delta, dt, p.scheme);
    if (!prev.empty()) out.push_back(pair_difference(prev, w, p.delta, p.s_prime, p.b0));
    prev = std::move(w);
  }
  return out;
}

inline bool strictly_decreasing(const std::vector<PairDifference>& d) {
  for (std::size_t i = 1; i < d.size(); ++i)
    if (!(d[i].hs_sup < d[i - 1].hs_sup)) return false;
  return true;
}

inline SuiteResult run_convergence_suite(const Config& cfg, RunWriter* out = nullptr) {
  const ConvergencePlan p = ConvergencePlan::from(cfg);
  const std::size_t S = p.seeds.size();
  std::vector<std::vector<PairDifference>> base(S), coarse_dt(S);
  parallel_for(S, p.workers, [&](std::size_t i) {
    base[i] = convergence_chain(p, p.seeds[i], p.dt);
    if (p.dt_check && p.N_list.size() >= 2) coarse_dt[i] = convergence_chain(p, p.seeds[i], 2.0 * p.dt);
  });

  SuiteResult res;
  res.suite = "convergence";
  CsvTable table{"convergence_summary", {"seed", "N", "2N", "hs_sup", "hs_end", "xsb", "hs_sup_2dt"}, {}};
  std::int64_t monotone = 0;
  double dt_change = 0.0;
  json seeds = json::array();
  for (std::size_t i = 0; i < S; ++i) {
    const bool mono = strictly_decreasing(base[i]);
    if (mono) ++monotone;
    json rows = json::array();
    for (std::size_t k = 0; k < base[i].size(); ++k) {
      const auto& d = base[i][k];
      json row = {{"N", p.N_list[k]}, {"N2", p.N_list[k + 1]}, {"hs_sup", d.hs_sup}, {"hs_end", d.hs_end}, {"xsb", d.xsb}};
      std::string coarse;
      if (!coarse_dt[i].empty()) {
        const double c = coarse_dt[i][k].hs_sup;
        row["hs_sup_2dt"] = c;
        dt_change = std::max(dt_change, std::abs(c - d.hs_sup) / d.hs_sup);
        coarse = num(c);
      }
      rows.push_back(row);
      table.add({std::to_string(p.seeds[i]), std::to_string(p.N_list[k]), std::to_string(p.N_list[k + 1]), num(d.hs_sup),
                 num(d.hs_end), num(d.xsb), coarse});
    }
    json rec = {{"kind", "convergence"},
                {"gamma", p.torus.gamma_string()},
                {"seed", p.seeds[i]},
                {"delta", p.delta},
                {"dt", p.dt},
                {"scheme", p.scheme},
                {"s_prime", p.s_prime},
                {"b0", p.b0},
                {"differences", rows},
                {"monotone", mono}};
    seeds.push_back(rec);
    if (out) out->emit(rec);
  }

  if (p.N_list.size() >= 2) {
    res.verdicts.push_back({"monotone_differences", monotone >= std::min<std::int64_t>(p.min_monotone, static_cast<std::int64_t>(S)),
                            std::to_string(monotone) + " of " + std::to_string(S) + " seeds decrease (need " +
                                std::to_string(std::min<std::int64_t>(p.min_monotone, static_cast<std::int64_t>(S))) + ")"});
    if (p.dt_check)
      res.verdicts.push_back({"dt_sensitivity", dt_change < p.dt_tolerance,
                              "max relative change at 2 dt " + fmt(dt_change) + " (limit " + fmt(p.dt_tolerance) + ")"});
  }
  res.summary = {{"monotone_seeds", monotone}, {"seeds", S}, {"dt_change", dt_change}};
  if (out) {
    out->emit({{"kind", "summary"}, {"suite", res.suite}, {"summary", res.summary}});
    for (const auto& v : res.verdicts) out->emit(to_json(v));
    out->summary(table);
    out->summary(verdict_table(res));
  }
  return res;
}

}  // namespace wnls::harness
