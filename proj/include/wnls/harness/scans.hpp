#pragma once

// The remaining suites: evolve (conservation and checkpoints), Picard
// contraction, Strichartz and time-localization scans, the matrix
// Cauchy-Schwarz sweep and the divisor scan.  Each reads its keys with the
// defaults listed above the function, emits one record per cell, and
// returns verdicts.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "wnls/divisors.hpp"
#include "wnls/duhamel.hpp"
#include "wnls/flow.hpp"
#include "wnls/harness/records.hpp"
#include "wnls/harness/verdict.hpp"
#include "wnls/matrix_cs.hpp"
#include "wnls/norms.hpp"
#include "wnls/randomfield.hpp"

namespace wnls::harness {

inline void finish_suite(SuiteResult& res, RunWriter* out, const CsvTable& table) {
  if (!out) return;
  out->emit({{"kind", "summary"}, {"suite", res.suite}, {"summary", res.summary}});
  for (const auto& v : res.verdicts) out->emit(to_json(v));
  out->summary(table);
  out->summary(verdict_table(res));
}

// ---------------------------------------------------------------- checkpoints

/// Header line {gamma, N, dt, scheme_id, seed, prng_id}, then one line per
/// recorded time {t, modes: [[n1, n2, re, im], ...]} in lexicographic (n1, n2) order.
inline void write_checkpoint(std::ostream& os, const Trajectory& tr, std::uint64_t seed) {
  if (tr.states.empty()) throw std::invalid_argument("write_checkpoint: empty trajectory");
  const auto& first = tr.states.front();
  os << json{{"gamma", first.torus().gamma_string()},
             {"N", first.N()},
             {"dt", tr.dt},
             {"scheme_id", tr.scheme_id},
             {"seed", seed},
             {"prng_id", kPrngId}}
            .dump()
     << '\n';
  const auto& pts = first.index().points();
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    json modes = json::array();
    for (std::size_t i = 0; i < pts.size(); ++i)
      modes.push_back({pts[i].n1, pts[i].n2, tr.states[k][i].real(), tr.states[k][i].imag()});
    os << json{{"t", tr.times[k]}, {"modes", modes}}.dump() << '\n';
  }
}

struct Checkpoint {
  json header;
  std::vector<double> times;
  std::vector<SpectralField> states;
};

inline Checkpoint read_checkpoint(std::istream& is) {
  Checkpoint c;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("read_checkpoint: empty input");
  c.header = json::parse(line);
  const TorusSpec torus = parse_gamma(c.header.at("gamma").get<std::string>());
  const auto N = c.header.at("N").get<std::int64_t>();
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const json rec = json::parse(line);
    SpectralField u(N, torus);
    for (const auto& m : rec.at("modes"))
      u.set({m[0].get<std::int64_t>(), m[1].get<std::int64_t>()}, {m[2].get<double>(), m[3].get<double>()});
    c.times.push_back(rec.at("t").get<double>());
    c.states.push_back(std::move(u));
  }
  return c;
}

// ---------------------------------------------------------------- evolve

struct Drift {
  double mass = 0.0, energy = 0.0;  // max relative deviation from t = 0
};

inline Drift conserved_drift(const Trajectory& tr) {
  Drift d;
  const auto& c0 = tr.conserved_log.front();
  for (const auto& c : tr.conserved_log) {
    d.mass = std::max(d.mass, std::abs(c.mass - c0.mass) / std::abs(c0.mass));
    d.energy = std::max(d.energy, std::abs(c.energy - c0.energy) / std::abs(c0.energy));
  }
  return d;
}

// Keys: gamma, seed_range ("1..5"), N (32), dt (1e-4), T (1.0), scheme ("gl4-if"),
// record_every (1000), mass_tolerance (1e-9), energy_tolerance (1e-6),
// checkpoint (false): write checkpoint_seed<S>.jsonl into the run directory.
inline SuiteResult run_evolve_suite(const Config& cfg, RunWriter* out = nullptr) {
  const TorusSpec torus = cfg.torus();
  const auto seeds = parse_seed_range(cfg.get<std::string>("seed_range", "1..5")).seeds();
  const auto N = cfg.get<std::int64_t>("N", 32);
  const double dt = cfg.get<double>("dt", 1e-4), T = cfg.get<double>("T", 1.0);
  const auto scheme = cfg.get<std::string>("scheme", kSchemeGl4If);
  const auto every = cfg.get<std::int64_t>("record_every", 1000);
  const double mtol = cfg.get<double>("mass_tolerance", 1e-9), etol = cfg.get<double>("energy_tolerance", 1e-6);
  const bool checkpoint = cfg.get<bool>("checkpoint", false);
  if (N < 1) throw ConfigError("evolve: N must be >= 1");

  std::vector<Drift> drift(seeds.size());
  std::vector<std::string> failure(seeds.size());
  parallel_for(seeds.size(), cfg.workers(), [&](std::size_t i) {
    try {
      const Trajectory tr = evolve(sample_data({seeds[i], torus}, N), dt, T, scheme, {.record_every = every});
      drift[i] = conserved_drift(tr);
      if (checkpoint && out) {
        std::ofstream f(out->dir() / ("checkpoint_seed" + std::to_string(seeds[i]) + ".jsonl"));
        write_checkpoint(f, tr, seeds[i]);
      }
    } catch (const BlowUpError& e) {
      failure[i] = e.what();
      drift[i] = {INFINITY, INFINITY};
    }
  });

  SuiteResult res;
  res.suite = "evolve";
  CsvTable table{"evolve_summary", {"seed", "mass_drift", "energy_drift"}, {}};
  double worst_m = 0.0, worst_e = 0.0;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    worst_m = std::max(worst_m, drift[i].mass);
    worst_e = std::max(worst_e, drift[i].energy);
    json rec = {{"kind", "evolve"},      {"gamma", torus.gamma_string()}, {"N", N},
                {"dt", dt},              {"T", T},                        {"scheme", scheme},
                {"seed", seeds[i]},      {"prng_id", kPrngId},            {"mass_drift", drift[i].mass},
                {"energy_drift", drift[i].energy}};
    if (!failure[i].empty()) rec["error"] = failure[i];
    if (out) out->emit(rec);
    table.add({std::to_string(seeds[i]), num(drift[i].mass), num(drift[i].energy)});
  }
  res.verdicts.push_back({"mass_drift", worst_m < mtol, "max " + fmt(worst_m) + " (limit " + fmt(mtol) + ", " + scheme + ")"});
  res.verdicts.push_back(
      {"energy_drift", worst_e < etol, "max " + fmt(worst_e) + " (limit " + fmt(etol) + ", " + scheme + ")"});
  res.summary = {{"max_mass_drift", worst_m}, {"max_energy_drift", worst_e}, {"scheme", scheme}};
  finish_suite(res, out, table);
  return res;
}

// ---------------------------------------------------------------- picard

// Keys: gamma, seed_range ("1..5"), N_list ([8,16,32]), delta (0.01), s0 (0.1),
// b0 (0.51), samples_per_delta (512), max_iter (30), contraction_within (3),
// residual_tolerance (1e-8), min_seeds (4).
//
// A seed passes when one of its first `contraction_within` ratios
// ||w_{k+1} - w_k|| / ||w_k - w_{k-1}|| is below 1 and the fixed-point residual
// is below residual_tolerance.  Each N passes with >= min_seeds passing seeds;
// failing seeds are listed (the statement allows a small exceptional set).
inline SuiteResult run_picard_suite(const Config& cfg, RunWriter* out = nullptr) {
  const TorusSpec torus = cfg.torus();
  const auto seeds = parse_seed_range(cfg.get<std::string>("seed_range", "1..5")).seeds();
  const auto N_list = cfg.get<std::vector<std::int64_t>>("N_list", {8, 16, 32});
  const double delta = cfg.get<double>("delta", 0.01);
  PicardOptions opt;
  opt.s0 = cfg.get<double>("s0", 0.1);
  opt.b0 = cfg.get<double>("b0", 0.51);
  opt.samples_per_delta = cfg.get<std::int64_t>("samples_per_delta", 512);
  opt.max_iter = static_cast<int>(cfg.get<std::int64_t>("max_iter", 30));
  const auto within = static_cast<std::size_t>(cfg.get<std::int64_t>("contraction_within", 3));
  const double rtol = cfg.get<double>("residual_tolerance", 1e-8);
  const auto min_seeds = static_cast<std::size_t>(cfg.get<std::int64_t>("min_seeds", 4));
  if (N_list.empty() || seeds.empty()) throw ConfigError("picard: need scales and seeds");

  struct Cell {
    std::int64_t N;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (auto N : N_list)
    for (auto s : seeds) cells.push_back({N, s});
  std::vector<PicardRun> runs(cells.size());
  parallel_for(cells.size(), cfg.workers(), [&](std::size_t i) {
    runs[i] = picard(sample_data({cells[i].seed, torus}, cells[i].N), delta, opt);
    runs[i].seed = cells[i].seed;
    runs[i].w.reset();
  });

  SuiteResult res;
  res.suite = "picard";
  CsvTable table{"picard_summary", {"N", "seed", "first_ratio_below_1", "residual", "converged", "pass"}, {}};
  for (auto N : N_list) {
    std::size_t passing = 0;
    std::string failed;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i].N != N) continue;
      const auto& r = runs[i];
      std::int64_t first = -1;
      for (std::size_t k = 0; k < r.ratios.size(); ++k)
        if (r.ratios[k] < 1.0) {
          first = static_cast<std::int64_t>(k) + 1;
          break;
        }
      const bool ok = first >= 1 && static_cast<std::size_t>(first) <= within && r.residual < rtol && !r.diverged;
      if (ok) {
        ++passing;
      } else {
        failed += (failed.empty() ? "" : " ") + std::to_string(r.seed);
      }
      if (out)
        out->emit({{"kind", "picard"},
                   {"gamma", torus.gamma_string()},
                   {"N", N},
                   {"seed", r.seed},
                   {"delta", delta},
                   {"s0", r.s0},
                   {"b0", r.b0},
                   {"samples_per_delta", opt.samples_per_delta},
                   {"iterate_norms", r.iterate_norms},
                   {"diff_norms", r.diff_norms},
                   {"ratios", r.ratios},
                   {"first_ratio_below_1", first},
                   {"residual", r.residual},
                   {"converged", r.converged},
                   {"diverged", r.diverged},
                   {"pass", ok}});
      table.add({std::to_string(N), std::to_string(r.seed), std::to_string(first), num(r.residual),
                 r.converged ? "true" : "false", ok ? "true" : "false"});
    }
    res.verdicts.push_back({"contraction_N" + std::to_string(N), passing >= std::min(min_seeds, seeds.size()),
                            std::to_string(passing) + " of " + std::to_string(seeds.size()) + " seeds pass" +
                                (failed.empty() ? "" : "; failing seeds: " + failed)});
  }
  res.summary = {{"delta", delta}, {"cells", cells.size()}};
  finish_suite(res, out, table);
  return res;
}

// ---------------------------------------------------------------- strichartz

// Keys: gammas (["one","sqrt2"]; falls back to [gamma] when only gamma is
// set), N_list ([8,16,32,64,128]), seed_range ("1..20"), margin (400),
// max_slope (0.10).  The verdict is on the max-over-seeds ratio; flat data
// is reported alongside.
inline SuiteResult run_strichartz_suite(const Config& cfg, RunWriter* out = nullptr) {
  std::vector<std::string> gammas = {"one", "sqrt2"};
  if (cfg.has("gammas")) {
    gammas = cfg.get<std::vector<std::string>>("gammas", {});
  } else if (cfg.has("gamma")) {
    gammas = {cfg.get<std::string>("gamma", "sqrt2")};
  }
  const auto N_list = cfg.get<std::vector<std::int64_t>>("N_list", {8, 16, 32, 64, 128});
  const auto seeds = parse_seed_range(cfg.get<std::string>("seed_range", "1..20")).seeds();
  const double margin = cfg.get<double>("margin", 400.0);
  const double max_slope = cfg.get<double>("max_slope", 0.10);
  if (gammas.empty() || N_list.size() < 2) throw ConfigError("strichartz: need >= 1 gamma and >= 2 scales");

  SuiteResult res;
  res.suite = "strichartz";
  CsvTable table{"strichartz_summary", {"gamma", "N", "random_max", "flat"}, {}};
  for (const auto& g : gammas) {
    const TorusSpec torus = parse_gamma(g);
    // One work list over (N, seed) plus the flat field per N.
    const std::size_t per = seeds.size() + 1;
    std::vector<double> ratio(N_list.size() * per);
    parallel_for(ratio.size(), cfg.workers(), [&](std::size_t i) {
      const auto N = N_list[i / per];
      const std::size_t j = i % per;
      ratio[i] = j < seeds.size() ? strichartz_ratio(sample_data({seeds[j], torus}, N), margin)
                                  : strichartz_ratio(flat_data(N, torus), margin);
    });
    std::vector<std::pair<double, double>> rnd, flat;
    for (std::size_t k = 0; k < N_list.size(); ++k) {
      const double* r = ratio.data() + k * per;
      const double mx = *std::max_element(r, r + seeds.size());
      rnd.emplace_back(static_cast<double>(N_list[k]), mx);
      flat.emplace_back(static_cast<double>(N_list[k]), r[seeds.size()]);
      if (out) {
        for (std::size_t j = 0; j < seeds.size(); ++j)
          out->emit({{"kind", "strichartz"}, {"gamma", torus.gamma_string()}, {"N", N_list[k]}, {"seed", seeds[j]},
                     {"data", "random"}, {"p", 4}, {"delta", 1.0}, {"value", r[j]}});
        out->emit({{"kind", "strichartz"}, {"gamma", torus.gamma_string()}, {"N", N_list[k]}, {"seed", nullptr},
                   {"data", "flat"}, {"p", 4}, {"delta", 1.0}, {"value", r[seeds.size()]}});
      }
      table.add({torus.gamma_string(), std::to_string(N_list[k]), num(mx), num(r[seeds.size()])});
    }
    const FitResult fr = fit_exponent(rnd), ff = fit_exponent(flat);
    res.summary[g] = {{"random_fit", to_json(fr)}, {"flat_fit", to_json(ff)}};
    res.verdicts.push_back({"slope_gamma_" + torus.gamma_string(), fr.slope <= max_slope,
                            "random max slope " + fmt(fr.slope) + " (limit " + fmt(max_slope) + "), flat slope " +
                                fmt(ff.slope)});
  }
  finish_suite(res, out, table);
  return res;
}

// ---------------------------------------------------------------- time localization

// Keys: gamma, delta_list ([0.4,0.2,0.1,0.05,0.025]), N (8), seed (1),
// K (1025), s (0.1), b (0.51), tolerance (0.05).
//   constant field, X^{0,0}: slope within 0.01 of 1/2 (window mass)
//   random data, X^{s,b}:     slope <= 1/2 - b + tolerance
//   flat data, L^4:            slope >= s/8 - tolerance
inline SuiteResult run_tloc_suite(const Config& cfg, RunWriter* out = nullptr) {
  const TorusSpec torus = cfg.torus();
  const auto deltas = cfg.get<std::vector<double>>("delta_list", {0.4, 0.2, 0.1, 0.05, 0.025});
  const auto N = cfg.get<std::int64_t>("N", 8);
  const auto seed = cfg.get<std::uint64_t>("seed", 1);
  const auto K = cfg.get<std::int64_t>("K", 1025);
  const double s = cfg.get<double>("s", 0.1), b = cfg.get<double>("b", 0.51), tol = cfg.get<double>("tolerance", 0.05);

  SpectralField constant(N, torus);
  constant.set({0, 0}, 1.0);
  const TlocScan window = time_localization_scan(deltas, TlocVariant::xsb, constant, {0.0, 0.0}, K);
  const TlocScan xsb = time_localization_scan(deltas, TlocVariant::xsb, sample_data({seed, torus}, N), {s, b}, K);
  const TlocScan l4 = time_localization_scan(deltas, TlocVariant::l4, flat_data(N, torus));

  SuiteResult res;
  res.suite = "tloc";
  CsvTable table{"tloc_summary", {"family", "delta", "value"}, {}};
  auto emit = [&](const std::string& family, const TlocScan& scan, double ss, double bb, double p) {
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      if (out)
        out->emit({{"kind", "tloc"}, {"gamma", torus.gamma_string()}, {"family", family}, {"N", N}, {"seed", seed},
                   {"delta", deltas[i]}, {"p", p}, {"s", ss}, {"b", bb}, {"value", scan.values[i]}});
      table.add({family, num(deltas[i]), num(scan.values[i])});
    }
  };
  emit("constant_x00", window, 0.0, 0.0, 2.0);
  emit("random_xsb", xsb, s, b, 2.0);
  emit("flat_l4", l4, 0.0, 0.0, 4.0);
  res.verdicts.push_back({"window_mass", std::abs(window.fit.slope - 0.5) < 0.01, "slope " + fmt(window.fit.slope) + " (expect 0.5)"});
  res.verdicts.push_back({"xsb_localization", xsb.fit.slope <= 0.5 - b + tol,
                          "slope " + fmt(xsb.fit.slope) + " (limit " + fmt(0.5 - b + tol) + ")"});
  res.verdicts.push_back({"l4_gain", l4.fit.slope >= s / 8.0 - tol, "slope " + fmt(l4.fit.slope) + " (floor " + fmt(s / 8.0 - tol) + ")"});
  res.summary = {{"window", to_json(window.fit)}, {"xsb", to_json(xsb.fit)}, {"l4", to_json(l4.fit)}};
  finish_suite(res, out, table);
  return res;
}

// ---------------------------------------------------------------- matrix inequality

// Keys: seed (1), instances (10000), max_dim (32).  Entries and b are
// complex Gaussians from stream 3; b is scaled to a random norm in (0, 1].
inline SuiteResult run_cs_suite(const Config& cfg, RunWriter* out = nullptr) {
  const auto seed = cfg.get<std::uint64_t>("seed", 1);
  const auto instances = cfg.get<std::int64_t>("instances", 10000);
  const auto max_dim = cfg.get<std::int64_t>("max_dim", 32);
  if (instances < 1 || max_dim < 1) throw ConfigError("cs-check: instances and max_dim must be >= 1");

  std::vector<CsCheck> checks(static_cast<std::size_t>(instances));
  std::vector<std::pair<std::size_t, std::size_t>> shape(checks.size());
  parallel_for(checks.size(), cfg.workers(), [&](std::size_t t) {
    UniformStream u(seed, static_cast<std::uint32_t>(t), 0u, 3u);
    const std::size_t r = 1 + u.below(static_cast<std::uint64_t>(max_dim));
    const std::size_t c = 1 + u.below(static_cast<std::uint64_t>(max_dim));
    CMatrix A{r, c, std::vector<cplx>(r * c)};
    for (std::size_t k = 0; k < A.a.size(); ++k)
      A.a[k] = complex_gaussian(seed, static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(k) + 1u, 3u);
    std::vector<cplx> b(c);
    double bn = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      b[j] = complex_gaussian(seed, static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(r * c + j) + 1u, 3u);
      bn += std::norm(b[j]);
    }
    const double scale = std::sqrt(u() / bn);
    for (auto& z : b) z *= scale;
    checks[t] = matrix_cs_check(A, b);
    shape[t] = {r, c};
  });

  SuiteResult res;
  res.suite = "cs";
  std::size_t col_viol = 0, row_viol = 0;
  double worst = 0.0;
  for (std::size_t t = 0; t < checks.size(); ++t) {
    const auto& c = checks[t];
    const bool vc = c.lhs > c.rhs_columns * (1.0 + 1e-12), vr = c.lhs > c.rhs_rows * (1.0 + 1e-12);
    col_viol += vc;
    row_viol += vr;
    worst = std::max(worst, c.lhs / std::min(c.rhs_columns, c.rhs_rows));
    if (out)
      out->emit({{"kind", "cs"}, {"instance", t}, {"rows", shape[t].first}, {"cols", shape[t].second}, {"lhs", c.lhs},
                 {"rhs_columns", c.rhs_columns}, {"rhs_rows", c.rhs_rows}});
  }
  res.verdicts.push_back({"column_form", col_viol == 0, std::to_string(col_viol) + " violations"});
  res.verdicts.push_back({"row_form", row_viol == 0, std::to_string(row_viol) + " violations"});
  res.summary = {{"instances", instances}, {"max_lhs_over_rhs", worst}};
  CsvTable table{"cs_summary", {"instances", "column_violations", "row_violations", "max_lhs_over_rhs"}, {}};
  table.add({std::to_string(instances), std::to_string(col_viol), std::to_string(row_viol), num(worst)});
  finish_suite(res, out, table);
  return res;
}

// ---------------------------------------------------------------- divisors

// Keys: bounds ([100,1000,10000,100000,1000000]), seed (1), spot_checks (100),
// spot_max (10000), max_exponent (0.6).
inline SuiteResult run_divisor_suite(const Config& cfg, RunWriter* out = nullptr) {
  const auto bounds = cfg.get<std::vector<std::uint64_t>>("bounds", {100, 1000, 10000, 100000, 1000000});
  const auto seed = cfg.get<std::uint64_t>("seed", 1);
  const auto spots = cfg.get<std::int64_t>("spot_checks", 100);
  const auto spot_max = cfg.get<std::int64_t>("spot_max", 10000);
  const double max_exp = cfg.get<double>("max_exponent", 0.6);
  if (bounds.empty()) throw ConfigError("divisor-scan: bounds must be non-empty");
  for (std::size_t i = 1; i < bounds.size(); ++i)
    if (bounds[i] <= bounds[i - 1]) throw ConfigError("divisor-scan: bounds must increase");

  SuiteResult res;
  res.suite = "divisor";
  CsvTable table{"divisor_summary", {"bound", "argmax", "pairs", "exponent"}, {}};
  const auto recs = divisor_running_max(bounds);
  bool decreasing = true;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    if (i > 0 && !(recs[i].exponent < recs[i - 1].exponent)) decreasing = false;
    if (out)
      out->emit({{"kind", "divisor"}, {"bound", recs[i].bound}, {"argmax", recs[i].argmax}, {"pairs", recs[i].pairs},
                 {"exponent", recs[i].exponent}});
    table.add({std::to_string(recs[i].bound), std::to_string(recs[i].argmax), std::to_string(recs[i].pairs),
               num(recs[i].exponent)});
  }
  const double last = recs.back().exponent;
  res.verdicts.push_back({"running_max_exponent", decreasing && last < max_exp,
                          std::string(decreasing ? "decreasing" : "not decreasing") + ", final " + fmt(last) + " (limit " +
                              fmt(max_exp) + ")"});

  std::int64_t mismatches = 0;
  for (std::int64_t k = 0; k < spots; ++k) {
    UniformStream u(seed, static_cast<std::uint32_t>(k), 0u, 4u);
    const auto M = 1 + static_cast<std::int64_t>(u.below(static_cast<std::uint64_t>(spot_max)));
    std::uint64_t brute = 0;
    for (std::int64_t a = 1; a <= M; ++a)
      if (M % a == 0) brute += 2;  // (a, M/a) and (-a, -M/a)
    const auto fast = divisor_pairs(M);
    if (brute != fast) ++mismatches;
    if (out) out->emit({{"kind", "divisor_spot"}, {"M", M}, {"brute", brute}, {"factorization", fast}});
  }
  res.verdicts.push_back({"brute_force_spot_checks", mismatches == 0,
                          std::to_string(spots) + " checks, " + std::to_string(mismatches) + " mismatches"});
  res.summary = {{"final_exponent", last}};
  finish_suite(res, out, table);
  return res;
}

}  // namespace wnls::harness
