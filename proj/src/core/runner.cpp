// Copyright 2026 The zkls Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "core/bifurcation.hpp"
#include "core/diagnostics.hpp"
#include "core/error.hpp"
#include "core/evans.hpp"
#include "core/simulator.hpp"
#include "core/soliton.hpp"
#include "core/spectral.hpp"

namespace zkls {
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// JSON has no NaN; missing values become null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

struct Outputs {
  fs::path dir;
  std::vector<std::string> files;

  void write(const std::string& name, const std::string& content) {
    write_atomic(dir / name, content);
    files.push_back(name);
  }
};

double positive(const Config& cfg, const std::string& key, double fallback) {
  const double v = cfg.get_double(key, fallback);
  require(std::isfinite(v) && v > 0.0, ErrorKind::InvalidArgument,
          "'" + key + "' must be positive");
  return v;
}

Grid1D x_grid(const Config& cfg, double c, int default_n) {
  const double half = positive(cfg, "X", 40.0 / std::sqrt(c));
  const int n = cfg.get_int("N", default_n);
  Grid1D g(half, n);
  g.check_resolves(c);
  return g;
}

// ---------------------------------------------------------------- spectrum

json cmd_spectrum(const Config& cfg, Outputs& out) {
  const double c = positive(cfg, "c", 1.0);
  const double L = resolve_period(cfg.get_string("L", "1"), c);
  const int n_max = cfg.get_int("n_max", 2);
  const int per_mode = cfg.get_int("per_mode", 4);
  require(n_max >= 1 && per_mode >= 1, ErrorKind::InvalidArgument,
          "n_max and per_mode must be at least 1");
  const Grid1D grid = x_grid(cfg, c, 512);

  struct ModeResult {
    std::vector<double> lowest;
    double a = 0.0;
    UnstableSpectrum growth;
  };
  std::vector<ModeResult> modes(n_max + 1);
  parallel_for(n_max + 1, [&](int n) {
    auto& m = modes[n];
    m.a = n * n / (L * L);
    for (const auto& p : eigen_extremal(build_lc(c, m.a, grid), per_mode, false)) {
      m.lowest.push_back(p.value.real());
    }
    if (n >= 1) {
      m.growth = unstable_spectrum(build_dx_lc(c, m.a, grid, evans_matching_weight(c, m.a)));
    }
  });

  CsvTable table({"n", "a", "index", "eigenvalue", "multiplicity"});
  CsvTable growth({"n", "a", "unstable_count", "leading_re", "leading_im"});
  int kernel = 0;
  bool matrix_unstable = false;
  json per_mode_json = json::array();
  for (int n = 0; n <= n_max; ++n) {
    const auto& m = modes[n];
    const int mult = n == 0 ? 1 : 2;
    for (std::size_t i = 0; i < m.lowest.size(); ++i) {
      table.add({double(n), m.a, double(i), m.lowest[i], double(mult)});
      if (n <= 1 && std::abs(m.lowest[i]) < 1e-5) kernel += mult;
    }
    double re = kNaN, im = kNaN;
    if (m.growth.leading) {
      re = m.growth.leading->real();
      im = m.growth.leading->imag();
      matrix_unstable = true;
    }
    if (n >= 1) growth.add({double(n), m.a, double(m.growth.count), re, im});
    per_mode_json.push_back({{"n", n},
                             {"a", m.a},
                             {"lowest", m.lowest.empty() ? json(nullptr) : json(m.lowest[0])},
                             {"unstable_count", m.growth.count},
                             {"leading_growth", num(re)}});
  }
  out.write("spectrum.csv", table.str());
  out.write("growth.csv", growth.str());

  const auto verdict = classify_threshold(c, L);
  json s;
  s["c"] = c;
  s["L"] = L;
  s["l_critical"] = verdict.l_critical;
  s["verdict"] = stability_name(verdict.classification);
  s["witness_mode"] = verdict.witness_mode ? json(*verdict.witness_mode) : json(nullptr);
  s["matrix_unstable"] = matrix_unstable;
  s["kernel_count_n01"] = kernel;
  s["modes"] = per_mode_json;
  s["consistent"] = matrix_unstable == (verdict.classification == Stability::Unstable);
  return s;
}

// ---------------------------------------------------------------- evans

json cmd_evans(const Config& cfg, Outputs& out) {
  const double c = positive(cfg, "c", 1.0);
  const auto a_values = cfg.get_list("a", {0.2, 0.4, 0.6, 0.8, 1.0, 1.2});
  const auto lambdas = cfg.get_list("lambda", {1e-8, 1e-3, 0.01, 0.1, 0.5, 1.0, 5.0, 50.0 * c});
  const bool with_roots = cfg.get_bool("roots", true);
  require(!a_values.empty() && !lambdas.empty(), ErrorKind::InvalidArgument,
          "a and lambda lists must not be empty");

  const int na = static_cast<int>(a_values.size());
  std::vector<std::vector<double>> d(na);
  std::vector<double> roots(na, kNaN);
  parallel_for(na, [&](int i) {
    const auto problem = EvansProblem::make(c, a_values[i]);
    for (double lam : lambdas) d[i].push_back(evans_eval(problem, lam).d.real());
    if (with_roots && a_values[i] > 0.0 && a_values[i] < 1.25 * c) roots[i] = evans_root(problem);
  });

  CsvTable surface({"a", "lambda", "D"});
  CsvTable table({"a", "lambda_root"});
  bool small_negative = true;
  double far_dev = 0.0;
  const auto small = std::min_element(lambdas.begin(), lambdas.end()) - lambdas.begin();
  const auto large = std::max_element(lambdas.begin(), lambdas.end()) - lambdas.begin();
  for (int i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < lambdas.size(); ++j) surface.add({a_values[i], lambdas[j], d[i][j]});
    table.add({a_values[i], roots[i]});
    if (a_values[i] > 0.0 && a_values[i] < 1.25 * c) small_negative &= d[i][small] < 0.0;
    far_dev = std::max(far_dev, std::abs(d[i][large] - 1.0));
  }
  out.write("evans_surface.csv", surface.str());
  if (with_roots) out.write("evans_roots.csv", table.str());

  // Monotone decrease of the root in a is reported, not required.
  std::vector<std::pair<double, double>> sorted;
  for (int i = 0; i < na; ++i) {
    if (std::isfinite(roots[i])) sorted.emplace_back(a_values[i], roots[i]);
  }
  std::sort(sorted.begin(), sorted.end());
  bool monotone = true;
  for (std::size_t i = 1; i < sorted.size(); ++i) monotone &= sorted[i].second < sorted[i - 1].second;

  json s;
  s["c"] = c;
  s["smallest_lambda"] = lambdas[small];
  s["largest_lambda"] = lambdas[large];
  s["D_small_all_negative"] = small_negative;
  s["max_abs_D_large_minus_one"] = far_dev;
  s["root_monotone_decreasing"] = monotone;
  json r = json::array();
  for (int i = 0; i < na; ++i) r.push_back({{"a", a_values[i]}, {"lambda", num(roots[i])}});
  s["roots"] = r;
  return s;
}

// ---------------------------------------------------------------- simulate

std::vector<BranchPoint> default_branch(double c0, const Grid2D& grid) {
  std::vector<double> amps;
  for (int i = 2; i <= 10; ++i) amps.push_back(0.01 * i);
  return continue_branch(c0, amps, grid);
}

json cmd_simulate(const Config& cfg, Outputs& out) {
  const double c = positive(cfg, "c", 1.0);
  const double L = resolve_period(cfg.get_string("L", "0.5"), c);
  const double half = positive(cfg, "X", 40.0 / std::sqrt(c));
  const int nx = cfg.get_int("nx", 512);
  const int ny = cfg.get_int("ny", 16);
  SimConfig sc;
  sc.grid = Grid2D(Grid1D(half, nx), ny, L);
  sc.grid.x.check_resolves(c);
  sc.c = c;
  sc.dt = positive(cfg, "dt", 0.01);
  sc.t_end = positive(cfg, "t_end", 50.0);
  sc.record_every = cfg.get_int("record_every", 50);
  sc.dealias = cfg.get_bool("dealias", true);
  sc.validate();

  const std::string init = cfg.get_string("init", "random");
  const double delta = cfg.get_double("delta", 1e-3);
  const int seed = cfg.get_int("seed", 42);
  const int k0 = cfg.get_int("k0", 1);
  const bool diagnostics = cfg.get_bool("diagnostics", true);
  require(delta >= 0.0, ErrorKind::InvalidArgument, "delta must be non-negative");

  Field u0;
  std::optional<UnstableData> unstable;
  if (init == "soliton") {
    u0 = line_soliton(c, sc.grid);
  } else if (init == "random") {
    u0 = line_soliton(c, sc.grid) +
         delta * random_perturbation(sc.grid, static_cast<std::uint64_t>(seed));
  } else if (init == "unstable") {
    unstable = construct_unstable_data(c, L, k0, delta, sc.grid);
    u0 = unstable->u0;
  } else {
    fail(ErrorKind::InvalidArgument, "init must be soliton, random or unstable");
  }

  const auto verdict = classify_threshold(c, L);
  const bool critical = verdict.classification == Stability::Critical;
  std::optional<BranchInterp> branch;
  if (diagnostics && critical) {
    const Grid2D bg = critical_grid(c);
    const auto points = default_branch(c, bg);
    branch.emplace(c, bg, points);
  }
  const BranchInterp* bp = branch ? &*branch : nullptr;

  Simulator sim(sc);
  SimState state = sim.initial_state(u0);
  std::vector<Snapshot> snaps;
  std::vector<ModulationSample> mod;
  std::vector<double> eta_h1, vir_tanh, vir_x, vir_q, vir_coupling;
  std::optional<double> decomposition_lost;
  double k4 = kNaN, eps_plus = kNaN;
  if (bp) {
    k4 = coercivity_check(c, 20).k4;
    eps_plus = virial_epsilon(c, k4);
  }
  sim.run(state, [&](const SimState& s, const Field& f) {
    if (!diagnostics) return;
    snaps.push_back({s.t, sim.lab_offset(s), s.ledger.back().crest, f});
    if (decomposition_lost) return;
    try {
      const auto m = decompose(f, c, bp, sim.fft());
      mod.push_back({s.t, m.rho + sim.lab_offset(s), m.c_mod, m.a1, m.a2,
                     std::sqrt(inner(m.eta, m.eta, sc.grid))});
      eta_h1.push_back(std::sqrt(h1_norm_squared(m.eta, sim.fft())));
      if (bp) {
        const auto v = virial_quantities(m, c, *bp, sim.fft());
        vir_tanh.push_back(v.weighted_tanh);
        vir_x.push_back(v.x_weighted);
        vir_q.push_back(v.soliton_weighted);
        vir_coupling.push_back(v.coupling);
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Precondition) throw;
      decomposition_lost = s.t;
    }
  });

  CsvTable ledger({"t", "mass", "energy", "band0", "band1", "band2", "band3", "band4", "crest",
                   "orbit_distance"});
  double mass_drift = 0.0, energy_drift = 0.0;
  const auto& first = state.ledger.front();
  for (const auto& r : state.ledger) {
    ledger.add({r.t, r.mass, r.energy, r.band[0], r.band[1], r.band[2], r.band[3], r.band[4],
                r.crest, r.orbit_distance});
    mass_drift = std::max(mass_drift, std::abs(r.mass - first.mass) / std::abs(first.mass));
    energy_drift =
        std::max(energy_drift, std::abs(r.energy - first.energy) / std::abs(first.energy));
  }
  out.write("ledger.csv", ledger.str());

  json s;
  s["c"] = c;
  s["L"] = L;
  s["init"] = init;
  s["verdict"] = stability_name(verdict.classification);
  s["t_end"] = state.t;
  s["steps"] = state.steps;
  s["mass_drift"] = mass_drift;
  s["energy_drift"] = energy_drift;
  s["mass_conserved"] = mass_drift <= 1e-10;
  const auto orbit = orbital_report(state.ledger, delta);
  s["orbit"] = {{"threshold", orbit.threshold},
                {"max_distance", orbit.max_distance},
                {"first_exceed_time",
                 orbit.first_exceed_time ? json(*orbit.first_exceed_time) : json(nullptr)},
                {"stays_close", orbit.stays_close}};

  if (unstable) {
    const double a = k0 * k0 / (L * L);
    const double rate = measure_growth_rate(state.ledger, k0, unstable->mu_max, delta);
    const double evans = a < 1.25 * c ? evans_root(EvansProblem::make(c, a)) : kNaN;
    const double rel = std::abs(rate - evans) / evans;
    s["growth"] = {{"mu_max", unstable->mu_max},
                   {"fitted_rate", rate},
                   {"evans_rate", num(evans)},
                   {"relative_error", num(rel)},
                   {"match", std::isfinite(rel) && rel <= 0.05}};
  }
  s["pass"] = verdict.classification == Stability::Unstable ? !orbit.stays_close
                                                            : orbit.stays_close;

  if (diagnostics && !snaps.empty()) {
    const Fft2D& fft = sim.fft();
    const std::size_t last = snaps.size() - 1;
    const WeightProfile w{cfg.get_double("R", 4.0), cfg.get_double("x0", 10.0),
                          cfg.get_double("beta", 0.4)};
    const auto series_i = monotonicity_I(snaps, w, last, fft);
    const auto series_j = monotonicity_J(snaps, w, last, fft);

    std::vector<std::string> cols = {"t", "rho", "c_mod", "a1", "a2", "eta_h1", "I", "J"};
    if (bp) {
      for (const char* k : {"virial_tanh", "virial_x", "virial_q", "coupling", "virial_total"}) {
        cols.push_back(k);
      }
    }
    CsvTable diag(cols);
    std::vector<double> vir_total;
    for (std::size_t i = 0; i < snaps.size(); ++i) {
      std::vector<double> row = {snaps[i].t, kNaN, kNaN, kNaN, kNaN, kNaN, series_i.value[i],
                                 series_j.value[i]};
      if (i < mod.size()) {
        row[1] = mod[i].rho;
        row[2] = mod[i].c_mod;
        row[3] = mod[i].a1;
        row[4] = mod[i].a2;
        row[5] = eta_h1[i];
      }
      if (bp) {
        const bool have = i < vir_tanh.size();
        const double total = have ? vir_tanh[i] + eps_plus * vir_x[i] : kNaN;
        if (have) vir_total.push_back(total);
        for (double v : {have ? vir_tanh[i] : kNaN, have ? vir_x[i] : kNaN,
                         have ? vir_q[i] : kNaN, have ? vir_coupling[i] : kNaN, total}) {
          row.push_back(v);
        }
      }
      diag.add(row);
    }
    out.write("diagnostics.csv", diag.str());

    json d;
    d["weight"] = {{"R", w.R}, {"x0", w.x0}, {"beta", w.beta}};
    d["I_violation"] = series_i.violation;
    d["J_violation"] = series_j.violation;
    d["decomposition_lost_at"] =
        decomposition_lost ? json(*decomposition_lost) : json(nullptr);
    if (mod.size() >= 3) {
      const auto rates = modulation_rates(mod, c, bp);
      d["modulation"] = {{"K0_a", rates.k0_a},
                         {"K0_c", rates.k0_c},
                         {"K0_rho", rates.k0_rho},
                         {"bounded", rates.bounded}};
    }
    json sweep = json::array();
    for (double R : {4.0, 8.0}) {
      std::vector<double> x0s = {5.0, 10.0, 15.0, 20.0}, vi, vj;
      for (double x0 : x0s) {
        const WeightProfile ws{R, x0, w.beta};
        vi.push_back(monotonicity_I(snaps, ws, last, fft).violation);
        vj.push_back(monotonicity_J(snaps, ws, last, fft).violation);
      }
      const auto fi = fit_decay(x0s, vi);
      const auto fj = fit_decay(x0s, vj);
      sweep.push_back({{"R", R},
                       {"x0", x0s},
                       {"I_violation", vi},
                       {"J_violation", vj},
                       {"I_rate", fi.valid ? json(fi.rate) : json(nullptr)},
                       {"J_rate", fj.valid ? json(fj.rate) : json(nullptr)},
                       {"J_no_violation", fj.trivial}});
    }
    d["decay_sweep"] = sweep;
    if (bp && !vir_total.empty()) {
      double rise = 0.0;
      for (std::size_t i = 1; i < vir_total.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) rise = std::max(rise, vir_total[i] - vir_total[j]);
      }
      d["virial"] = {{"k4", k4},
                     {"eps_plus", eps_plus},
                     {"initial", vir_total.front()},
                     {"max_rise", rise},
                     {"nonincreasing_10pct", rise <= 0.1 * std::abs(vir_total.front())}};
    }
    s["diagnostics"] = d;
  }
  return s;
}

// ---------------------------------------------------------------- bifurcate

json cmd_bifurcate(const Config& cfg, Outputs& out) {
  const double c0 = positive(cfg, "c0", 1.0);
  const auto amps = cfg.get_list("amplitudes", {0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09, 0.1});
  const int nx = cfg.get_int("nx", 256);
  const int ny = cfg.get_int("ny", 16);
  const double fit_max = cfg.get_double("fit_max", 0.08);
  require(amps.size() >= 3, ErrorKind::InvalidArgument, "need at least three amplitudes");
  for (double a : amps) {
    require(a > 0.0, ErrorKind::InvalidArgument, "amplitudes must be positive");
  }

  const Grid2D grid = critical_grid(c0, nx, ny);
  const auto branch = continue_branch(c0, amps, grid);
  const auto c2 = compute_c2_constant(c0, branch, grid);
  const Fft2D fft(grid);

  CsvTable table({"a", "c_of_a", "mass", "action_gap", "residual"});
  const Field q = line_soliton(c0, grid);
  const Field q_res = -fft.laplacian(q) + c0 * q - q.cwiseProduct(q);
  table.add({0.0, c0, inner(q, q, grid), 0.0, std::sqrt(inner(q_res, q_res, grid))});
  std::vector<double> fit_a, fit_gap;
  double max_res = 0.0;
  bool gaps_positive = true;
  for (const auto& p : branch) {
    const double gap = action_gap(c0, p, grid);
    table.add({p.amplitude(), p.c_of_a, inner(p.field, p.field, grid), gap, p.residual_norm});
    max_res = std::max(max_res, p.residual_norm);
    gaps_positive &= gap > 0.0;
    if (p.amplitude() <= fit_max * (1.0 + 1e-12)) {
      fit_a.push_back(p.amplitude());
      fit_gap.push_back(gap);
    }
  }
  out.write("branch.csv", table.str());

  const double predicted = quartic_gap_prediction(c0, c2);
  json s;
  s["c0"] = c0;
  s["L"] = grid.L;
  s["max_residual"] = max_res;
  s["c_second"] = c2.c_second;
  s["C2_curvature"] = c2.from_curvature;
  s["C2_mass"] = c2.from_mass;
  s["C2_relative_difference"] =
      std::abs(c2.from_curvature - c2.from_mass) / std::abs(c2.from_curvature);
  s["norm_q_sq"] = c2.norm_q_sq;
  s["norm_k_sq"] = c2.norm_k_sq;
  s["gaps_positive"] = gaps_positive;
  s["quartic_predicted"] = predicted;
  if (fit_a.size() >= 2) {
    const double fitted = quartic_gap_fit(fit_a, fit_gap);
    s["quartic_fitted"] = fitted;
    s["quartic_relative_error"] = std::abs(fitted - predicted) / std::abs(predicted);
  }
  return s;
}

}  // namespace

std::vector<std::string> command_keys(const std::string& command) {
  if (command == "spectrum") return {"c", "L", "n_max", "per_mode", "X", "N"};
  if (command == "evans") return {"c", "a", "lambda", "roots"};
  if (command == "simulate") {
    return {"c", "L", "X", "nx", "ny", "dt", "t_end", "record_every", "dealias", "init",
            "delta", "seed", "k0", "diagnostics", "R", "x0", "beta"};
  }
  if (command == "bifurcate") return {"c0", "amplitudes", "nx", "ny", "fit_max"};
  if (command == "replay") return {"manifest"};
  return {};
}

int worker_count() {
  const char* env = std::getenv("ZKLS_THREADS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  require(end && *end == '\0' && n >= 1 && n <= 1024, ErrorKind::InvalidArgument,
          "ZKLS_THREADS must be a positive integer");
  return static_cast<int>(n);
}

void parallel_for(int count, const std::function<void(int)>& fn) {
  const int workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::mutex mu;
  int next = 0;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        int i;
        {
          std::lock_guard<std::mutex> lock(mu);
          if (next >= count) return;
          i = next++;
        }
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double resolve_period(const std::string& text, double c) {
  double L = 0.0;
  try {
    std::size_t used = 0;
    L = std::stod(text, &used);
    require(used == text.size(), ErrorKind::InvalidArgument, "L: trailing characters");
  } catch (const std::logic_error&) {
    fail(ErrorKind::InvalidArgument, "L is not a number: '" + text + "'");
  }
  require(std::isfinite(L) && L > 0.0, ErrorKind::InvalidArgument, "L must be positive");
  const double lc = 2.0 / std::sqrt(5.0 * c);
  const auto dot = text.find('.');
  if (dot == std::string::npos || text.find_first_of("eE") != std::string::npos) return L;
  const int digits = static_cast<int>(text.size() - dot - 1);
  if (digits < 6) return L;
  return std::abs(L - lc) <= 0.5 * std::pow(10.0, -digits) ? lc : L;
}

json run_command(const std::string& command, const Config& input, const fs::path& out_dir) {
  const auto start = std::chrono::steady_clock::now();
  Config cfg = input;
  std::string name = command;
  json replayed_from = nullptr;
  if (command == "replay") {
    const std::string path = cfg.get_string("manifest", "");
    require(!path.empty(), ErrorKind::InvalidArgument, "replay needs manifest=<path>");
    cfg.check_known({"manifest"});
    json manifest;
    try {
      manifest = json::parse(read_file(path));
      name = manifest.at("subcommand").get<std::string>();
      cfg = Config();
      for (const auto& [k, v] : manifest.at("params").items()) cfg.set(k, v.get<std::string>());
    } catch (const json::exception& e) {
      fail(ErrorKind::InvalidArgument, std::string("malformed manifest: ") + e.what());
    }
    require(name != "replay", ErrorKind::InvalidArgument, "manifest names replay");
    replayed_from = path;
  }

  const auto known = command_keys(name);
  require(!known.empty(), ErrorKind::InvalidArgument, "unknown subcommand '" + name + "'");
  cfg.check_known(known);

  Outputs out{out_dir, {}};
  json summary;
  if (name == "spectrum") {
    summary = cmd_spectrum(cfg, out);
  } else if (name == "evans") {
    summary = cmd_evans(cfg, out);
  } else if (name == "simulate") {
    summary = cmd_simulate(cfg, out);
  } else if (name == "bifurcate") {
    summary = cmd_bifurcate(cfg, out);
  } else {
    fail(ErrorKind::InvalidArgument, "unknown subcommand '" + name + "'");
  }
  summary["subcommand"] = name;
  out.write("summary.json", summary.dump(2) + "\n");

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json manifest;
  manifest["subcommand"] = name;
  manifest["params"] = cfg.resolved();
  manifest["seed"] = cfg.resolved().count("seed") ? json(std::stoi(cfg.resolved().at("seed")))
                                                  : json(nullptr);
  manifest["version"] = kVersion;
  manifest["threads"] = worker_count();
  manifest["outputs"] = out.files;
  manifest["wall_clock_seconds"] = wall;
  manifest["replayed_from"] = replayed_from;
  write_atomic(out_dir / "manifest.json", manifest.dump(2) + "\n");
  return summary;
}

}  // namespace zkls
