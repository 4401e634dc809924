// Acceptance suite: ten numbered end-to-end checks, each printing one
// PASS/FAIL line. Run a single criterion with `qetune_acceptance <n> <cli>
// <data-dir>` (the CLI path and data directory are only needed by the
// criteria that exercise them); with no arguments every criterion runs.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../support/oracles.hpp"
#include "qetune/dense.hpp"
#include "qetune/features.hpp"
#include "qetune/gbt.hpp"
#include "qetune/hamiltonian.hpp"
#include "qetune/hyperopt.hpp"
#include "qetune/pipeline.hpp"
#include "qetune/qcels.hpp"
#include "qetune/qsci.hpp"
#include "qetune/rng.hpp"
#include "qetune/statevector.hpp"

using namespace qetune;
namespace fs = std::filesystem;
using Cd = std::complex<double>;

namespace {

std::string g_cli;
fs::path g_data;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

PauliHamiltonian random_hamiltonian(std::mt19937_64& rng, int n_qubits,
                                    int n_terms) {
  std::vector<PauliTerm> terms;
  for (int t = 0; t < n_terms; ++t) {
    std::map<int, Pauli> ops;
    int weight = 1 + static_cast<int>(uniform_below(rng, 3));
    for (int w = 0; w < weight; ++w)
      ops[static_cast<int>(uniform_below(rng, n_qubits))] =
          static_cast<Pauli>(uniform_below(rng, 3));
    terms.push_back({2.0 * uniform01(rng) - 1.0, PauliString(ops)});
  }
  return PauliHamiltonian(n_qubits, terms);
}

std::vector<double> times_of(int n, double dt) {
  std::vector<double> ts(n);
  for (int i = 0; i < n; ++i) ts[i] = i * dt;
  return ts;
}

std::vector<Cd> synth_series(const std::vector<double>& ts,
                             const std::vector<std::pair<double, double>>& modes) {
  std::vector<Cd> zs(ts.size(), Cd{0, 0});
  for (std::size_t n = 0; n < ts.size(); ++n)
    for (auto [w, e] : modes) zs[n] += w * std::polar(1.0, -e * ts[n]);
  return zs;
}

// ---- criterion 1: oracle vs. separately coded brute force ---------------
bool criterion_1(std::string& msg) {
  Timer timer;
  std::mt19937_64 rng(2024);
  Check c;
  for (int rep = 0; rep < 10; ++rep) {
    int n = 2 + static_cast<int>(uniform_below(rng, 5));  // 2..6 qubits
    PauliHamiltonian h =
        random_hamiltonian(rng, n, 3 + static_cast<int>(uniform_below(rng, 10)));
    double lib = exact_ground_state(h).energy;
    double ref = testsupport::ground_energy(h);
    c.require(std::abs(lib - ref) <= 1e-9,
              "mismatch " + std::to_string(std::abs(lib - ref)));
  }
  double s = timer.seconds();
  c.require(s < 5.0, "runtime " + std::to_string(s) + " s");
  msg = "10 random 2-6 qubit systems within 1e-9 of the brute-force oracle (" +
        std::to_string(s) + " s)";
  if (!c.ok) msg = c.detail;
  return c.ok;
}

// ---- criterion 2: exact-model frequency recovery -------------------------
bool criterion_2(std::string& msg) {
  Timer timer;
  Check c;
  auto ts = times_of(10, 0.03);
  for (int e = -5; e <= 5; ++e) {
    auto zs = synth_series(ts, {{1.0, static_cast<double>(e)}});
    FitResult fit = fit_single(zs, ts);
    c.require(std::abs(fit.frequencies[0] - e) <= 1e-6,
              "E=" + std::to_string(e) + " recovered as " +
                  std::to_string(fit.frequencies[0]));
  }
  double s = timer.seconds();
  c.require(s < 1.0, "runtime " + std::to_string(s) + " s");
  msg = "single-frequency recovery within 1e-6 for E in {-5..5} (" +
        std::to_string(s) + " s)";
  if (!c.ok) msg = c.detail;
  return c.ok;
}

// ---- criterion 3: sequential improvement across stages -------------------
// Two- and three-mode series in the resolved regime (several radians of
// phase accumulation over the window, dominant weight >= 0.7, secondary
// weights decaying with the gap). |th1 - E0| may move at fit-jitter scale
// once a stage is converged, so comparisons carry a 1e-6 floor.
bool criterion_3(std::string& msg) {
  Timer timer;
  std::mt19937_64 rng(77);
  int improved = 0, constraints_ok = 0;
  const int kInstances = 20;
  for (int rep = 0; rep < kInstances; ++rep) {
    int n = 15 + static_cast<int>(uniform_below(rng, 11));
    double dt = 0.05 + 0.10 * uniform01(rng);
    auto ts = times_of(n, dt);
    double e0 = -6.0 + 3.0 * uniform01(rng);
    double w0 = 0.75 + 0.2 * uniform01(rng);
    std::vector<std::pair<double, double>> modes{{w0, e0}};
    double rest = 1.0 - w0;
    if (rep % 5 < 3) {
      modes.push_back({rest, e0 + 1.5 + 1.5 * uniform01(rng)});
    } else {
      modes.push_back({rest * 0.85, e0 + 1.5 + 1.5 * uniform01(rng)});
      modes.push_back({rest * 0.15, e0 + 4.5 + 2.0 * uniform01(rng)});
    }
    auto zs = synth_series(ts, modes);
    double alpha = 0.8;
    SequentialFit seq = fit_stages(zs, ts, alpha);
    double d1 = std::abs(seq.stage1.frequencies[0] - e0);
    double d2 = std::abs(seq.stage2.frequencies[0] - e0);
    double d3 = std::abs(seq.stage3.frequencies[0] - e0);
    if (d2 <= d1 + 1e-6 && d3 <= d2 + 1e-6) ++improved;

    double bound = alpha * std::abs(seq.stage1.frequencies[0]) + 1e-9;
    bool ok = std::abs(seq.stage2.frequencies[1]) <= bound &&
              std::abs(seq.stage3.frequencies[1]) <= bound &&
              std::abs(seq.stage3.frequencies[2]) <= bound &&
              seq.stage2.amplitudes[1] <= seq.stage1.amplitudes[0] + 1e-9 &&
              seq.stage3.amplitudes[1] <= seq.stage1.amplitudes[0] + 1e-9;
    if (ok) ++constraints_ok;
  }
  double s = timer.seconds();
  bool pass = improved >= 18 && constraints_ok == kInstances && s < 10.0;
  msg = "monotone |th1 - E0| on " + std::to_string(improved) + "/20, " +
        "constraints on " + std::to_string(constraints_ok) + "/20 (" +
        std::to_string(s) + " s)";
  return pass;
}

// ---- criterion 4: end-to-end exact-mode QCELS on physics systems ---------
bool criterion_4(std::string& msg) {
  Timer timer;
  Check c;
  std::ostringstream detail;
  for (const char* name : {"ising4", "ising6", "hub4", "hub6"}) {
    PauliHamiltonian h = load_hamiltonian(g_data / (std::string(name) + ".ham"));
    double e0 = exact_ground_state(h).energy;
    ShotBudget budget(10'000'000);
    EnergyEstimate est = qcels_solve(h, {}, budget, true, 7);
    double rel = std::abs((est.value - e0) / e0);
    detail << name << " " << std::fixed << 100.0 * rel << "% ";
    c.require(rel <= 0.05, std::string(name) + " relative error " +
                               std::to_string(100.0 * rel) + "%");
  }
  double s = timer.seconds();
  c.require(s < 60.0, "runtime " + std::to_string(s) + " s");
  msg = "default-hyperparameter relative errors: " + detail.str() + "(" +
        std::to_string(s) + " s)";
  if (!c.ok) msg = c.detail;
  return c.ok;
}

// ---- criterion 5: variational + convergent sampled adapt-qsci ------------
bool criterion_5(std::string& msg) {
  Timer timer;
  Check c;
  std::ostringstream detail;
  for (const char* name : {"ising4", "ising6", "hub4", "hub6"}) {
    PauliHamiltonian h = load_hamiltonian(g_data / (std::string(name) + ".ham"));
    double e0 = exact_ground_state(h).energy;
    ShotBudget budget(10'000'000);
    std::vector<double> trace;
    EnergyEstimate est =
        adapt_qsci_solve(h, {}, budget, false, 11, 0.0, &trace);
    for (double ek : trace)
      c.require(ek >= e0 - 1e-9, std::string(name) + " subspace energy " +
                                     std::to_string(ek) + " below oracle " +
                                     std::to_string(e0));
    double best = 1e300;
    for (double ek : trace) {
      double prev = best;
      best = std::min(best, ek);
      c.require(best <= prev, "best-so-far not monotone");
    }
    c.require(!trace.empty() && std::abs(best - est.value) < 1e-12,
              "reported value is not the best-so-far");
    double rel = std::abs((est.value - e0) / e0);
    c.require(rel <= 0.05, std::string(name) + " relative error " +
                               std::to_string(100.0 * rel) + "%");
    // Declared costs: every charge is sampling_shots or its refined
    // multiple, at most one refinement per iteration.
    AdaptQsciHyperparams defaults;
    c.require(est.shots_used == budget.used(),
              "shot accounting mismatch on " + std::string(name));
    c.require(est.shots_used % defaults.sampling_shots == 0,
              "shots not a multiple of the per-iteration cost");
    c.require(est.shots_used >= est.iterations * defaults.sampling_shots,
              "fewer shots than iterations declare");
    c.require(est.shots_used <=
                  est.iterations * defaults.sampling_shots *
                      (1 + static_cast<std::uint64_t>(
                               defaults.final_sampling_shots_coeff)),
              "more shots than iterations can declare");
    c.require(budget.used() <= 10'000'000, "shot cap exceeded");
    detail << name << " " << std::fixed << 100.0 * rel << "% ";
  }
  double s = timer.seconds();
  c.require(s < 120.0, "runtime " + std::to_string(s) + " s");
  msg = "sampled defaults, variational trace, errors: " + detail.str() + "(" +
        std::to_string(s) + " s)";
  if (!c.ok) msg = c.detail;
  return c.ok;
}

// ---- criterion 6: gradients vs central finite differences ----------------
bool criterion_6(std::string& msg) {
  Check c;
  std::mt19937_64 rng(55);
  const double step = 1e-4;
  double worst = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    int n = 3 + static_cast<int>(uniform_below(rng, 2));
    PauliHamiltonian h =
        random_hamiltonian(rng, n, 4 + static_cast<int>(uniform_below(rng, 6)));
    auto pool = build_operator_pool(n);
    Statevector state(n);
    for (std::uint64_t i = 0; i < state.dim(); ++i)
      state.amp(i) = {2.0 * uniform01(rng) - 1.0, 2.0 * uniform01(rng) - 1.0};
    state.normalize();
    std::size_t j = uniform_below(rng, pool.size());
    double grad = pool_gradients(h, pool, state)[j];
    auto energy_at = [&](double th) {
      return expectation_value(apply_pauli_rotation(state, pool[j], th), h);
    };
    double fd = -(energy_at(step) - energy_at(-step)) / (2.0 * step);
    worst = std::max(worst, std::abs(grad - fd));
    c.require(std::abs(grad - fd) <= 1e-6,
              "pair " + std::to_string(rep) + " |grad - fd| = " +
                  std::to_string(std::abs(grad - fd)));
  }
  msg = "50 random (state, operator) pairs, worst |grad - fd| = " +
        std::to_string(worst);
  if (!c.ok) msg = c.detail;
  return c.ok;
}

// ---- criterion 7: surrogate quality on a synthetic target ----------------
bool criterion_7(std::string& msg) {
  Timer timer;
  // Y is a smooth function of delta_t, n_Z and alpha; the Hamiltonian block
  // is the constant encoding of one probe system.
  PauliHamiltonian probe(
      3, {{-1.0, PauliString::two(Pauli::Z, 0, Pauli::Z, 1)},
          {-0.7, PauliString::two(Pauli::Z, 1, Pauli::Z, 2)},
          {-0.4, PauliString::single(Pauli::X, 1)}});
  HyperparamSpec spec = HyperparamSpec::qcels();
  std::mt19937_64 rng(101);
  std::vector<TrainingRecord> records;
  for (int i = 0; i < 800; ++i) {
    auto v = random_vector(spec, rng);
    TrainingRecord r;
    r.system = "probe" + std::to_string(i % 4);  // four source tags
    r.x = encode_features(probe, v, 32);
    r.y = std::sin(8.0 * v[0]) + 0.05 * v[1] + (v[4] - 0.75) * (v[4] - 0.75);
    records.push_back(std::move(r));
  }
  DatasetSplit split = split_dataset(records, 5);
  GbtModel model = train_gbt(split.train, {});
  double mean = 0.0;
  for (const auto& r : split.holdout10) mean += r.y;
  mean /= static_cast<double>(split.holdout10.size());
  double sse = 0.0, sst = 0.0;
  for (const auto& r : split.holdout10) {
    double p = model.predict(r.x);
    sse += (p - r.y) * (p - r.y);
    sst += (r.y - mean) * (r.y - mean);
  }
  double r2 = 1.0 - sse / sst;
  double s = timer.seconds();
  bool pass = r2 >= 0.9 && s < 10.0;
  msg = "held-out R^2 = " + std::to_string(r2) + " on the 10% holdout (" +
        std::to_string(s) + " s)";
  return pass;
}

// ---- criterion 8: search beats random under a planted optimum ------------
bool criterion_8(std::string& msg) {
  HyperparamSpec spec = HyperparamSpec::qcels();
  PauliHamiltonian probe(2,
                         {{-1.0, PauliString::two(Pauli::Z, 0, Pauli::Z, 1)},
                          {0.3, PauliString::single(Pauli::X, 0)}});
  const int k_slots = 8;

  // Smooth planted bowl over three tuned fields, realized as a trained
  // model so the search sees a genuine tree ensemble.
  std::mt19937_64 gen_rng(4242);
  std::vector<TrainingRecord> synth;
  for (int i = 0; i < 1500; ++i) {
    auto v = random_vector(spec, gen_rng);
    TrainingRecord r;
    r.system = "planted";
    r.x = encode_features(probe, v, k_slots);
    double a = (v[0] - 0.22) / 0.3, b = (v[4] - 0.62) / 0.5,
           c = (v[1] - 9.0) / 20.0;
    r.y = a * a + b * b + c * c;
    synth.push_back(std::move(r));
  }
  GbtConfig gcfg;
  gcfg.n_trees = 300;
  gcfg.max_depth = 7;
  gcfg.min_leaf = 2;
  GbtModel model = train_gbt(synth, gcfg);

  int wins = 0;
  bool invariants = true;
  const int trials = 50;
  for (int trial = 0; trial < trials; ++trial) {
    SearchConfig cfg;
    cfg.population = 40;
    cfg.generations = 10;
    cfg.seed = 1000 + trial;
    OptimizeResult res = optimize(model, probe, spec, cfg);
    for (std::size_t g = 1; g < res.best_by_generation.size(); ++g)
      if (res.best_by_generation[g] > res.best_by_generation[g - 1] + 1e-15)
        invariants = false;
    if (!spec.contains(res.best)) invariants = false;

    // Equal-budget random search: population * generations draws.
    std::mt19937_64 rng(derive_seed(9000, trial));
    double best_random = 1e300;
    for (int i = 0; i < cfg.population * cfg.generations; ++i) {
      auto v = random_vector(spec, rng);
      best_random =
          std::min(best_random, model.predict(encode_features(probe, v, k_slots)));
    }
    if (res.best_score < best_random) ++wins;
  }
  bool pass = wins >= 40 && invariants;
  msg = "search beat equal-budget random draws in " + std::to_string(wins) +
        "/50 trials; invariants " + (invariants ? "held" : "VIOLATED");
  return pass;
}

// ---- criterion 9: the full pipeline at desk scale ------------------------
bool criterion_9(std::string& msg) {
  Timer timer;
  Check c;
  fs::path dir = fs::temp_directory_path() /
                 ("qetune_accept9_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);

  // Stage 1: mine over 4-10 qubit systems.
  MiningJob job;
  for (const char* name : {"ising4", "ising6", "ising8", "ising10", "hub4", "hub6"})
    job.hamiltonians.push_back(g_data / (std::string(name) + ".ham"));
  job.solver = "qcels";
  job.runs_per_system = 90;
  job.seed = 2;
  job.k_slots = 300;
  job.timeout_s = 120.0;
  job.output = dir / "dataset.txt";
  MineStats stats = mine(job, &std::cerr);
  c.require(stats.written >= 500,
            "mined only " + std::to_string(stats.written) + " records");

  // Stage 2: split and train.
  Dataset data = load_dataset(job.output);
  DatasetSplit split = split_dataset(data.records, 2);
  GbtModel model = train_gbt(split.train, {});
  model.set_layout_tag("qcels");
  model.save(dir / "model.txt");
  GbtModel loaded = GbtModel::load(dir / "model.txt");

  // Stage 3 + 4: optimize and evaluate on four systems with known answers.
  HyperparamSpec spec = HyperparamSpec::qcels();
  SearchConfig search;
  search.population = 100;
  search.generations = 20;
  std::vector<EvalRow> rows;
  for (const char* name : {"ising4", "ising6", "hub4", "hub6"}) {
    PauliHamiltonian h = load_hamiltonian(g_data / (std::string(name) + ".ham"));
    double e0 = exact_ground_state(h).energy;
    auto sys_rows = evaluate_system(h, name, e0, loaded, spec, search,
                                    10'000'000, 3, 9, 120.0, false);
    rows.insert(rows.end(), sys_rows.begin(), sys_rows.end());
  }
  c.require(rows.size() == 8, "expected 8 evaluate rows");
  int opt_better = 0;
  for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
    c.require(rows[i].variant == "default" && rows[i + 1].variant == "optimized",
              "row pairing broken");
    c.require(rows[i].error_pct.has_value(), "missing error column");
    if (rows[i + 1].error_pct && rows[i].error_pct &&
        *rows[i + 1].error_pct <= *rows[i].error_pct)
      ++opt_better;
  }
  std::ofstream report(dir / "report.tsv");
  write_report(report, rows);
  report.close();
  c.require(fs::file_size(dir / "report.tsv") > 0, "empty report");

  // The error formula must reproduce the reference anchor exactly.
  double anchor = relative_error_pct(-21.503637869562557, -22.046059902);
  c.require(std::abs(anchor - 2.46) < 0.005,
            "anchor error formula gave " + std::to_string(anchor));

  double s = timer.seconds();
  c.require(s < 1800.0, "runtime " + std::to_string(s) + " s");
  msg = "mined " + std::to_string(stats.written) + " records; optimized beat "
        "default on " + std::to_string(opt_better) + "/4 systems (reported, "
        "not asserted); anchor 2.46% reproduced (" + std::to_string(s) + " s)";
  if (!c.ok) msg = c.detail;
  fs::remove_all(dir);
  return c.ok;
}

// ---- criterion 10: CLI determinism under fixed seeds ---------------------
bool run_cmd(const std::string& cmd) { return std::system(cmd.c_str()) == 0; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool criterion_10(std::string& msg) {
  if (g_cli.empty() || !fs::exists(g_cli)) {
    msg = "CLI binary path not provided";
    return false;
  }
  Check c;
  fs::path dir = fs::temp_directory_path() /
                 ("qetune_accept10_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir / "a");
  fs::create_directories(dir / "b");

  auto repeat_identical = [&](const std::string& name,
                              const std::string& args,
                              const std::vector<std::string>& outputs) {
    for (const char* side : {"a", "b"}) {
      std::string cmd = "cd " + (dir / side).string() + " && " + g_cli + " " +
                        args + " > stdout.txt 2> stderr.txt";
      if (!run_cmd(cmd)) {
        c.require(false, name + " exited nonzero");
        return;
      }
    }
    c.require(slurp(dir / "a" / "stdout.txt") == slurp(dir / "b" / "stdout.txt"),
              name + " stdout differs between runs");
    for (const auto& f : outputs)
      c.require(slurp(dir / "a" / f) == slurp(dir / "b" / f),
                name + " output file " + f + " differs");
  };

  std::string z0 = (g_data / "z0.ham").string();
  std::string ising4 = (g_data / "ising4.ham").string();
  repeat_identical("oracle", "oracle " + z0, {});
  repeat_identical("solve-qcels", "solve --algo qcels " + ising4 + " --seed 7",
                   {});
  repeat_identical("solve-adapt",
                   "solve --algo adapt-qsci " + ising4 + " --seed 7", {});
  repeat_identical("solve-exact",
                   "solve --algo qcels " + ising4 + " --exact --seed 7", {});

  // mine / train / optimize / evaluate with per-side output files
  for (const char* side : {"a", "b"}) {
    fs::path sd = dir / side;
    std::ofstream cfg(sd / "mine.json");
    cfg << "{\n  \"solver\": \"qcels\",\n  \"hamiltonians\": [\"" << ising4
        << "\", \"" << (g_data / "hub4.ham").string()
        << "\"],\n  \"runs_per_system\": 20,\n  \"seed\": 3,\n"
        << "  \"k_slots\": 24,\n  \"output\": \"dataset.txt\"\n}\n";
    cfg.close();
    std::string base = "cd " + sd.string() + " && " + g_cli;
    bool ok = run_cmd(base + " mine mine.json > mine_out.txt 2>/dev/null") &&
              run_cmd(base +
                      " train dataset.txt -o model.txt --n_trees 40 --seed 3 "
                      "> train_out.txt 2>/dev/null") &&
              run_cmd(base + " optimize model.txt " + ising4 +
                      " -o best.txt --population 30 --generations 5 --seed 3 "
                      "> opt_out.txt 2>/dev/null") &&
              run_cmd(base + " solve --algo qcels " + ising4 +
                      " --params best.txt --exact --seed 3 "
                      "> solve_params_out.txt 2>/dev/null");
    if (ok) {
      std::ofstream ecfg(sd / "eval.json");
      ecfg << "{\n  \"solver\": \"qcels\",\n  \"model\": \"model.txt\",\n"
           << "  \"systems\": [{\"path\": \"" << ising4
           << "\", \"true_value\": -3.4270340889080755}],\n"
           << "  \"repeats\": 2,\n  \"seed\": 3,\n  \"exact\": true,\n"
           << "  \"search\": {\"population\": 20, \"generations\": 4},\n"
           << "  \"output\": \"report.tsv\"\n}\n";
      ecfg.close();
      ok = run_cmd(base + " evaluate eval.json > eval_out.txt 2>/dev/null");
    }
    c.require(ok, std::string("pipeline commands failed on side ") + side);
  }
  if (c.ok) {
    for (const char* f :
         {"mine_out.txt", "dataset.txt", "train_out.txt", "model.txt",
          "opt_out.txt", "best.txt", "solve_params_out.txt", "eval_out.txt",
          "report.tsv"})
      c.require(slurp(dir / "a" / f) == slurp(dir / "b" / f),
                std::string(f) + " differs between identically seeded runs");
  }
  msg = "oracle/solve/mine/train/optimize/evaluate byte-identical across "
        "repeated seeded runs";
  if (!c.ok) msg = c.detail;
  fs::remove_all(dir);
  return c.ok;
}

using Criterion = std::function<bool(std::string&)>;

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::pair<std::string, Criterion>> criteria = {
      {"oracle correctness", criterion_1},
      {"qcels exact-model recovery", criterion_2},
      {"qcels sequential improvement", criterion_3},
      {"end-to-end qcels on physics systems", criterion_4},
      {"adapt-qsci variational + convergence", criterion_5},
      {"pool gradient finite-difference check", criterion_6},
      {"surrogate quality", criterion_7},
      {"search effectiveness", criterion_8},
      {"pipeline parity at desk scale", criterion_9},
      {"CLI determinism", criterion_10},
  };

  int which = 0;
  if (argc > 1) which = std::atoi(argv[1]);
  if (argc > 2) g_cli = fs::absolute(argv[2]).string();
  if (argc > 3) g_data = fs::absolute(argv[3]);
  if (g_data.empty()) g_data = fs::path(__FILE__).parent_path().parent_path() / "data";

  bool all_ok = true;
  for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) {
    if (which != 0 && which != i) continue;
    std::string msg;
    bool ok = false;
    try {
      ok = criteria[i - 1].second(msg);
    } catch (const std::exception& e) {
      msg = std::string("exception: ") + e.what();
    }
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << i << " ("
              << criteria[i - 1].first << "): " << msg << std::endl;
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : 1;
}
