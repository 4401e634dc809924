// qetune command-line interface: oracle / solve / mine / train / optimize /
// evaluate. Canonical results go to stdout and output files; progress and
// timing go to stderr so fixed-seed runs are byte-reproducible.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <span>
#include <string>

#include <CLI11.hpp>

#include "qetune/dense.hpp"
#include "qetune/errors.hpp"
#include "qetune/features.hpp"
#include "qetune/gbt.hpp"
#include "qetune/hamiltonian.hpp"
#include "qetune/hyperopt.hpp"
#include "qetune/pipeline.hpp"
#include "qetune/qcels.hpp"
#include "qetune/qsci.hpp"
#include "qetune/rng.hpp"

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t env_default_seed() {
  if (const char* s = std::getenv("QETUNE_SEED"))
    return std::strtoull(s, nullptr, 10);
  return 0;
}

void print_estimate(const qetune::EnergyEstimate& est) {
  std::cout << "energy " << fmt17(est.value) << '\n'
            << "iterations " << est.iterations << '\n'
            << "shots " << est.shots_used << '\n'
            << "truncated " << (est.truncated ? 1 : 0) << '\n'
            << "degenerate " << (est.degenerate ? 1 : 0) << '\n';
  std::cerr << "solve finished in " << est.wall_time_s << " s\n";
}

}  // namespace

int main(int argc, char** argv) {
  using namespace qetune;

  CLI::App app{"quantum eigensolver hyperparameter tuning pipeline"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = env_default_seed();
  app.add_option("--seed", seed, "global random seed (env: QETUNE_SEED)");

  // --- oracle -----------------------------------------------------------
  std::string oracle_ham;
  auto* cmd_oracle =
      app.add_subcommand("oracle", "exact ground-state energy of a system");
  cmd_oracle->add_option("hamiltonian", oracle_ham, "Hamiltonian file")
      ->required();

  // --- solve ------------------------------------------------------------
  auto* cmd_solve = app.add_subcommand("solve", "run one eigensolver");
  std::string solve_algo, solve_ham, solve_params;
  bool solve_exact = false;
  std::uint64_t solve_shots = 10'000'000;
  double solve_timeout = 0.0;
  cmd_solve->add_option("--algo", solve_algo, "qcels | adapt-qsci")
      ->required();
  cmd_solve->add_option("hamiltonian", solve_ham, "Hamiltonian file")
      ->required();
  cmd_solve->add_flag("--exact", solve_exact,
                      "exact expectations, no shot sampling");
  cmd_solve->add_option("--shots", solve_shots, "total shot cap");
  cmd_solve->add_option("--params", solve_params,
                        "hyperparameter vector file (from optimize)");
  cmd_solve->add_option("--timeout", solve_timeout, "per-run timeout seconds");

  QcelsHyperparams qc;
  cmd_solve->add_option("--delta_t", qc.delta_t, "qcels: time step");
  cmd_solve->add_option("--n_Z", qc.n_z, "qcels: number of fit points");
  cmd_solve->add_option("--ham_terms", qc.ham_terms,
                        "qcels: Hamiltonian terms kept");
  cmd_solve->add_option("--ham_cutoff", qc.ham_cutoff,
                        "qcels: coefficient floor");
  cmd_solve->add_option("--alpha", qc.alpha,
                        "qcels: correction constraint scale");

  AdaptQsciHyperparams aq;
  cmd_solve->add_option("--num_pickup", aq.num_pickup,
                        "adapt-qsci: subspace cap");
  cmd_solve->add_option("--coeff_cutoff", aq.coeff_cutoff,
                        "adapt-qsci: coefficient floor");
  cmd_solve->add_option("--self_selection", aq.self_selection,
                        "adapt-qsci: subspace-projected gradients (0/1)");
  cmd_solve->add_option("--iter_max", aq.iter_max,
                        "adapt-qsci: iteration ceiling");
  cmd_solve->add_option("--sampling_shots", aq.sampling_shots,
                        "adapt-qsci: shots per iteration");
  cmd_solve->add_option("--atol", aq.atol, "adapt-qsci: convergence tolerance");
  cmd_solve->add_option("--final_sampling_shots_coeff",
                        aq.final_sampling_shots_coeff,
                        "adapt-qsci: refined re-sample multiplier");
  cmd_solve->add_option("--num_precise_gradient", aq.num_precise_gradient,
                        "adapt-qsci: gradient candidate pool");
  cmd_solve->add_option("--max_num_converged", aq.max_num_converged,
                        "adapt-qsci: consecutive converged iterations");
  cmd_solve->add_option("--reset_ignored_inx_mode", aq.reset_ignored_inx_mode,
                        "adapt-qsci: ignore-list reset period");

  // --- mine -------------------------------------------------------------
  std::string mine_config;
  auto* cmd_mine =
      app.add_subcommand("mine", "collect training records on small systems");
  cmd_mine->add_option("config", mine_config, "mining job JSON")->required();

  // --- train ------------------------------------------------------------
  std::string train_dataset, train_out = "model.txt";
  GbtConfig gbt_cfg;
  auto* cmd_train = app.add_subcommand("train", "fit the surrogate model");
  cmd_train->add_option("dataset", train_dataset, "dataset file")->required();
  cmd_train->add_option("-o,--output", train_out, "model output file");
  cmd_train->add_option("--n_trees", gbt_cfg.n_trees, "boosting rounds");
  cmd_train->add_option("--max_depth", gbt_cfg.max_depth, "tree depth limit");
  cmd_train->add_option("--learning_rate", gbt_cfg.learning_rate,
                        "shrinkage per round");
  cmd_train->add_option("--min_leaf", gbt_cfg.min_leaf,
                        "minimum records per leaf");

  // --- optimize ---------------------------------------------------------
  std::string opt_model, opt_ham, opt_out = "hyperparams.txt";
  SearchConfig search;
  auto* cmd_opt = app.add_subcommand(
      "optimize", "search hyperparameters against the surrogate");
  cmd_opt->add_option("model", opt_model, "trained model file")->required();
  cmd_opt->add_option("hamiltonian", opt_ham, "Hamiltonian file")->required();
  cmd_opt->add_option("-o,--output", opt_out, "vector output file");
  cmd_opt->add_option("--population", search.population, "population size");
  cmd_opt->add_option("--generations", search.generations, "generations");
  cmd_opt->add_option("--elite_fraction", search.elite_fraction,
                      "elite fraction");

  // --- evaluate ---------------------------------------------------------
  std::string eval_config;
  int eval_repeats = -1;
  auto* cmd_eval = app.add_subcommand(
      "evaluate", "compare default vs optimized hyperparameters");
  cmd_eval->add_option("config", eval_config, "evaluate job JSON")->required();
  cmd_eval->add_option("--repeats", eval_repeats,
                       "repeated runs per row (best kept)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*cmd_oracle) {
      PauliHamiltonian h = load_hamiltonian(oracle_ham);
      std::cout << fmt17(exact_ground_state(h).energy) << '\n';
      return 0;
    }

    if (*cmd_solve) {
      if (solve_algo != "qcels" && solve_algo != "adapt-qsci")
        throw CLI::ValidationError("--algo must be qcels or adapt-qsci");
      PauliHamiltonian h = load_hamiltonian(solve_ham);
      std::vector<double> hp_vec = default_hyperparams(solve_algo);
      if (!solve_params.empty()) {
        auto [solver, v] = load_vector_file(solve_params);
        if (solver != solve_algo)
          throw std::runtime_error("params file is for solver '" + solver +
                                   "', not '" + solve_algo + "'");
        hp_vec = std::move(v);
      }
      // Explicit flags override params-file values field by field.
      auto touched = [&](const std::string& name) {
        return cmd_solve->count("--" + name) > 0;
      };
      const char* qcels_only[] = {"delta_t", "n_Z", "ham_terms", "ham_cutoff",
                                  "alpha"};
      const char* adapt_only[] = {
          "num_pickup",   "coeff_cutoff",        "self_selection",
          "iter_max",     "sampling_shots",      "atol",
          "final_sampling_shots_coeff",          "num_precise_gradient",
          "max_num_converged",                   "reset_ignored_inx_mode"};
      for (const char* name :
           solve_algo == "qcels" ? std::span<const char* const>(adapt_only)
                                 : std::span<const char* const>(qcels_only))
        if (touched(name))
          throw CLI::ValidationError("--" + std::string(name) +
                                     " does not apply to --algo " + solve_algo);
      if (solve_algo == "qcels") {
        QcelsHyperparams base = qcels_from_vector(hp_vec);
        if (touched("delta_t")) base.delta_t = qc.delta_t;
        if (touched("n_Z")) base.n_z = qc.n_z;
        if (touched("ham_terms")) base.ham_terms = qc.ham_terms;
        if (touched("ham_cutoff")) base.ham_cutoff = qc.ham_cutoff;
        if (touched("alpha")) base.alpha = qc.alpha;
        hp_vec = to_vector(base);
      } else {
        AdaptQsciHyperparams base = adapt_qsci_from_vector(hp_vec);
        if (touched("num_pickup")) base.num_pickup = aq.num_pickup;
        if (touched("coeff_cutoff")) base.coeff_cutoff = aq.coeff_cutoff;
        if (touched("self_selection")) base.self_selection = aq.self_selection;
        if (touched("iter_max")) base.iter_max = aq.iter_max;
        if (touched("sampling_shots")) base.sampling_shots = aq.sampling_shots;
        if (touched("atol")) base.atol = aq.atol;
        if (touched("final_sampling_shots_coeff"))
          base.final_sampling_shots_coeff = aq.final_sampling_shots_coeff;
        if (touched("num_precise_gradient"))
          base.num_precise_gradient = aq.num_precise_gradient;
        if (touched("max_num_converged"))
          base.max_num_converged = aq.max_num_converged;
        if (touched("reset_ignored_inx_mode"))
          base.reset_ignored_inx_mode = aq.reset_ignored_inx_mode;
        hp_vec = to_vector(base);
      }
      ShotBudget budget(solve_shots);
      EnergyEstimate est = run_solver(solve_algo, h, hp_vec, budget,
                                      solve_exact, seed, solve_timeout);
      print_estimate(est);
      return 0;
    }

    if (*cmd_mine) {
      MiningJob job = load_mining_job(mine_config);
      if (app.count("--seed")) job.seed = seed;
      MineStats stats = mine(job, &std::cerr);
      std::cout << "written " << stats.written << '\n'
                << "skipped " << stats.skipped << '\n'
                << "failed " << stats.failed << '\n';
      return 0;
    }

    if (*cmd_train) {
      gbt_cfg.seed = seed;
      Dataset data = load_dataset(train_dataset);
      std::vector<std::string> warnings;
      DatasetSplit split = split_dataset(data.records, seed, &warnings);
      for (const auto& w : warnings) std::cerr << "train: " << w << '\n';
      GbtModel model = train_gbt(split.train, gbt_cfg);
      model.set_layout_tag(data.solver);
      model.save(std::filesystem::path(train_out));
      Metrics hold = evaluate(model, split.holdout10);
      Metrics test = evaluate(model, split.test20);
      std::cout << "records " << data.records.size() << '\n'
                << "train " << split.train.size() << " test20 "
                << split.test20.size() << " holdout10 "
                << split.holdout10.size() << '\n'
                << "holdout10 mae " << fmt17(hold.mae) << " mse "
                << fmt17(hold.mse) << '\n'
                << "test20 mae " << fmt17(test.mae) << " mse "
                << fmt17(test.mse) << '\n'
                << "model " << train_out << '\n';
      return 0;
    }

    if (*cmd_opt) {
      GbtModel model = GbtModel::load(std::filesystem::path(opt_model));
      PauliHamiltonian h = load_hamiltonian(opt_ham);
      std::string solver = model.layout_tag();
      if (solver == "-")
        throw std::runtime_error(
            "model carries no layout tag; re-train it from a dataset");
      HyperparamSpec spec = HyperparamSpec::for_solver(solver);
      search.seed = seed;
      OptimizeResult res = optimize(model, h, spec, search);
      save_vector_file(opt_out, spec, res.best);
      std::cout << "solver " << solver << '\n'
                << "predicted_score " << fmt17(res.best_score) << '\n';
      for (std::size_t i = 0; i < spec.size(); ++i)
        std::cout << spec.fields[i].name << ' ' << fmt17(res.best[i]) << '\n';
      std::cout << "vector " << opt_out << '\n';
      return 0;
    }

    if (*cmd_eval) {
      EvalJob job = load_eval_job(eval_config);
      if (app.count("--seed")) job.seed = seed;
      if (eval_repeats > 0) job.repeats = eval_repeats;
      GbtModel model = GbtModel::load(job.model);
      HyperparamSpec spec = HyperparamSpec::for_solver(job.solver);
      std::vector<EvalRow> rows;
      for (std::size_t i = 0; i < job.hamiltonians.size(); ++i) {
        PauliHamiltonian h = load_hamiltonian(job.hamiltonians[i]);
        std::cerr << "evaluate: " << job.hamiltonians[i].stem().string()
                  << "...\n";
        auto sys_rows = evaluate_system(
            h, job.hamiltonians[i].stem().string(), job.true_values[i], model,
            spec, job.search, job.shot_cap, job.repeats,
            derive_seed(job.seed, i), job.timeout_s, job.exact_mode);
        rows.insert(rows.end(), sys_rows.begin(), sys_rows.end());
      }
      write_report(std::cout, rows);
      if (!job.output.empty()) {
        std::ofstream out(job.output);
        if (!out)
          throw std::runtime_error("cannot write " + job.output.string());
        write_report(out, rows);
      }
      print_report_table(std::cerr, rows);
      return 0;
    }
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
