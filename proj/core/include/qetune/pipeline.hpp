#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qetune/estimate.hpp"
#include "qetune/gbt.hpp"
#include "qetune/hamiltonian.hpp"
#include "qetune/hyperopt.hpp"
#include "qetune/statevector.hpp"

namespace qetune {

/// Dispatch to the named solver ("qcels" | "adapt-qsci") with a canonical
/// hyperparameter vector.
EnergyEstimate run_solver(const std::string& solver, const PauliHamiltonian& h,
                          std::span<const double> hp_vec, ShotBudget& budget,
                          bool exact_mode, std::uint64_t seed,
                          double timeout_s = 0.0);

/// The solver's documented default hyperparameters as a canonical vector.
std::vector<double> default_hyperparams(const std::string& solver);

/// Mining configuration: run a solver in classical (exact) mode with fresh
/// random hyperparameters over a set of small systems, recording one
/// training record per run.
struct MiningJob {
  std::vector<std::filesystem::path> hamiltonians;
  std::string solver = "qcels";  // "qcels" | "adapt-qsci"
  int runs_per_system = 50;
  std::uint64_t seed = 0;
  std::uint64_t shot_cap = 10'000'000;
  int k_slots = 300;
  double timeout_s = 300.0;
  std::filesystem::path output;
};

MiningJob load_mining_job(const std::filesystem::path& json_file);

struct MineStats {
  int written = 0;
  int skipped = 0;  // already present (resumed)
  int failed = 0;
};

/// Appends records to job.output, one flushed line per completed run, so an
/// interrupted job resumes where it stopped. Systems above kMaxDenseQubits
/// are rejected. A failed run is logged and skipped.
MineStats mine(const MiningJob& job, std::ostream* log = nullptr);

struct EvalRow {
  std::string system;
  std::string algorithm;  // "qcels" | "adapt-qsci"
  std::string variant;    // "default" | "optimized"
  double task_score = 0.0;
  std::optional<double> error_pct;  // present iff the true value is known
  double runtime_s = 0.0;
  std::uint64_t iterations = 0;
  std::uint64_t shots = 0;
  bool truncated = false;
};

/// |(score - true_value) / true_value| * 100.
double relative_error_pct(double score, double true_value);

/// Runs the solver with default and with surrogate-optimized
/// hyperparameters (best of `repeats` seeded runs each) and reports both
/// rows.
std::vector<EvalRow> evaluate_system(
    const PauliHamiltonian& h, const std::string& system_name,
    std::optional<double> true_value, const GbtModel& model,
    const HyperparamSpec& spec, const SearchConfig& search,
    std::uint64_t shot_cap, int repeats, std::uint64_t seed,
    double timeout_s = 0.0, bool exact_mode = false);

struct EvalJob {
  std::vector<std::filesystem::path> hamiltonians;
  std::vector<std::optional<double>> true_values;  // parallel to hamiltonians
  std::filesystem::path model;
  std::string solver = "qcels";
  std::uint64_t shot_cap = 10'000'000;
  int repeats = 3;
  std::uint64_t seed = 0;
  double timeout_s = 300.0;
  bool exact_mode = false;
  SearchConfig search;
  std::filesystem::path output;
};

EvalJob load_eval_job(const std::filesystem::path& json_file);

/// Machine-readable report: tab-separated, deterministic (no wall-clock
/// column; timings belong to the human-readable table).
void write_report(std::ostream& out, const std::vector<EvalRow>& rows);

/// Parses write_report output; runtime_s reads back as 0.
std::vector<EvalRow> read_report(std::istream& in);

/// Human-readable table including approximate runtimes.
void print_report_table(std::ostream& out, const std::vector<EvalRow>& rows);

}  // namespace qetune
