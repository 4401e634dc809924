#include "qetune/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "qetune/errors.hpp"
#include "qetune/features.hpp"
#include "qetune/qcels.hpp"
#include "qetune/qsci.hpp"
#include "qetune/rng.hpp"
#include "qetune/statevector.hpp"

namespace qetune {

namespace {

using nlohmann::json;

json read_json(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  json j;
  in >> j;
  return j;
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

void format_double(std::ostream& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out << buf;
}

}  // namespace

EnergyEstimate run_solver(const std::string& solver, const PauliHamiltonian& h,
                          std::span<const double> hp_vec, ShotBudget& budget,
                          bool exact_mode, std::uint64_t seed,
                          double timeout_s) {
  // The timeout bounds the adaptive solver's iteration loop; a qcels solve
  // is a single bounded pass.
  if (solver == "qcels")
    return qcels_solve(h, qcels_from_vector(hp_vec), budget, exact_mode, seed);
  if (solver == "adapt-qsci")
    return adapt_qsci_solve(h, adapt_qsci_from_vector(hp_vec), budget,
                            exact_mode, seed, timeout_s);
  throw std::invalid_argument("unknown solver '" + solver + "'");
}

std::vector<double> default_hyperparams(const std::string& solver) {
  if (solver == "qcels") return to_vector(QcelsHyperparams{});
  if (solver == "adapt-qsci") return to_vector(AdaptQsciHyperparams{});
  throw std::invalid_argument("unknown solver '" + solver + "'");
}

MiningJob load_mining_job(const std::filesystem::path& json_file) {
  json j = read_json(json_file);
  const auto base = json_file.parent_path();
  MiningJob job;
  job.solver = j.value("solver", job.solver);
  for (const auto& p : j.at("hamiltonians"))
    job.hamiltonians.push_back(resolve(base, p.get<std::string>()));
  job.runs_per_system = j.value("runs_per_system", job.runs_per_system);
  job.seed = j.value("seed", job.seed);
  job.shot_cap = j.value("shot_cap", job.shot_cap);
  job.k_slots = j.value("k_slots", job.k_slots);
  job.timeout_s = j.value("timeout_s", job.timeout_s);
  job.output = resolve(base, j.at("output").get<std::string>());
  return job;
}

MineStats mine(const MiningJob& job, std::ostream* log) {
  if (job.runs_per_system < 1)
    throw std::invalid_argument("runs_per_system must be >= 1");
  HyperparamSpec spec = HyperparamSpec::for_solver(job.solver);

  struct System {
    std::string tag;
    PauliHamiltonian ham;
  };
  std::vector<System> systems;
  for (const auto& path : job.hamiltonians) {
    PauliHamiltonian h = load_hamiltonian(path);
    if (h.n_qubits() > kMaxDenseQubits)
      throw CapacityError("mining accepts systems up to " +
                          std::to_string(kMaxDenseQubits) + " qubits; " +
                          path.string() + " has " +
                          std::to_string(h.n_qubits()));
    systems.push_back({path.stem().string(), std::move(h)});
  }

  // Resume: count completed runs per system already in the output file.
  std::map<std::string, int> done;
  bool have_file = std::filesystem::exists(job.output);
  if (have_file) {
    Dataset existing = load_dataset(job.output);
    if (existing.solver != job.solver || existing.k_slots != job.k_slots ||
        existing.n_hyper != static_cast<int>(spec.size()))
      throw ShapeError("existing dataset " + job.output.string() +
                       " has a different layout");
    for (const auto& r : existing.records) ++done[r.system];
  }

  std::ofstream out(job.output, std::ios::app);
  if (!out) throw std::runtime_error("cannot write " + job.output.string());
  if (!have_file) {
    Dataset header;
    header.solver = job.solver;
    header.n_hyper = static_cast<int>(spec.size());
    header.k_slots = job.k_slots;
    write_dataset_header(out, header);
    out.flush();
  }

  MineStats stats;
  for (std::size_t s = 0; s < systems.size(); ++s) {
    const auto& sys = systems[s];
    for (int run = 0; run < job.runs_per_system; ++run) {
      auto it = done.find(sys.tag);
      if (it != done.end() && it->second > 0) {
        --it->second;
        ++stats.skipped;
        continue;
      }
      // Per-(system, run) seed so a resumed job reproduces what an
      // uninterrupted one would have written.
      std::uint64_t run_seed =
          derive_seed(job.seed, s * 1000003ull + static_cast<std::uint64_t>(run));
      std::mt19937_64 rng(run_seed);
      std::vector<double> hp_vec = random_vector(spec, rng);
      try {
        ShotBudget budget(job.shot_cap);
        EnergyEstimate est = run_solver(job.solver, sys.ham, hp_vec, budget,
                                        /*exact_mode=*/true, run_seed,
                                        job.timeout_s);
        TrainingRecord rec;
        rec.system = sys.tag;
        rec.x = encode_features(sys.ham, hp_vec, job.k_slots);
        rec.y = est.value;
        write_record(out, rec);
        out.flush();
        ++stats.written;
      } catch (const std::exception& e) {
        ++stats.failed;
        if (log)
          *log << "mine: skipping " << sys.tag << " run " << run << ": "
               << e.what() << '\n';
      }
    }
  }
  return stats;
}

double relative_error_pct(double score, double true_value) {
  return std::abs((score - true_value) / true_value) * 100.0;
}

std::vector<EvalRow> evaluate_system(
    const PauliHamiltonian& h, const std::string& system_name,
    std::optional<double> true_value, const GbtModel& model,
    const HyperparamSpec& spec, const SearchConfig& search,
    std::uint64_t shot_cap, int repeats, std::uint64_t seed, double timeout_s,
    bool exact_mode) {
  if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");
  std::vector<EvalRow> rows;
  for (int variant = 0; variant < 2; ++variant) {
    const bool optimized = variant == 1;
    std::vector<double> hp_vec;
    if (optimized) {
      SearchConfig sc = search;
      sc.seed = derive_seed(seed, 0x0fffu);
      hp_vec = optimize(model, h, spec, sc).best;
    } else {
      hp_vec = default_hyperparams(spec.solver);
    }
    EvalRow row;
    row.system = system_name;
    row.algorithm = spec.solver;
    row.variant = optimized ? "optimized" : "default";
    bool have = false;
    for (int r = 0; r < repeats; ++r) {
      ShotBudget budget(shot_cap);
      std::uint64_t run_seed =
          derive_seed(seed, (optimized ? 7919u : 104729u) + static_cast<std::uint64_t>(r));
      EnergyEstimate est =
          run_solver(spec.solver, h, hp_vec, budget, exact_mode, run_seed,
                     timeout_s);
      // Best of the repeats = lowest energy, the solvers' score convention.
      if (!have || est.value < row.task_score) {
        have = true;
        row.task_score = est.value;
        row.iterations = est.iterations;
        row.shots = est.shots_used;
        row.truncated = est.truncated;
        row.runtime_s = est.wall_time_s;
      }
    }
    if (true_value) row.error_pct = relative_error_pct(row.task_score, *true_value);
    rows.push_back(std::move(row));
  }
  return rows;
}

EvalJob load_eval_job(const std::filesystem::path& json_file) {
  json j = read_json(json_file);
  const auto base = json_file.parent_path();
  EvalJob job;
  job.solver = j.value("solver", job.solver);
  job.model = resolve(base, j.at("model").get<std::string>());
  for (const auto& sys : j.at("systems")) {
    job.hamiltonians.push_back(resolve(base, sys.at("path").get<std::string>()));
    if (sys.contains("true_value"))
      job.true_values.push_back(sys.at("true_value").get<double>());
    else
      job.true_values.push_back(std::nullopt);
  }
  job.shot_cap = j.value("shot_cap", job.shot_cap);
  job.repeats = j.value("repeats", job.repeats);
  job.seed = j.value("seed", job.seed);
  job.timeout_s = j.value("timeout_s", job.timeout_s);
  job.exact_mode = j.value("exact", job.exact_mode);
  if (j.contains("search")) {
    const auto& s = j.at("search");
    job.search.population = s.value("population", job.search.population);
    job.search.generations = s.value("generations", job.search.generations);
    job.search.elite_fraction =
        s.value("elite_fraction", job.search.elite_fraction);
  }
  if (j.contains("output"))
    job.output = resolve(base, j.at("output").get<std::string>());
  return job;
}

void write_report(std::ostream& out, const std::vector<EvalRow>& rows) {
  out << "system\talgorithm\tvariant\ttask_score\terror_pct\titerations\t"
         "shots\ttruncated\n";
  for (const auto& r : rows) {
    out << r.system << '\t' << r.algorithm << '\t' << r.variant << '\t';
    format_double(out, r.task_score);
    out << '\t';
    if (r.error_pct)
      format_double(out, *r.error_pct);
    else
      out << '-';
    out << '\t' << r.iterations << '\t' << r.shots << '\t'
        << (r.truncated ? 1 : 0) << '\n';
  }
}

std::vector<EvalRow> read_report(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("system\t", 0) != 0)
    throw ParseError("missing report header", 1);
  std::vector<EvalRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    EvalRow r;
    std::string err, trunc;
    if (!(std::getline(ss, r.system, '\t') &&
          std::getline(ss, r.algorithm, '\t') &&
          std::getline(ss, r.variant, '\t')))
      throw ParseError("short report row", line_no);
    std::string score, iters, shots;
    if (!(std::getline(ss, score, '\t') && std::getline(ss, err, '\t') &&
          std::getline(ss, iters, '\t') && std::getline(ss, shots, '\t') &&
          std::getline(ss, trunc)))
      throw ParseError("short report row", line_no);
    r.task_score = std::stod(score);
    if (err != "-") r.error_pct = std::stod(err);
    r.iterations = std::stoull(iters);
    r.shots = std::stoull(shots);
    r.truncated = trunc == "1";
    rows.push_back(std::move(r));
  }
  return rows;
}

void print_report_table(std::ostream& out, const std::vector<EvalRow>& rows) {
  out << std::left << std::setw(14) << "System" << std::setw(12) << "Algorithm"
      << std::setw(11) << "Variant" << std::right << std::setw(10)
      << "Error (%)" << std::setw(22) << "Task Score" << std::setw(14)
      << "Runtime (s)" << std::setw(7) << "Itr." << std::setw(12) << "Shots"
      << '\n';
  for (const auto& r : rows) {
    out << std::left << std::setw(14) << r.system << std::setw(12)
        << r.algorithm << std::setw(11) << r.variant << std::right;
    if (r.error_pct)
      out << std::setw(10) << std::fixed << std::setprecision(2)
          << *r.error_pct;
    else
      out << std::setw(10) << "-";
    out << std::setw(22) << std::setprecision(12) << r.task_score
        << std::setw(14) << std::setprecision(1) << r.runtime_s << std::setw(7)
        << r.iterations << std::setw(12) << r.shots;
    if (r.truncated) out << "  (truncated)";
    out << '\n';
    out.unsetf(std::ios::fixed);
  }
}

}  // namespace qetune
