#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qetune/gbt.hpp"
#include "qetune/hamiltonian.hpp"

namespace qetune {

/// Domain descriptor for one hyperparameter field.
struct FieldSpec {
  enum class Kind { Integer, Real, LogReal, Boolean };

  std::string name;
  Kind kind = Kind::Real;
  double lo = 0.0;
  double hi = 1.0;

  double clamp(double v) const;
  bool contains(double v) const;
};

/// Per-solver search space. Bounds follow the solvers' documented sampling
/// ranges.
struct HyperparamSpec {
  std::string solver;
  std::vector<FieldSpec> fields;

  std::size_t size() const noexcept { return fields.size(); }
  bool contains(std::span<const double> v) const;

  static HyperparamSpec qcels();
  static HyperparamSpec adapt_qsci();
  static HyperparamSpec for_solver(const std::string& name);
};

struct SearchConfig {
  int population = 100;
  int generations = 20;
  double elite_fraction = 0.2;  // elite count is at least 2
  std::uint64_t seed = 0;
};

/// One vector with every field drawn uniformly from its domain.
std::vector<double> random_vector(const HyperparamSpec& spec,
                                  std::mt19937_64& rng);

/// Per-field recombination mode probabilities: average, min extreme,
/// max extreme, fresh random.
struct CrossoverWeights {
  std::array<double, 4> p{0.4, 0.2, 0.2, 0.2};
};

/// Child vector built field-by-field from two parents; integer fields round
/// half-up, booleans average by picking a parent, everything clamps to the
/// domain.
std::vector<double> crossover(std::span<const double> a,
                              std::span<const double> b,
                              const HyperparamSpec& spec, std::mt19937_64& rng,
                              const CrossoverWeights& weights = {});

struct OptimizeResult {
  std::vector<double> best;
  double best_score = 0.0;
  std::vector<double> best_by_generation;  // non-increasing
};

/// Generational search over hyperparameter vectors scored by the surrogate
/// (encode_features + model prediction; lower is better). Elites survive
/// into the next generation; the rest is filled by crossover of elite
/// pairs. Throws ShapeError when the model's feature length does not fit
/// the search space.
OptimizeResult optimize(const GbtModel& model, const PauliHamiltonian& h,
                        const HyperparamSpec& spec, const SearchConfig& cfg);

/// Text files carrying one named hyperparameter vector, consumable by the
/// solve command.
void save_vector_file(const std::filesystem::path& file,
                      const HyperparamSpec& spec, std::span<const double> v);
std::pair<std::string, std::vector<double>> load_vector_file(
    const std::filesystem::path& file);

}  // namespace qetune
