#include "qetune/hyperopt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "qetune/errors.hpp"
#include "qetune/features.hpp"
#include "qetune/rng.hpp"

namespace qetune {

double FieldSpec::clamp(double v) const {
  switch (kind) {
    case Kind::Boolean:
      return v >= 0.5 ? 1.0 : 0.0;
    case Kind::Integer:
      return std::clamp(std::floor(v + 0.5), lo, hi);  // round half-up
    case Kind::Real:
    case Kind::LogReal:
      return std::clamp(v, lo, hi);
  }
  return v;
}

bool FieldSpec::contains(double v) const {
  if (kind == Kind::Boolean) return v == 0.0 || v == 1.0;
  if (v < lo || v > hi) return false;
  if (kind == Kind::Integer) return v == std::floor(v);
  return true;
}

bool HyperparamSpec::contains(std::span<const double> v) const {
  if (v.size() != fields.size()) return false;
  for (std::size_t i = 0; i < fields.size(); ++i)
    if (!fields[i].contains(v[i])) return false;
  return true;
}

HyperparamSpec HyperparamSpec::qcels() {
  using K = FieldSpec::Kind;
  return {"qcels",
          {
              {"delta_t", K::Real, 1e-3, 0.3},
              {"n_Z", K::Integer, 5, 25},
              {"ham_terms", K::Integer, 50, 1000},
              {"ham_cutoff", K::Real, 1e-4, 1e-2},
              {"alpha", K::Real, 0.5, 1.0},
          }};
}

HyperparamSpec HyperparamSpec::adapt_qsci() {
  using K = FieldSpec::Kind;
  return {"adapt-qsci",
          {
              {"num_pickup", K::Integer, 50, 1000},
              {"coeff_cutoff", K::Real, 1e-4, 1e-2},
              {"self_selection", K::Boolean, 0, 1},
              {"iter_max", K::Integer, 1e4, 1e6},
              {"sampling_shots", K::Integer, 100, 1e6},
              {"atol", K::Real, 1e-6, 1e-4},
              {"final_sampling_shots_coeff", K::Integer, 1, 8},
              {"num_precise_gradient", K::Integer, 32, 300},
              {"max_num_converged", K::Integer, 1, 4},
              {"reset_ignored_inx_mode", K::Integer, 0, 100},
          }};
}

HyperparamSpec HyperparamSpec::for_solver(const std::string& name) {
  if (name == "qcels") return qcels();
  if (name == "adapt-qsci") return adapt_qsci();
  throw std::invalid_argument("unknown solver '" + name + "'");
}

namespace {

double sample_field(const FieldSpec& f, std::mt19937_64& rng) {
  switch (f.kind) {
    case FieldSpec::Kind::Boolean:
      return uniform01(rng) < 0.5 ? 0.0 : 1.0;
    case FieldSpec::Kind::Integer:
      return static_cast<double>(uniform_int(
          rng, static_cast<long long>(f.lo), static_cast<long long>(f.hi)));
    case FieldSpec::Kind::Real:
      return f.lo + (f.hi - f.lo) * uniform01(rng);
    case FieldSpec::Kind::LogReal: {
      double llo = std::log(f.lo), lhi = std::log(f.hi);
      return std::exp(llo + (lhi - llo) * uniform01(rng));
    }
  }
  return f.lo;
}

}  // namespace

std::vector<double> random_vector(const HyperparamSpec& spec,
                                  std::mt19937_64& rng) {
  std::vector<double> v;
  v.reserve(spec.size());
  for (const auto& f : spec.fields) v.push_back(sample_field(f, rng));
  return v;
}

std::vector<double> crossover(std::span<const double> a,
                              std::span<const double> b,
                              const HyperparamSpec& spec, std::mt19937_64& rng,
                              const CrossoverWeights& weights) {
  if (a.size() != spec.size() || b.size() != spec.size())
    throw ShapeError("parent vectors do not match the search space");
  double wsum = weights.p[0] + weights.p[1] + weights.p[2] + weights.p[3];
  std::vector<double> child(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const FieldSpec& f = spec.fields[i];
    double u = uniform01(rng) * wsum;
    double v;
    if (u < weights.p[0]) {
      // average; for booleans, pick a parent at random
      v = f.kind == FieldSpec::Kind::Boolean
              ? (uniform01(rng) < 0.5 ? a[i] : b[i])
              : 0.5 * (a[i] + b[i]);
    } else if (u < weights.p[0] + weights.p[1]) {
      v = std::min(a[i], b[i]);
    } else if (u < weights.p[0] + weights.p[1] + weights.p[2]) {
      v = std::max(a[i], b[i]);
    } else {
      v = sample_field(f, rng);
    }
    child[i] = f.clamp(v);
  }
  return child;
}

OptimizeResult optimize(const GbtModel& model, const PauliHamiltonian& h,
                        const HyperparamSpec& spec, const SearchConfig& cfg) {
  if (cfg.population < 2 || cfg.generations < 1)
    throw std::invalid_argument("population must be >= 2, generations >= 1");
  const int n_hyper = static_cast<int>(spec.size());
  const int k_slots = model.n_features() - n_hyper - 1;
  if (k_slots < 1)
    throw ShapeError("model expects " + std::to_string(model.n_features()) +
                     " features, too few for " + std::to_string(n_hyper) +
                     " hyperparameters");

  std::mt19937_64 rng(derive_seed(cfg.seed, 0xb0b));
  auto score = [&](std::span<const double> v) {
    return model.predict(encode_features(h, v, k_slots));
  };

  std::vector<std::vector<double>> pop(cfg.population);
  for (auto& v : pop) v = random_vector(spec, rng);

  const int n_elite = std::max(
      2, static_cast<int>(std::ceil(cfg.elite_fraction * cfg.population)));

  OptimizeResult out;
  out.best_score = std::numeric_limits<double>::infinity();
  for (int gen = 0; gen < cfg.generations; ++gen) {
    std::vector<std::pair<double, int>> ranked(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i)
      ranked[i] = {score(pop[i]), static_cast<int>(i)};
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    if (ranked[0].first < out.best_score) {
      out.best_score = ranked[0].first;
      out.best = pop[ranked[0].second];
    }
    out.best_by_generation.push_back(out.best_score);
    if (gen + 1 == cfg.generations) break;

    // Elites survive verbatim; the remainder is crossover of elite pairs.
    std::vector<std::vector<double>> next;
    next.reserve(pop.size());
    for (int e = 0; e < n_elite && e < static_cast<int>(ranked.size()); ++e)
      next.push_back(pop[ranked[e].second]);
    while (next.size() < pop.size()) {
      std::size_t i = uniform_below(rng, static_cast<std::uint64_t>(n_elite));
      std::size_t j = uniform_below(rng, static_cast<std::uint64_t>(n_elite));
      next.push_back(crossover(pop[ranked[i].second], pop[ranked[j].second],
                               spec, rng));
    }
    pop = std::move(next);
  }
  return out;
}

void save_vector_file(const std::filesystem::path& file,
                      const HyperparamSpec& spec, std::span<const double> v) {
  if (v.size() != spec.size())
    throw ShapeError("vector does not match the search space");
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << "hyperparams " << spec.solver << '\n';
  char buf[64];
  for (std::size_t i = 0; i < spec.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
    out << spec.fields[i].name << ' ' << buf << '\n';
  }
}

std::pair<std::string, std::vector<double>> load_vector_file(
    const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::string tag, solver;
  if (!(in >> tag >> solver) || tag != "hyperparams")
    throw ParseError("expected 'hyperparams <solver>' header", 1);
  HyperparamSpec spec = HyperparamSpec::for_solver(solver);
  std::vector<double> v(spec.size(),
                        std::numeric_limits<double>::quiet_NaN());
  std::string name;
  double val;
  while (in >> name >> val) {
    bool known = false;
    for (std::size_t i = 0; i < spec.size(); ++i) {
      if (spec.fields[i].name == name) {
        v[i] = val;
        known = true;
        break;
      }
    }
    if (!known) throw ParseError("unknown field '" + name + "'", 0);
  }
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::isnan(v[i]))
      throw ParseError("missing field '" + spec.fields[i].name + "'", 0);
  return {solver, std::move(v)};
}

}  // namespace qetune
