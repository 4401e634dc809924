#include <benchmark/benchmark.h>

#include <random>

#include "qetune/hamiltonian.hpp"
#include "qetune/rng.hpp"
#include "qetune/statevector.hpp"

using namespace qetune;

namespace {

PauliHamiltonian ising_chain(int n) {
  std::vector<PauliTerm> terms;
  for (int i = 0; i + 1 < n; ++i)
    terms.push_back({-1.0, PauliString::two(Pauli::Z, i, Pauli::Z, i + 1)});
  for (int i = 0; i < n; ++i)
    terms.push_back({-0.5, PauliString::single(Pauli::X, i)});
  return PauliHamiltonian(n, terms);
}

Statevector dense_state(int n) {
  std::mt19937_64 rng(1);
  Statevector s(n);
  for (std::uint64_t i = 0; i < s.dim(); ++i)
    s.amp(i) = {2.0 * uniform01(rng) - 1.0, 2.0 * uniform01(rng) - 1.0};
  s.normalize();
  return s;
}

}  // namespace

static void PauliRotation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Statevector s = dense_state(n);
  PauliString p = PauliString::two(Pauli::X, 0, Pauli::Y, n - 1);
  for (auto _ : state) {
    s = apply_pauli_rotation(std::move(s), p, 0.01);
    benchmark::DoNotOptimize(s);
  }
  state.SetComplexityN(1 << n);
}
BENCHMARK(PauliRotation)->DenseRange(6, 14, 2)->Complexity();

static void TrotterStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  PauliHamiltonian h = ising_chain(n);
  Statevector s = dense_state(n);
  for (auto _ : state) {
    s = trotter_evolve(std::move(s), h, 0.05, 1);
    benchmark::DoNotOptimize(s);
  }
  state.SetComplexityN(1 << n);
}
BENCHMARK(TrotterStep)->DenseRange(6, 12, 2)->Complexity();

static void ExpectationValue(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  PauliHamiltonian h = ising_chain(n);
  Statevector s = dense_state(n);
  for (auto _ : state) benchmark::DoNotOptimize(expectation_value(s, h));
}
BENCHMARK(ExpectationValue)->DenseRange(6, 12, 2);

static void SampleBitstrings(benchmark::State& state) {
  Statevector s = dense_state(10);
  for (auto _ : state) {
    ShotBudget budget(200'000);
    benchmark::DoNotOptimize(sample_bitstrings(s, 100'000, budget, 3));
  }
}
BENCHMARK(SampleBitstrings);

BENCHMARK_MAIN();
