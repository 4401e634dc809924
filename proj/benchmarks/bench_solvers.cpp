#include <benchmark/benchmark.h>

#include <complex>
#include <random>

#include "qetune/gbt.hpp"
#include "qetune/qcels.hpp"
#include "qetune/qsci.hpp"
#include "qetune/rng.hpp"

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

std::vector<TrainingRecord> synthetic_records(int count, int width) {
  std::mt19937_64 rng(5);
  std::vector<TrainingRecord> recs(count);
  for (auto& r : recs) {
    r.system = "bench";
    r.x.resize(width);
    for (double& v : r.x) v = uniform01(rng);
    r.y = 3.0 * r.x[0] - r.x[1];
  }
  return recs;
}

}  // namespace

static void QcelsSolveExact(benchmark::State& state) {
  PauliHamiltonian h = ising_chain(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    ShotBudget budget(10'000'000);
    benchmark::DoNotOptimize(qcels_solve(h, {}, budget, true, 7));
  }
}
BENCHMARK(QcelsSolveExact)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);

static void AdaptQsciSolveExact(benchmark::State& state) {
  PauliHamiltonian h = ising_chain(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    ShotBudget budget(10'000'000);
    benchmark::DoNotOptimize(adapt_qsci_solve(h, {}, budget, true, 7));
  }
}
BENCHMARK(AdaptQsciSolveExact)
    ->DenseRange(4, 8, 2)
    ->Unit(benchmark::kMillisecond);

static void FitStages(benchmark::State& state) {
  const int n = 20;
  std::vector<double> ts(n);
  std::vector<std::complex<double>> zs(n);
  for (int i = 0; i < n; ++i) {
    ts[i] = 0.1 * i;
    zs[i] = 0.8 * std::polar(1.0, 3.1 * ts[i]) +
            0.2 * std::polar(1.0, 1.2 * ts[i]);
  }
  for (auto _ : state) benchmark::DoNotOptimize(fit_stages(zs, ts, 0.8));
}
BENCHMARK(FitStages)->Unit(benchmark::kMillisecond);

static void GbtTrain(benchmark::State& state) {
  auto recs = synthetic_records(static_cast<int>(state.range(0)), 50);
  GbtConfig cfg;
  cfg.n_trees = 50;
  for (auto _ : state) benchmark::DoNotOptimize(train_gbt(recs, cfg));
}
BENCHMARK(GbtTrain)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

static void GbtPredict(benchmark::State& state) {
  auto recs = synthetic_records(500, 50);
  GbtModel model = train_gbt(recs, {});
  for (auto _ : state)
    benchmark::DoNotOptimize(model.predict(recs[17].x));
}
BENCHMARK(GbtPredict);

BENCHMARK_MAIN();
