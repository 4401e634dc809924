#include <doctest.h>

#include <filesystem>
#include <random>

#include "qetune/features.hpp"
#include "qetune/qcels.hpp"
#include "qetune/rng.hpp"

using namespace qetune;

TEST_CASE("encode_features: layout, cutoff and padding") {
  PauliHamiltonian h(1, {{1.0, PauliString::single(Pauli::Z, 0)},
                         {0.04, PauliString::single(Pauli::X, 0)}});
  auto hp = to_vector(QcelsHyperparams{});
  auto x = encode_features(h, hp, 3);
  REQUIRE(x.size() == hp.size() + 1 + 3);
  for (std::size_t i = 0; i < hp.size(); ++i) CHECK(x[i] == hp[i]);
  CHECK(x[hp.size()] == 1.0);  // n_qubits
  CHECK(x[hp.size() + 1] == 1.0);  // the 0.04 term fell below the ML cutoff
  CHECK(x[hp.size() + 2] == 0.0);
  CHECK(x[hp.size() + 3] == 0.0);
}

TEST_CASE("encode_features: empty tail for a fully compressed Hamiltonian") {
  PauliHamiltonian h(2, {{0.01, PauliString::single(Pauli::Z, 0)}});
  auto x = encode_features(h, std::vector<double>{1.0}, 4);
  for (std::size_t i = 2; i < x.size(); ++i) CHECK(x[i] == 0.0);
}

TEST_CASE("encode_features: compressed length never exceeds the slot count") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<PauliTerm> terms;
    int n_terms = 5 + static_cast<int>(uniform_below(rng, 40));
    for (int t = 0; t < n_terms; ++t) {
      std::map<int, Pauli> ops{{static_cast<int>(uniform_below(rng, 6)),
                                static_cast<Pauli>(uniform_below(rng, 3))}};
      terms.push_back({2.0 * uniform01(rng) - 1.0, PauliString(ops)});
    }
    PauliHamiltonian h(6, terms);
    int k = 8;
    auto x = encode_features(h, std::vector<double>{0.5}, k);
    REQUIRE(static_cast<int>(x.size()) == 1 + 1 + k);
    // the nonzero tail length equals the count of |coeff| > 0.05 survivors
    int survivors = static_cast<int>(compress(h, kFeatureCutoff, k).size());
    int nonzero = 0;
    for (int i = 2; i < 2 + k; ++i)
      if (x[i] != 0.0) ++nonzero;
    CHECK(nonzero == survivors);
  }
}

TEST_CASE("encoding is injective over hyperparameter fields") {
  PauliHamiltonian h(1, {{1.0, PauliString::single(Pauli::Z, 0)}});
  auto a = to_vector(QcelsHyperparams{});
  auto b = a;
  b[4] += 0.01;  // alpha
  CHECK(encode_features(h, a, 5) != encode_features(h, b, 5));
}

TEST_CASE("dataset save/load round trip") {
  Dataset d;
  d.solver = "qcels";
  d.n_hyper = 5;
  d.k_slots = 3;
  PauliHamiltonian h(2, {{-1.0, PauliString::two(Pauli::Z, 0, Pauli::Z, 1)}});
  for (int i = 0; i < 4; ++i) {
    TrainingRecord r;
    r.system = "sys" + std::to_string(i % 2);
    r.x = encode_features(h, to_vector(QcelsHyperparams{}), 3);
    r.y = -1.0 - 0.125 * i;
    d.records.push_back(r);
  }
  auto path = std::filesystem::temp_directory_path() / "qetune_ds_test.txt";
  save_dataset(d, path);
  Dataset back = load_dataset(path);
  CHECK(back.solver == d.solver);
  CHECK(back.n_hyper == d.n_hyper);
  CHECK(back.k_slots == d.k_slots);
  REQUIRE(back.records.size() == d.records.size());
  for (std::size_t i = 0; i < d.records.size(); ++i) {
    CHECK(back.records[i].system == d.records[i].system);
    CHECK(back.records[i].x == d.records[i].x);
    CHECK(back.records[i].y == d.records[i].y);
  }
  std::filesystem::remove(path);
}
