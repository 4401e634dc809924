#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "qetune/hamiltonian.hpp"

namespace qetune {

/// Dense complex amplitude vector over n qubits. Qubit q maps to bit q of
/// the basis index (qubit 0 is the least significant bit); bitstrings print
/// with qubit n-1 leftmost.
class Statevector {
 public:
  /// |0...0>. Throws CapacityError above kMaxDenseQubits.
  explicit Statevector(int n_qubits);
  static Statevector basis_state(int n_qubits, std::uint64_t index);

  int n_qubits() const noexcept { return n_qubits_; }
  std::uint64_t dim() const noexcept { return amps_.size(); }

  std::span<const std::complex<double>> amplitudes() const noexcept {
    return amps_;
  }
  std::complex<double>& amp(std::uint64_t i) { return amps_[i]; }
  const std::complex<double>& amp(std::uint64_t i) const { return amps_[i]; }

  double norm() const;
  void normalize();

 private:
  int n_qubits_;
  std::vector<std::complex<double>> amps_;
};

/// Total-shot accounting with a hard cap. charge() throws BudgetError
/// before consuming anything if the request would exceed the cap. Not
/// thread-safe; concurrent users must serialize updates.
class ShotBudget {
 public:
  explicit ShotBudget(std::uint64_t cap) : cap_(cap) {}

  std::uint64_t cap() const noexcept { return cap_; }
  std::uint64_t used() const noexcept { return used_; }
  std::uint64_t remaining() const noexcept { return cap_ - used_; }

  void charge(std::uint64_t shots);

 private:
  std::uint64_t cap_;
  std::uint64_t used_ = 0;
};

std::string format_bitstring(std::uint64_t index, int n_qubits);

/// <x|H|x> for a computational basis state; only Z-only terms contribute.
double diagonal_expectation(const PauliHamiltonian& h, std::uint64_t index);

/// The computational basis state minimizing the diagonal expectation
/// <x|H|x| (ties: smallest index). The solvers' reference state.
Statevector hartree_fock_reference(const PauliHamiltonian& h);

/// P|s); the Pauli string applied via bit masks.
Statevector apply_pauli(const Statevector& s, const PauliString& p);

/// H|s> = sum_j coeff_j P_j |s>.
Statevector apply_hamiltonian(const Statevector& s, const PauliHamiltonian& h);

std::complex<double> inner_product(const Statevector& a, const Statevector& b);

/// <s|H|s> (real part; the imaginary part vanishes for Hermitian H).
double expectation_value(const Statevector& s, const PauliHamiltonian& h);

/// exp(-i angle P)|s> = (cos(angle) I - i sin(angle) P)|s>.
Statevector apply_pauli_rotation(Statevector s, const PauliString& p,
                                 double angle);

/// First-order Trotter step: applies prod_j exp(-i coeff_j (t/n_steps) P_j)
/// n_steps times, in the Hamiltonian's stored term order.
Statevector trotter_evolve(Statevector s, const PauliHamiltonian& h, double t,
                           int n_steps);

/// Step count heuristic for a time slice: ceil(|t| / granule), at least 1.
int default_trotter_steps(double t, double granule = 0.05);

/// Z_n = <ref|U(t_n)|ref> for t_n = n * delta_t, n = 0 .. n_points-1, with
/// U realized by incremental first-order Trotter evolution. Z_0 is exactly 1.
/// With shots_per_point = 0 the overlaps are computed exactly; otherwise
/// both Hadamard-test branches (real part, then phase-corrected imaginary
/// part) are sampled with shots_per_point Bernoulli draws each, charged to
/// the budget up front (2 * shots_per_point * (n_points - 1) total).
std::vector<std::complex<double>> expectation_series(
    const Statevector& ref, const PauliHamiltonian& h, double delta_t,
    int n_points, std::uint64_t shots_per_point, ShotBudget& budget,
    std::uint64_t rng_seed, double trotter_granule = 0.05);

/// Draws `shots` basis indices with probability |amp|^2, charging the
/// budget first. Deterministic for a fixed seed.
std::map<std::uint64_t, std::uint64_t> sample_bitstrings(
    const Statevector& s, std::uint64_t shots, ShotBudget& budget,
    std::uint64_t rng_seed);

/// Exact sampling distribution: every index with nonzero probability,
/// sorted by descending probability (ties: ascending index). The
/// shots -> infinity limit used by classical mode.
std::vector<std::pair<std::uint64_t, double>> exact_distribution(
    const Statevector& s);

}  // namespace qetune
