#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "qetune/estimate.hpp"
#include "qetune/hamiltonian.hpp"
#include "qetune/statevector.hpp"

namespace qetune {

/// The ten tunables of the adaptive subspace solver, in canonical
/// (feature-vector) order.
struct AdaptQsciHyperparams {
  int num_pickup = 100;          // subspace cap; Hamiltonian keeps 10x terms
  double coeff_cutoff = 0.001;   // Hamiltonian coefficient floor
  bool self_selection = false;   // project gradients onto the subspace
  int iter_max = 100;            // iteration ceiling before the shot cap
  std::uint64_t sampling_shots = 100000;  // shots per iteration
  double atol = 1e-6;            // convergence tolerance on E_k
  int final_sampling_shots_coeff = 5;  // refined re-sample multiplier
  int num_precise_gradient = 128;      // argmax candidate pool size
  int max_num_converged = 2;     // consecutive in-tolerance steps to stop
  int reset_ignored_inx_mode = 0;  // clear used-operator list every N (0: never)
};

std::vector<double> to_vector(const AdaptQsciHyperparams& hp);
AdaptQsciHyperparams adapt_qsci_from_vector(std::span<const double> v);

/// Effective iteration ceiling: min(iter_max, floor(cap / sampling_shots)).
std::uint64_t effective_iter_max(const AdaptQsciHyperparams& hp,
                                 std::uint64_t cap);

/// Ordered list of distinct basis bitstrings spanning the diagonalization
/// subspace.
struct Subspace {
  std::vector<std::uint64_t> basis;
  std::size_t dimension() const noexcept { return basis.size(); }
};

struct AnsatzGate {
  PauliString op;
  double angle = 0.0;
};

/// Reference basis state plus the rotation gates grown so far; replaying
/// the gates on the reference reproduces the solver's working state.
struct AnsatzState {
  int n_qubits = 0;
  std::uint64_t reference = 0;
  std::vector<AnsatzGate> gates;

  Statevector to_statevector() const;
};

/// Fixed-order qubit-excitation-style pool: Y_i singles, then X_i Y_j and
/// Y_i Z_j over all ordered pairs. Size 2n^2 - n; every element carries an
/// odd number of Y factors so real states get nonzero gradients.
std::vector<PauliString> build_operator_pool(int n_qubits);

/// Distinct sampled bitstrings by descending count (ties: ascending value),
/// truncated to r_cap.
Subspace select_subspace(const std::map<std::uint64_t, std::uint64_t>& samples,
                         std::size_t r_cap);

inline constexpr std::size_t kMaxSubspaceDim = 4096;

struct SubspaceEigen {
  double energy = 0.0;
  std::vector<std::complex<double>> coefficients;  // over subspace basis
};

/// Minimal eigenpair of H restricted to the subspace, M_lm = <r_l|H|r_m>.
/// Variational: the energy cannot fall below the true ground energy.
SubspaceEigen diagonalize_subspace(const PauliHamiltonian& h,
                                   const Subspace& s);

/// Pool operator gradients h_j = <c| i[H, P_j] |c>, evaluated exactly on
/// the statevector. The imaginary residue is checked and discarded.
std::vector<double> pool_gradients(const PauliHamiltonian& h,
                                   std::span<const PauliString> pool,
                                   const Statevector& c_state);

/// The adaptive loop: sample the ansatz state, select a subspace, solve CI
/// in it, grow the ansatz by the largest-gradient pool operator with a
/// line-searched angle; stop on convergence, iteration cap, shot cap or
/// timeout. exact_mode replaces sampling by the exact distribution and
/// charges no shots. Returns the best subspace energy seen; energy_trace,
/// when given, receives every per-iteration subspace energy E_k.
EnergyEstimate adapt_qsci_solve(const PauliHamiltonian& h,
                                const AdaptQsciHyperparams& hp,
                                ShotBudget& budget, bool exact_mode,
                                std::uint64_t rng_seed, double timeout_s = 0.0,
                                std::vector<double>* energy_trace = nullptr);

}  // namespace qetune
