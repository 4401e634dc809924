#include "qetune/qsci.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <unordered_map>

#include "pauli_masks.hpp"
#include "qetune/errors.hpp"
#include "qetune/rng.hpp"

namespace qetune {

std::vector<double> to_vector(const AdaptQsciHyperparams& hp) {
  return {static_cast<double>(hp.num_pickup),
          hp.coeff_cutoff,
          hp.self_selection ? 1.0 : 0.0,
          static_cast<double>(hp.iter_max),
          static_cast<double>(hp.sampling_shots),
          hp.atol,
          static_cast<double>(hp.final_sampling_shots_coeff),
          static_cast<double>(hp.num_precise_gradient),
          static_cast<double>(hp.max_num_converged),
          static_cast<double>(hp.reset_ignored_inx_mode)};
}

AdaptQsciHyperparams adapt_qsci_from_vector(std::span<const double> v) {
  if (v.size() != 10)
    throw ShapeError("adapt-qsci hyperparam vector needs 10 fields");
  AdaptQsciHyperparams hp;
  hp.num_pickup = static_cast<int>(std::llround(v[0]));
  hp.coeff_cutoff = v[1];
  hp.self_selection = v[2] != 0.0;
  hp.iter_max = static_cast<int>(std::llround(v[3]));
  hp.sampling_shots = static_cast<std::uint64_t>(std::llround(v[4]));
  hp.atol = v[5];
  hp.final_sampling_shots_coeff = static_cast<int>(std::llround(v[6]));
  hp.num_precise_gradient = static_cast<int>(std::llround(v[7]));
  hp.max_num_converged = static_cast<int>(std::llround(v[8]));
  hp.reset_ignored_inx_mode = static_cast<int>(std::llround(v[9]));
  return hp;
}

std::uint64_t effective_iter_max(const AdaptQsciHyperparams& hp,
                                 std::uint64_t cap) {
  std::uint64_t by_budget = hp.sampling_shots > 0 ? cap / hp.sampling_shots : 0;
  return std::min<std::uint64_t>(static_cast<std::uint64_t>(hp.iter_max),
                                 by_budget);
}

Statevector AnsatzState::to_statevector() const {
  Statevector s = Statevector::basis_state(n_qubits, reference);
  for (const auto& g : gates) s = apply_pauli_rotation(std::move(s), g.op, g.angle);
  return s;
}

std::vector<PauliString> build_operator_pool(int n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("n_qubits must be positive");
  std::vector<PauliString> pool;
  pool.reserve(static_cast<std::size_t>(2 * n_qubits) * n_qubits - n_qubits);
  for (int i = 0; i < n_qubits; ++i)
    pool.push_back(PauliString::single(Pauli::Y, i));
  for (int i = 0; i < n_qubits; ++i)
    for (int j = 0; j < n_qubits; ++j)
      if (i != j) pool.push_back(PauliString::two(Pauli::X, i, Pauli::Y, j));
  for (int i = 0; i < n_qubits; ++i)
    for (int j = 0; j < n_qubits; ++j)
      if (i != j) pool.push_back(PauliString::two(Pauli::Y, i, Pauli::Z, j));
  return pool;
}

Subspace select_subspace(const std::map<std::uint64_t, std::uint64_t>& samples,
                         std::size_t r_cap) {
  if (samples.empty()) throw std::invalid_argument("samples must be nonempty");
  std::vector<std::pair<std::uint64_t, std::uint64_t>> by_count(samples.begin(),
                                                                samples.end());
  // Map order is ascending index, so a stable sort keeps ties ascending.
  std::stable_sort(by_count.begin(), by_count.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  Subspace s;
  s.basis.reserve(std::min(r_cap, by_count.size()));
  for (const auto& [idx, cnt] : by_count) {
    if (s.basis.size() == r_cap) break;
    s.basis.push_back(idx);
  }
  return s;
}

SubspaceEigen diagonalize_subspace(const PauliHamiltonian& h,
                                   const Subspace& s) {
  const std::size_t r = s.dimension();
  if (r == 0) throw std::invalid_argument("empty subspace");
  if (r > kMaxSubspaceDim)
    throw CapacityError("subspace dimension " + std::to_string(r) +
                        " exceeds " + std::to_string(kMaxSubspaceDim));
  std::unordered_map<std::uint64_t, std::size_t> where;
  where.reserve(r);
  for (std::size_t l = 0; l < r; ++l) where.emplace(s.basis[l], l);

  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(r, r);
  for (const auto& t : h.terms()) {
    detail::TermMasks tm = detail::masks_of(t.string);
    for (std::size_t col = 0; col < r; ++col) {
      std::uint64_t row_str = s.basis[col] ^ tm.flip;
      auto it = where.find(row_str);
      if (it == where.end()) continue;
      m(it->second, col) += t.coeff * detail::pauli_phase(tm, s.basis[col]);
    }
  }
  SubspaceEigen out;
  if (r == 1) {
    out.energy = m(0, 0).real();
    out.coefficients = {1.0};
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("subspace eigensolver failed");
  out.energy = solver.eigenvalues()(0);
  Eigen::VectorXcd c = solver.eigenvectors().col(0);
  out.coefficients.assign(c.data(), c.data() + r);
  return out;
}

std::vector<double> pool_gradients(const PauliHamiltonian& h,
                                   std::span<const PauliString> pool,
                                   const Statevector& c_state) {
  Statevector w = apply_hamiltonian(c_state, h);
  std::vector<double> grads(pool.size());
  for (std::size_t j = 0; j < pool.size(); ++j) {
    Statevector v = apply_pauli(c_state, pool[j]);
    // <c| i[H, P] |c> = i (z - conj z) = -2 Im z with z = <Hc|Pc>; the
    // expression is exactly real, the imaginary residue cancels by
    // construction.
    std::complex<double> z = inner_product(w, v);
    grads[j] = -2.0 * z.imag();
  }
  return grads;
}

namespace {

void validate(const AdaptQsciHyperparams& hp) {
  if (hp.num_pickup < 1) throw std::invalid_argument("num_pickup must be >= 1");
  if (hp.coeff_cutoff < 0.0)
    throw std::invalid_argument("coeff_cutoff must be >= 0");
  if (hp.iter_max < 1) throw std::invalid_argument("iter_max must be >= 1");
  if (hp.sampling_shots < 1)
    throw std::invalid_argument("sampling_shots must be >= 1");
  if (!(hp.atol > 0.0)) throw std::invalid_argument("atol must be > 0");
  if (hp.final_sampling_shots_coeff < 1)
    throw std::invalid_argument("final_sampling_shots_coeff must be >= 1");
  if (hp.num_precise_gradient < 1)
    throw std::invalid_argument("num_precise_gradient must be >= 1");
  if (hp.max_num_converged < 1)
    throw std::invalid_argument("max_num_converged must be >= 1");
  if (hp.reset_ignored_inx_mode < 0)
    throw std::invalid_argument("reset_ignored_inx_mode must be >= 0");
}

Subspace exact_subspace(const Statevector& s, std::size_t r_cap) {
  auto dist = exact_distribution(s);
  Subspace sub;
  sub.basis.reserve(std::min(r_cap, dist.size()));
  for (const auto& [idx, p] : dist) {
    if (sub.basis.size() == r_cap) break;
    sub.basis.push_back(idx);
  }
  return sub;
}

// Coarse scan plus golden-section polish, 50 energy evaluations total.
double line_search_angle(const Statevector& psi, const PauliString& op,
                         const PauliHamiltonian& h) {
  auto energy = [&](double th) {
    return expectation_value(apply_pauli_rotation(psi, op, th), h);
  };
  constexpr int kScan = 14;
  double best_th = 0.0;
  double best_e = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kScan; ++k) {
    double th = -M_PI + (2.0 * M_PI * k) / kScan;
    double e = energy(th);
    if (e < best_e) {
      best_e = e;
      best_th = th;
    }
  }
  double lo = best_th - 2.0 * M_PI / kScan;
  double hi = best_th + 2.0 * M_PI / kScan;
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = energy(x1), f2 = energy(x2);
  for (int it = 0; it < 34; ++it) {
    if (f1 < f2) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = energy(x1);
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = energy(x2);
    }
  }
  return std::clamp(0.5 * (lo + hi), -M_PI, M_PI);
}

struct IterationResult {
  double energy = 0.0;
  std::size_t op_index = 0;
  double angle = 0.0;
  bool found_op = false;
};

}  // namespace

EnergyEstimate adapt_qsci_solve(const PauliHamiltonian& h,
                                const AdaptQsciHyperparams& hp,
                                ShotBudget& budget, bool exact_mode,
                                std::uint64_t rng_seed, double timeout_s,
                                std::vector<double>* energy_trace) {
  validate(hp);
  auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };
  const std::uint64_t used0 = budget.used();

  PauliHamiltonian work =
      compress(h, hp.coeff_cutoff,
               static_cast<std::size_t>(hp.num_pickup) * 10);
  const int n = h.n_qubits();
  Statevector ref = hartree_fock_reference(work);
  std::uint64_t ref_index = 0;
  for (std::uint64_t i = 0; i < ref.dim(); ++i)
    if (std::norm(ref.amp(i)) > 0.5) ref_index = i;

  AnsatzState ansatz{n, ref_index, {}};  // grown gate record
  Statevector psi = ref;                 // = ansatz.to_statevector()
  std::vector<PauliString> pool = build_operator_pool(n);
  std::vector<bool> used_ever(pool.size(), false);
  std::vector<bool> ignored(pool.size(), false);

  EnergyEstimate est;
  est.value = diagonal_expectation(work, ref_index);  // trivial R=1 subspace

  const std::uint64_t iter_cap = effective_iter_max(hp, budget.cap());
  if (iter_cap == 0) est.truncated = true;

  // One pass of sample -> subspace -> CI -> gradient -> line search.
  auto attempt = [&](std::uint64_t shots,
                     std::uint64_t seed_stream) -> IterationResult {
    Subspace sub;
    if (exact_mode) {
      sub = exact_subspace(psi, static_cast<std::size_t>(hp.num_pickup));
    } else {
      auto counts = sample_bitstrings(psi, shots, budget,
                                      derive_seed(rng_seed, seed_stream));
      sub = select_subspace(counts, static_cast<std::size_t>(hp.num_pickup));
    }
    SubspaceEigen eig = diagonalize_subspace(work, sub);

    // Gradient state: the full ansatz state by default; with
    // self_selection the subspace-reconstructed eigenvector (the solver
    // "works in subspace").
    std::vector<double> grads;
    if (hp.self_selection) {
      Statevector c_state(n);
      c_state.amp(0) = {0.0, 0.0};
      for (std::size_t l = 0; l < sub.dimension(); ++l)
        c_state.amp(sub.basis[l]) = eig.coefficients[l];
      grads = pool_gradients(work, pool, c_state);
    } else {
      grads = pool_gradients(work, pool, psi);
    }

    // Candidate set: the num_precise_gradient largest |h_j| (all gradients
    // are exact here, so the knob only gates the argmax pool).
    std::vector<std::size_t> order(pool.size());
    for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(grads[a]) > std::abs(grads[b]);
    });
    std::size_t limit =
        std::min<std::size_t>(order.size(),
                              static_cast<std::size_t>(hp.num_precise_gradient));
    IterationResult res;
    res.energy = eig.energy;
    for (std::size_t c = 0; c < limit; ++c) {
      std::size_t j = order[c];
      if (!ignored[j]) {
        res.op_index = j;
        res.found_op = true;
        break;
      }
    }
    // Fall back to the whole pool when every candidate is on the ignore
    // list; a fully exhausted pool ends the loop.
    if (!res.found_op) {
      for (std::size_t c = limit; c < order.size(); ++c) {
        std::size_t j = order[c];
        if (!ignored[j]) {
          res.op_index = j;
          res.found_op = true;
          break;
        }
      }
    }
    // A vanishing gradient means no pool operator can lower the energy to
    // first order; treat the pool as exhausted for this iteration.
    if (res.found_op && std::abs(grads[res.op_index]) < 1e-12)
      res.found_op = false;
    if (res.found_op)
      res.angle = line_search_angle(psi, pool[res.op_index], work);
    return res;
  };

  double prev_e = std::numeric_limits<double>::quiet_NaN();
  int consec = 0;
  std::uint64_t k = 0;
  while (k < iter_cap) {
    ++k;
    if (timeout_s > 0.0 && elapsed() > timeout_s) {
      est.truncated = true;
      break;
    }
    IterationResult it_res;
    try {
      it_res = attempt(hp.sampling_shots, 2 * k);
    } catch (const BudgetError&) {
      est.truncated = true;
      break;
    }

    bool repeat_or_tiny =
        it_res.found_op && (used_ever[it_res.op_index] ||
                            std::abs(it_res.angle) < hp.atol);
    if (repeat_or_tiny && !exact_mode) {
      // Refined re-sample, at most once per iteration.
      try {
        it_res = attempt(hp.sampling_shots *
                             static_cast<std::uint64_t>(
                                 hp.final_sampling_shots_coeff),
                         2 * k + 1);
      } catch (const BudgetError&) {
        est.value = std::min(est.value, it_res.energy);
        est.iterations = k;
        if (energy_trace) energy_trace->push_back(it_res.energy);
        est.truncated = true;
        break;
      }
    }

    est.value = std::min(est.value, it_res.energy);
    est.iterations = k;
    if (energy_trace) energy_trace->push_back(it_res.energy);

    if (!std::isnan(prev_e) && std::abs(it_res.energy - prev_e) < hp.atol)
      ++consec;
    else
      consec = 0;
    prev_e = it_res.energy;

    if (!it_res.found_op) break;  // pool exhausted

    ansatz.gates.push_back({pool[it_res.op_index], it_res.angle});
    psi = apply_pauli_rotation(std::move(psi), pool[it_res.op_index],
                               it_res.angle);
    used_ever[it_res.op_index] = true;
    ignored[it_res.op_index] = true;
    if (hp.reset_ignored_inx_mode > 0 &&
        k % static_cast<std::uint64_t>(hp.reset_ignored_inx_mode) == 0)
      std::fill(ignored.begin(), ignored.end(), false);

    if (consec >= hp.max_num_converged) break;
  }

  est.shots_used = budget.used() - used0;
  est.wall_time_s = elapsed();
  return est;
}

}  // namespace qetune
