#include "qetune/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pauli_masks.hpp"
#include "qetune/errors.hpp"
#include "qetune/rng.hpp"

namespace qetune {

Statevector::Statevector(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits <= 0) throw std::invalid_argument("n_qubits must be positive");
  if (n_qubits > kMaxDenseQubits)
    throw CapacityError("statevector limited to " +
                        std::to_string(kMaxDenseQubits) + " qubits");
  amps_.assign(1ull << n_qubits, {0.0, 0.0});
  amps_[0] = {1.0, 0.0};
}

Statevector Statevector::basis_state(int n_qubits, std::uint64_t index) {
  Statevector s(n_qubits);
  if (index >= s.dim()) throw std::invalid_argument("basis index out of range");
  s.amps_[0] = {0.0, 0.0};
  s.amps_[index] = {1.0, 0.0};
  return s;
}

double Statevector::norm() const {
  double sq = 0.0;
  for (const auto& a : amps_) sq += std::norm(a);
  return std::sqrt(sq);
}

void Statevector::normalize() {
  double n = norm();
  if (n == 0.0) throw std::runtime_error("cannot normalize zero state");
  for (auto& a : amps_) a /= n;
}

void ShotBudget::charge(std::uint64_t shots) {
  if (shots > remaining())
    throw BudgetError("shot budget exhausted: need " + std::to_string(shots) +
                      ", have " + std::to_string(remaining()) + " of " +
                      std::to_string(cap_));
  used_ += shots;
}

std::string format_bitstring(std::uint64_t index, int n_qubits) {
  std::string s(n_qubits, '0');
  for (int q = 0; q < n_qubits; ++q)
    if (index & (1ull << q)) s[n_qubits - 1 - q] = '1';
  return s;
}

double diagonal_expectation(const PauliHamiltonian& h, std::uint64_t index) {
  double e = 0.0;
  for (const auto& t : h.terms()) {
    detail::TermMasks m = detail::masks_of(t.string);
    if (m.flip != 0) continue;  // X/Y terms are off-diagonal
    e += (std::popcount(index & m.sign) & 1) ? -t.coeff : t.coeff;
  }
  return e;
}

Statevector hartree_fock_reference(const PauliHamiltonian& h) {
  if (h.n_qubits() > kMaxDenseQubits)
    throw CapacityError("hartree_fock_reference limited to " +
                        std::to_string(kMaxDenseQubits) + " qubits");
  const std::uint64_t dim = 1ull << h.n_qubits();
  std::uint64_t best = 0;
  double best_e = diagonal_expectation(h, 0);
  for (std::uint64_t x = 1; x < dim; ++x) {
    double e = diagonal_expectation(h, x);
    if (e < best_e) {
      best_e = e;
      best = x;
    }
  }
  return Statevector::basis_state(h.n_qubits(), best);
}

Statevector apply_pauli(const Statevector& s, const PauliString& p) {
  detail::TermMasks m = detail::masks_of(p);
  Statevector out(s.n_qubits());
  out.amp(0) = {0.0, 0.0};
  for (std::uint64_t i = 0; i < s.dim(); ++i)
    out.amp(i ^ m.flip) = detail::pauli_phase(m, i) * s.amp(i);
  return out;
}

Statevector apply_hamiltonian(const Statevector& s, const PauliHamiltonian& h) {
  Statevector out(s.n_qubits());
  out.amp(0) = {0.0, 0.0};
  for (const auto& t : h.terms()) {
    detail::TermMasks m = detail::masks_of(t.string);
    for (std::uint64_t i = 0; i < s.dim(); ++i)
      out.amp(i ^ m.flip) += t.coeff * detail::pauli_phase(m, i) * s.amp(i);
  }
  return out;
}

std::complex<double> inner_product(const Statevector& a,
                                   const Statevector& b) {
  std::complex<double> z = 0.0;
  for (std::uint64_t i = 0; i < a.dim(); ++i)
    z += std::conj(a.amp(i)) * b.amp(i);
  return z;
}

double expectation_value(const Statevector& s, const PauliHamiltonian& h) {
  std::complex<double> e = 0.0;
  for (const auto& t : h.terms()) {
    detail::TermMasks m = detail::masks_of(t.string);
    std::complex<double> term = 0.0;
    for (std::uint64_t i = 0; i < s.dim(); ++i)
      term += std::conj(s.amp(i ^ m.flip)) * detail::pauli_phase(m, i) *
              s.amp(i);
    e += t.coeff * term;
  }
  return e.real();
}

Statevector apply_pauli_rotation(Statevector s, const PauliString& p,
                                 double angle) {
  detail::TermMasks m = detail::masks_of(p);
  const std::complex<double> c = {std::cos(angle), 0.0};
  const std::complex<double> mis = {0.0, -std::sin(angle)};
  if (m.flip == 0) {
    // Z-only string: diagonal, amp <- (cos - i sin * (+-1)) amp
    for (std::uint64_t i = 0; i < s.dim(); ++i)
      s.amp(i) *= c + mis * detail::pauli_phase(m, i);
    return s;
  }
  for (std::uint64_t i = 0; i < s.dim(); ++i) {
    std::uint64_t j = i ^ m.flip;
    if (j < i) continue;  // process each pair once
    std::complex<double> ai = s.amp(i), aj = s.amp(j);
    std::complex<double> ph_i = detail::pauli_phase(m, i);
    std::complex<double> ph_j = detail::pauli_phase(m, j);
    s.amp(i) = c * ai + mis * ph_j * aj;  // (P s)_i = phase(j) s_j
    s.amp(j) = c * aj + mis * ph_i * ai;
  }
  return s;
}

int default_trotter_steps(double t, double granule) {
  double at = std::abs(t);
  if (at == 0.0) return 1;
  return std::max(1, static_cast<int>(std::ceil(at / granule)));
}

Statevector trotter_evolve(Statevector s, const PauliHamiltonian& h, double t,
                           int n_steps) {
  if (n_steps <= 0) throw std::invalid_argument("n_steps must be positive");
  const double dt = t / n_steps;
  for (int step = 0; step < n_steps; ++step)
    for (const auto& term : h.terms())
      s = apply_pauli_rotation(std::move(s), term.string, term.coeff * dt);
  return s;
}

std::vector<std::complex<double>> expectation_series(
    const Statevector& ref, const PauliHamiltonian& h, double delta_t,
    int n_points, std::uint64_t shots_per_point, ShotBudget& budget,
    std::uint64_t rng_seed, double trotter_granule) {
  if (n_points < 2) throw std::invalid_argument("need at least 2 points");
  std::vector<std::complex<double>> zs;
  zs.reserve(n_points);
  zs.emplace_back(1.0, 0.0);  // U(0) = I, pinned exactly

  const bool sampled = shots_per_point > 0;
  if (sampled)
    budget.charge(2 * shots_per_point *
                  static_cast<std::uint64_t>(n_points - 1));
  std::mt19937_64 rng(rng_seed);

  // Evolve incrementally: the state at t_n extends the state at t_{n-1} by
  // one delta_t slice, so each Z_n accumulates n * steps_per_slice Trotter
  // steps.
  const int steps = default_trotter_steps(delta_t, trotter_granule);
  Statevector state = ref;
  for (int n = 1; n < n_points; ++n) {
    state = trotter_evolve(std::move(state), h, delta_t, steps);
    std::complex<double> z = inner_product(ref, state);
    if (!sampled) {
      zs.push_back(z);
      continue;
    }
    // Simulated Hadamard test: sample the two branch distributions with
    // Pr(0) = (1 + Re z)/2 and (1 + Im z)/2 respectively.
    auto estimate = [&](double part) {
      double p0 = std::clamp((1.0 + part) / 2.0, 0.0, 1.0);
      std::uint64_t zeros = 0;
      for (std::uint64_t k = 0; k < shots_per_point; ++k)
        if (uniform01(rng) < p0) ++zeros;
      return 2.0 * static_cast<double>(zeros) /
                 static_cast<double>(shots_per_point) -
             1.0;
    };
    double re = estimate(z.real());
    double im = estimate(z.imag());
    zs.emplace_back(re, im);
  }
  return zs;
}

std::map<std::uint64_t, std::uint64_t> sample_bitstrings(
    const Statevector& s, std::uint64_t shots, ShotBudget& budget,
    std::uint64_t rng_seed) {
  if (shots == 0) throw std::invalid_argument("shots must be positive");
  budget.charge(shots);
  std::vector<double> cdf(s.dim());
  double acc = 0.0;
  for (std::uint64_t i = 0; i < s.dim(); ++i) {
    acc += std::norm(s.amp(i));
    cdf[i] = acc;
  }
  const double total = acc;
  std::mt19937_64 rng(rng_seed);
  std::map<std::uint64_t, std::uint64_t> counts;
  for (std::uint64_t k = 0; k < shots; ++k) {
    double u = uniform01(rng) * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::uint64_t idx = it == cdf.end() ? s.dim() - 1
                                        : static_cast<std::uint64_t>(
                                              it - cdf.begin());
    ++counts[idx];
  }
  return counts;
}

std::vector<std::pair<std::uint64_t, double>> exact_distribution(
    const Statevector& s) {
  std::vector<std::pair<std::uint64_t, double>> probs;
  for (std::uint64_t i = 0; i < s.dim(); ++i) {
    double p = std::norm(s.amp(i));
    if (p > 0.0) probs.emplace_back(i, p);
  }
  std::stable_sort(probs.begin(), probs.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return probs;
}

}  // namespace qetune
