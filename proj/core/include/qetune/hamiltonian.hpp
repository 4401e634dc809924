#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <vector>

#include "qetune/pauli.hpp"

namespace qetune {

struct PauliTerm {
  double coeff = 0.0;
  PauliString string;

  bool operator==(const PauliTerm&) const = default;
};

/// Weighted sum of Pauli strings over a fixed qubit register. Real
/// coefficients only (the operator is Hermitian by construction). Duplicate
/// strings are merged on construction and exactly-zero terms dropped; term
/// order is otherwise preserved. Immutable once built.
class PauliHamiltonian {
 public:
  /// Throws std::invalid_argument on non-positive n_qubits, out-of-range
  /// qubit indices or non-finite coefficients.
  PauliHamiltonian(int n_qubits, std::vector<PauliTerm> terms);

  int n_qubits() const noexcept { return n_qubits_; }
  const std::vector<PauliTerm>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }

  /// Term-multiset equality: same register width and same string -> coeff
  /// mapping, independent of storage order.
  bool operator==(const PauliHamiltonian& other) const;

 private:
  int n_qubits_;
  std::vector<PauliTerm> terms_;
};

inline constexpr std::size_t kUnboundedTerms =
    std::numeric_limits<std::size_t>::max();

/// Hard ceiling for dense realizations (statevectors and 2^n matrices).
inline constexpr int kMaxDenseQubits = 14;

/// Drops every term with |coeff| <= cutoff, then keeps the max_terms largest
/// by |coeff|. Output order: descending |coeff|, ties by ascending
/// PauliString. Idempotent for fixed (cutoff, max_terms).
PauliHamiltonian compress(const PauliHamiltonian& h, double cutoff,
                          std::size_t max_terms = kUnboundedTerms);

/// Reads the line-oriented Hamiltonian format:
///
///   qubits <n>
///   <coeff> <P><idx> [<P><idx> ...]
///
/// A line with only a coefficient is the identity term. Blank lines and
/// '#' comments are ignored. Throws ParseError with the offending line
/// number; indices >= n throw as well.
PauliHamiltonian parse_hamiltonian(std::istream& in);

/// Writes the same format; coefficients at 17 significant digits so the
/// round trip is exact.
void serialize_hamiltonian(const PauliHamiltonian& h, std::ostream& out);

PauliHamiltonian load_hamiltonian(const std::filesystem::path& file);
void save_hamiltonian(const PauliHamiltonian& h,
                      const std::filesystem::path& file);

}  // namespace qetune
