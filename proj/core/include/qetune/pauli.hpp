#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>

namespace qetune {

enum class Pauli : std::uint8_t { X, Y, Z };

char pauli_char(Pauli p);

/// Tensor product of single-qubit Pauli operators, stored sparsely as an
/// ordered map qubit index -> operator. Qubits absent from the map act as
/// identity; an empty map is the identity operator.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::map<int, Pauli> ops) : ops_(std::move(ops)) {}

  static PauliString single(Pauli p, int qubit) {
    return PauliString({{qubit, p}});
  }
  static PauliString two(Pauli p0, int q0, Pauli p1, int q1) {
    return PauliString({{q0, p0}, {q1, p1}});
  }

  const std::map<int, Pauli>& ops() const noexcept { return ops_; }
  bool is_identity() const noexcept { return ops_.empty(); }

  /// Largest qubit index acted on, or -1 for the identity.
  int max_qubit() const noexcept {
    return ops_.empty() ? -1 : ops_.rbegin()->first;
  }

  /// Text form, e.g. "X0 Z3"; identity renders as "I".
  std::string str() const;

  // Ordering over the (qubit, op) pair sequence; this is the deterministic
  // tie-break order used by compression.
  auto operator<=>(const PauliString&) const = default;

 private:
  std::map<int, Pauli> ops_;
};

}  // namespace qetune
