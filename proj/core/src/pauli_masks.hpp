#pragma once

#include <bit>
#include <complex>
#include <cstdint>

#include "qetune/pauli.hpp"

namespace qetune::detail {

// Bit-mask form of a Pauli string: P|i> = phase(i) |i ^ flip> with
// phase(i) = i^{y_count} * (-1)^{popcount(i & sign)}.
struct TermMasks {
  std::uint64_t flip = 0;  // X and Y qubits
  std::uint64_t sign = 0;  // Y and Z qubits
  int y_count = 0;
};

inline TermMasks masks_of(const PauliString& p) {
  TermMasks m;
  for (const auto& [q, op] : p.ops()) {
    std::uint64_t bit = 1ull << q;
    switch (op) {
      case Pauli::X: m.flip |= bit; break;
      case Pauli::Y: m.flip |= bit; m.sign |= bit; ++m.y_count; break;
      case Pauli::Z: m.sign |= bit; break;
    }
  }
  return m;
}

inline std::complex<double> pauli_phase(const TermMasks& m,
                                        std::uint64_t col) {
  constexpr std::complex<double> i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  std::complex<double> ph = i_pow[m.y_count & 3];
  if (std::popcount(col & m.sign) & 1) ph = -ph;
  return ph;
}

}  // namespace qetune::detail
