#include "qetune/dense.hpp"

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

#include "pauli_masks.hpp"
#include "qetune/errors.hpp"

namespace qetune {

Eigen::MatrixXcd to_dense_matrix(const PauliHamiltonian& h) {
  if (h.n_qubits() > kMaxDenseQubits)
    throw CapacityError("dense realization limited to " +
                        std::to_string(kMaxDenseQubits) + " qubits, got " +
                        std::to_string(h.n_qubits()));
  const std::uint64_t dim = 1ull << h.n_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : h.terms()) {
    detail::TermMasks tm = detail::masks_of(t.string);
    for (std::uint64_t col = 0; col < dim; ++col)
      m(col ^ tm.flip, col) += t.coeff * detail::pauli_phase(tm, col);
  }
  return m;
}

GroundState exact_ground_state(const PauliHamiltonian& h) {
  Eigen::MatrixXcd m = to_dense_matrix(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigensolver failed to converge");
  GroundState gs;
  gs.energy = solver.eigenvalues()(0);  // ascending order
  gs.eigenvector = solver.eigenvectors().col(0);
  return gs;
}

}  // namespace qetune
