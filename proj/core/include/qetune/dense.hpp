#pragma once

#include <Eigen/Core>

#include "qetune/hamiltonian.hpp"

namespace qetune {

/// Full 2^n x 2^n matrix of the Hamiltonian. Hermitian to 1e-12 elementwise.
/// Throws CapacityError above kMaxDenseQubits.
Eigen::MatrixXcd to_dense_matrix(const PauliHamiltonian& h);

struct GroundState {
  double energy = 0.0;
  Eigen::VectorXcd eigenvector;  // unit norm
};

/// Minimal eigenpair of the dense Hamiltonian. The classical oracle for
/// small systems; same capacity limit as to_dense_matrix.
GroundState exact_ground_state(const PauliHamiltonian& h);

}  // namespace qetune
