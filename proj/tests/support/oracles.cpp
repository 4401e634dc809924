#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace testsupport {

namespace {

using qetune::Pauli;

// 2x2 factors indexed [row][col]
const Cd kId[2][2] = {{1, 0}, {0, 1}};
const Cd kX[2][2] = {{0, 1}, {1, 0}};
const Cd kY[2][2] = {{0, Cd(0, -1)}, {Cd(0, 1), 0}};
const Cd kZ[2][2] = {{1, 0}, {0, -1}};

const Cd (*factor(const qetune::PauliString& s, int q))[2] {
  auto it = s.ops().find(q);
  if (it == s.ops().end()) return kId;
  switch (it->second) {
    case Pauli::X: return kX;
    case Pauli::Y: return kY;
    default: return kZ;
  }
}

}  // namespace

Matrix dense_matrix(const qetune::PauliHamiltonian& h) {
  const std::size_t dim = 1ull << h.n_qubits();
  Matrix m(dim, std::vector<Cd>(dim, Cd(0, 0)));
  for (const auto& term : h.terms()) {
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        Cd elem = term.coeff;
        for (int q = 0; q < h.n_qubits() && elem != Cd(0, 0); ++q) {
          int bi = (i >> q) & 1, bj = (j >> q) & 1;
          elem *= factor(term.string, q)[bi][bj];
        }
        m[i][j] += elem;
      }
    }
  }
  return m;
}

Eig jacobi_eig(Matrix a) {
  const std::size_t n = a.size();
  Matrix v(n, std::vector<Cd>(n, Cd(0, 0)));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) s += std::norm(a[p][q]);
    return std::sqrt(s);
  };
  double scale = 0.0;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) scale += std::norm(a[p][q]);
  scale = std::sqrt(scale);
  const double tol = std::max(1e-300, 1e-14 * scale);

  int sweep = 0;
  for (; sweep < 100 && off_norm() > tol; ++sweep) {
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        Cd apq = a[p][q];
        double mag = std::abs(apq);
        if (mag < 1e-300) continue;
        // Unitary 2x2 rotation zeroing a[p][q]: phases absorb arg(apq),
        // the angle is the classic symmetric Jacobi choice.
        double app = a[p][p].real(), aqq = a[q][q].real();
        double tau = (aqq - app) / (2.0 * mag);
        double t = (tau >= 0 ? 1.0 : -1.0) /
                   (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        Cd phase = apq / mag;  // e^{ i arg }
        // Columns: [p q] <- [p q] * [[c, s*phase],[-s*conj(phase), c]]
        for (std::size_t r = 0; r < n; ++r) {
          Cd arp = a[r][p], arq = a[r][q];
          a[r][p] = c * arp - s * std::conj(phase) * arq;
          a[r][q] = s * phase * arp + c * arq;
        }
        for (std::size_t col = 0; col < n; ++col) {
          Cd apc = a[p][col], aqc = a[q][col];
          a[p][col] = c * apc - s * phase * aqc;
          a[q][col] = s * std::conj(phase) * apc + c * aqc;
        }
        for (std::size_t r = 0; r < n; ++r) {
          Cd vrp = v[r][p], vrq = v[r][q];
          v[r][p] = c * vrp - s * std::conj(phase) * vrq;
          v[r][q] = s * phase * vrp + c * vrq;
        }
      }
    }
  }

  if (off_norm() > tol)
    throw std::runtime_error("jacobi_eig failed to converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a[x][x].real() < a[y][y].real();
  });
  Eig out;
  out.values.reserve(n);
  out.vectors.reserve(n);
  for (std::size_t k : order) {
    out.values.push_back(a[k][k].real());
    std::vector<Cd> col(n);
    for (std::size_t r = 0; r < n; ++r) col[r] = v[r][k];
    out.vectors.push_back(std::move(col));
  }
  return out;
}

double ground_energy(const qetune::PauliHamiltonian& h) {
  return jacobi_eig(dense_matrix(h)).values.front();
}

std::vector<Cd> evolve_exact(const qetune::PauliHamiltonian& h,
                             const std::vector<Cd>& psi, double t) {
  Eig eig = jacobi_eig(dense_matrix(h));
  const std::size_t n = psi.size();
  if (eig.values.size() != n) throw std::invalid_argument("dimension mismatch");
  std::vector<Cd> out(n, Cd(0, 0));
  for (std::size_t k = 0; k < n; ++k) {
    Cd amp(0, 0);
    for (std::size_t r = 0; r < n; ++r)
      amp += std::conj(eig.vectors[k][r]) * psi[r];
    Cd rot = std::polar(1.0, -eig.values[k] * t) * amp;
    for (std::size_t r = 0; r < n; ++r) out[r] += rot * eig.vectors[k][r];
  }
  return out;
}

}  // namespace testsupport
