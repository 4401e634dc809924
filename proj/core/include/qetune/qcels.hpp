#pragma once

#include <complex>
#include <span>
#include <vector>

#include "qetune/estimate.hpp"
#include "qetune/hamiltonian.hpp"
#include "qetune/statevector.hpp"

namespace qetune {

/// Tunables of the complex-exponential least-squares solver, in canonical
/// (feature-vector) order.
struct QcelsHyperparams {
  double delta_t = 0.03;    // time step between fit points
  int n_z = 10;             // number of fit points (incl. t = 0)
  int ham_terms = 200;      // largest-|coeff| terms kept for evolution
  double ham_cutoff = 1e-9; // coefficient floor for truncation
  double alpha = 0.8;       // correction-constraint scale in (0, 1]
};

std::vector<double> to_vector(const QcelsHyperparams& hp);
QcelsHyperparams qcels_from_vector(std::span<const double> v);

/// One stage of the sequential exponential fit. Stage s carries s
/// amplitude/frequency pairs; the final stage-3 model is
///   r1 e^{-i th1 t} + r2 e^{-i th2 t} + (1 - r1 - r2) e^{-i th3 t}
/// (stages 1 and 2 replace the trailing factor by the constant remainder,
/// so f(0) = 1 exactly).
struct FitResult {
  int stage = 1;
  std::vector<double> amplitudes;   // r_k, in [0, 1], r1 + r2 <= 1
  std::vector<double> frequencies;  // theta_k (energy units)
  double residual = 0.0;            // sum of squared complex deviations
  bool degenerate = false;          // constant input series
};

/// Single-frequency fit of r1 e^{-i th1 t} + (1 - r1) to the series.
/// Times must be uniformly spaced with ts[0] = 0; th1 is searched over the
/// Nyquist window [-pi/dt, pi/dt] and r1 is the constrained
/// linear-least-squares amplitude. A constant series returns the
/// degenerate flag with r1 = 0, th1 = 0.
FitResult fit_single(std::span<const std::complex<double>> zs,
                     std::span<const double> ts);

struct SequentialFit {
  FitResult stage1, stage2, stage3;
};

/// The full 1 -> 2 -> 3 frequency cascade. Each stage is seeded by the
/// previous one and never increases the residual (the seed is kept when
/// refinement fails to improve). Correction frequencies are bounded by
/// alpha * |th1 of stage 1| and the second amplitude by r1 of stage 1.
SequentialFit fit_stages(std::span<const std::complex<double>> zs,
                         std::span<const double> ts, double alpha);

/// Stage-3 result of fit_stages.
FitResult fit_sequential(std::span<const std::complex<double>> zs,
                         std::span<const double> ts, double alpha);

/// End-to-end solve: truncate the Hamiltonian, build the reference state,
/// collect the Z series (exact or shot-sampled), run the sequential fit and
/// report the dominant stage-3 frequency as the energy. A degenerate series
/// falls back to the reference-state diagonal energy with the degenerate
/// flag set. A single bounded pass; unlike the adaptive solver there is no
/// iteration loop to time out.
EnergyEstimate qcels_solve(const PauliHamiltonian& h,
                           const QcelsHyperparams& hp, ShotBudget& budget,
                           bool exact_mode, std::uint64_t rng_seed);

}  // namespace qetune
