#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qetune/hamiltonian.hpp"

namespace qetune {

/// Coefficient floor used when compressing Hamiltonians for the feature
/// encoding (independent of the solvers' own truncation).
inline constexpr double kFeatureCutoff = 0.05;

/// Fixed-length feature vector
///   [ hyperparams (canonical order) | n_qubits | top-K |coeff| slots ],
/// zero-padded to exactly hp.size() + 1 + k_slots entries. Booleans encode
/// as 0/1 in the hyperparameter block.
std::vector<double> encode_features(const PauliHamiltonian& h,
                                    std::span<const double> hyperparams,
                                    int k_slots,
                                    double ml_cutoff = kFeatureCutoff);

struct TrainingRecord {
  std::string system;     // source-system tag
  std::vector<double> x;  // feature vector
  double y = 0.0;         // energy found by the solver run
};

/// On-disk dataset: a header naming the solver and layout, then one record
/// per line (tag, X..., Y).
struct Dataset {
  std::string solver;
  int n_hyper = 0;
  int k_slots = 0;
  std::vector<TrainingRecord> records;

  int feature_length() const noexcept { return n_hyper + 1 + k_slots; }
};

void write_dataset_header(std::ostream& out, const Dataset& d);
void write_record(std::ostream& out, const TrainingRecord& r);

void save_dataset(const Dataset& d, const std::filesystem::path& file);
Dataset load_dataset(const std::filesystem::path& file);

}  // namespace qetune
