#pragma once

#include <cstdint>

namespace qetune {

/// Output of a solver run: the energy plus run accounting.
struct EnergyEstimate {
  double value = 0.0;
  std::uint64_t shots_used = 0;
  std::uint64_t iterations = 0;
  double wall_time_s = 0.0;
  bool truncated = false;   // stopped early (budget or timeout)
  bool degenerate = false;  // fit fell back to the reference-state energy
};

}  // namespace qetune
