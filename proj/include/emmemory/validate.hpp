#pragma once
//! \file validate.hpp
//! \brief Self-check suite over the library invariants, run by `emm validate`.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "emmemory/sphere.hpp"
#include "emmemory/waveform.hpp"

namespace emm {

struct CheckResult {
  std::string name;
  double value;      // measured error or residual
  double tolerance;  // pass iff value < tolerance (or <= for exact checks)
  bool passed;
  bool residual;     // numerical residual (true) or structural invariant (false)
};

std::vector<CheckResult> run_invariant_suite(int l_max, std::uint64_t seed);

// Seeded generators shared by the suite and the CLI.
ScalarCoeffs random_scalar_coeffs(int l_max, std::mt19937_64& rng);
TensorCoeffs random_tensor_coeffs(int l_max, std::mt19937_64& rng);
std::vector<PulseSpec> random_pulses(int count, int l_max, int l_min, const UGrid& u, std::mt19937_64& rng);

}  // namespace emm
