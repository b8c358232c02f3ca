#pragma once
//! \file memory.hpp
//! \brief Memory kernel, Poisson reconstruction of the shear jump, Bondi
//! mass loss, and the test-mass displacement map.
//!
//! Kernel:   F = int (|Xi|^2 + 1/2 |A_F|^2) du
//! Shear:    div(Sigma^+ - Sigma^-) = grad Phi,  lap Phi = F - mean(F),  mean(Phi) = 0
//! Mass:     dM/du = 1/(8 pi) * oint (|Xi|^2 + 1/2 |A_F|^2) dmu
//!
//! The mass-loss rate keeps the sign exactly as written above (non-negative
//! in u). Geometric units throughout; see kErgPerCm for conversion.

#include <array>
#include <vector>

#include "emmemory/sphere.hpp"
#include "emmemory/waveform.hpp"

namespace emm {

// c^4 / G in erg per cm of geometric mass.
inline constexpr double kSpeedOfLight = 2.99792458e10;  // cm/s
inline constexpr double kNewtonG = 6.67430e-8;         // cm^3 g^-1 s^-2
inline constexpr double kErgPerCm =
    kSpeedOfLight * kSpeedOfLight * kSpeedOfLight * kSpeedOfLight / kNewtonG;

inline constexpr double kReconstructionTolerance = 1e-6;
inline constexpr double kDisplacementRatioWarning = 1e-3;

struct MemoryResult {
  ScalarField F;
  double F_bar = 0.0;
  ScalarField Phi;
  StfTensorField delta_sigma;
  // l = 1 coefficients of F, ordered m = -1, 0, 1. They cannot source an
  // STF tensor and are excluded from delta_sigma.
  std::array<double, 3> dropped_l1{};
  double energy_radiated = 0.0;  // mean(F) / 2, cm
  double residual = 0.0;         // relative L2 residual of the divergence equation
};

// `af` may be null (vacuum kernel).
ScalarField compute_kernel(const TensorTrain& xi, const VectorTrain* af = nullptr);

// Electric-parity reconstruction with zero magnetic part.
MemoryResult solve_memory(const ScalarField& F);

// ||div(delta_sigma) - grad Phi_{l>=2}|| / ||grad Phi_{l>=2}||, or the
// absolute norm when the right-hand side vanishes.
double reconstruction_residual(const StfTensorField& delta_sigma, const ScalarField& phi);

double mass_loss_rate(const StfTensorField& xi, const TangentVectorField* af = nullptr);
std::vector<double> mass_loss_history(const TensorTrain& xi, const VectorTrain* af = nullptr);
// Trapezoid u-integral of mass_loss_rate.
double total_mass_change(const TensorTrain& xi, const VectorTrain* af = nullptr);

// Delta x^A_(B) = -(d0 / r) (Sigma^+ - Sigma^-)_AB.
StfTensorField displacement_map(const StfTensorField& delta_sigma, double d0, double r);
inline bool displacement_ratio_large(double d0, double r) { return d0 / r > kDisplacementRatioWarning; }

}  // namespace emm
