#pragma once
//! \file detector.hpp
//! \brief Three-mass interferometer driven by the Jacobi equation at leading
//! order, plus the order-of-magnitude split between Weyl and electromagnetic
//! tidal terms.
//!
//! Frame convention: at sky direction (theta, phi) the detector arms E_1,
//! E_2 are aligned with the sphere frame (e_theta, e_phi); E_3 is radial.
//! Masses m_1, m_2 start at rest at x^B_(A) = d0 delta^B_A. The retarded time
//! u and the detector proper time t are identified.

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "emmemory/waveform.hpp"

namespace emm {

// Row-major 2x2 matrix; for positions, m[A * 2 + B] = x^A_(B).
using ArmMatrix = std::array<double, 4>;
// Independent components (T_11, T_12) of a symmetric trace-free 2x2 matrix.
using Stf2 = std::array<double, 2>;

inline ArmMatrix to_matrix(const Stf2& s) { return {s[0], s[1], s[1], -s[0]}; }
inline double frobenius(const ArmMatrix& m) {
  return std::sqrt(m[0] * m[0] + m[1] * m[1] + m[2] * m[2] + m[3] * m[3]);
}

inline constexpr double kReturnToRestTolerance = 1e-6;

struct DetectorConfig {
  double d0 = 1.0;  // cm
  double r = 1.0;   // cm
  double theta = 0.5 * std::numbers::pi;
  double phi = 0.0;
  void validate() const;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<ArmMatrix> position;
  std::vector<ArmMatrix> velocity;
  std::vector<ArmMatrix> displacement;  // position minus initial position
  // x^3_(A) and its rate; no vertical forcing at leading order.
  std::vector<std::array<double, 2>> vertical_position;
  std::vector<std::array<double, 2>> vertical_velocity;
};

// Null components at one direction. The em amplitudes scale as
//   alpha_bar(F) = A_F / r,  rho, sigma ~ r^-2,  alpha(F) ~ r^-3,
// with rho/sigma/alpha given at reference_radius.
struct NullFieldAmplitudes {
  Stf2 aw{0.0, 0.0};                   // A_W, 1/cm
  std::array<double, 2> af{0.0, 0.0};  // A_F, dimensionless
  double rho = 0.0;
  double sigma = 0.0;
  double alpha = 0.0;
  double reference_radius = 1.0;

  static constexpr double kAlphaBarDecay = 1.0;
  static constexpr double kRhoDecay = 2.0;
  static constexpr double kSigmaDecay = 2.0;
  static constexpr double kAlphaDecay = 3.0;
};

struct TidalAcceleration {
  ArmMatrix weyl;  // -A_W / (4 r), per unit arm length
  double em;       // R_00 = 1/2 (|alpha_bar|^2 + |alpha|^2) + rho^2 + sigma^2
};

TidalAcceleration tidal_acceleration(const NullFieldAmplitudes& amplitudes, double r);

// Classical RK4 for xdd^A_(B) = -(1/4) r^-1 d0 A_AB(t). Stage values between
// samples come from cubic Lagrange interpolation of the series.
Trajectory integrate_jacobi(std::span<const Stf2> aw_series, const UGrid& t, const DetectorConfig& cfg);

// max |v(t_end)| / max_t |v(t)|, zero for a trajectory at rest.
double return_to_rest_residual(const Trajectory& traj);

// Final minus initial positions; throws InvariantError when the masses have
// not returned to rest.
ArmMatrix permanent_displacement(const Trajectory& traj, const DetectorConfig& cfg);

struct OrderRow {
  double r;
  double weyl_norm;
  double em;
  double ratio;
};

struct OrderReport {
  std::vector<OrderRow> rows;
  double slope;  // least-squares d log(ratio) / d log(r); NaN if undefined
};

OrderReport em_subleading_report(const NullFieldAmplitudes& amplitudes, std::span<const double> radii);

}  // namespace emm
