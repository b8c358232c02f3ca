#include "emmemory/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "emmemory/errors.hpp"

namespace emm {

void DetectorConfig::validate() const {
  if (!(d0 > 0.0)) throw std::invalid_argument("detector arm length d0 must be positive");
  if (!(r > 0.0)) throw std::invalid_argument("source distance r must be positive");
  if (!std::isfinite(theta) || !std::isfinite(phi)) throw std::invalid_argument("direction must be finite");
}

TidalAcceleration tidal_acceleration(const NullFieldAmplitudes& amp, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("tidal_acceleration: r must be positive");
  TidalAcceleration out{};
  out.weyl = to_matrix({-0.25 * amp.aw[0] / r, -0.25 * amp.aw[1] / r});

  const double scale = amp.reference_radius / r;
  const double alpha_bar2 = (amp.af[0] * amp.af[0] + amp.af[1] * amp.af[1]) / (r * r);
  const double rho = amp.rho * std::pow(scale, NullFieldAmplitudes::kRhoDecay);
  const double sigma = amp.sigma * std::pow(scale, NullFieldAmplitudes::kSigmaDecay);
  const double alpha = amp.alpha * std::pow(scale, NullFieldAmplitudes::kAlphaDecay);
  out.em = 0.5 * (alpha_bar2 + alpha * alpha) + rho * rho + sigma * sigma;
  return out;
}

namespace {

// Lagrange interpolation of samples y[start..start+count) at fractional index x.
Stf2 lagrange(std::span<const Stf2> y, int start, int count, double x) {
  Stf2 v{0.0, 0.0};
  for (int a = start; a < start + count; ++a) {
    double w = 1.0;
    for (int b = start; b < start + count; ++b)
      if (b != a) w *= (x - b) / static_cast<double>(a - b);
    v[0] += w * y[a][0];
    v[1] += w * y[a][1];
  }
  return v;
}

Stf2 midpoint(std::span<const Stf2> y, int k) {
  const int n = static_cast<int>(y.size());
  const int count = std::min(n, 4);
  const int start = std::clamp(k - 1, 0, n - count);
  return lagrange(y, start, count, k + 0.5);
}

}  // namespace

Trajectory integrate_jacobi(std::span<const Stf2> aw, const UGrid& t, const DetectorConfig& cfg) {
  if (aw.empty()) throw std::invalid_argument("integrate_jacobi: empty A_W series");
  if (static_cast<int>(aw.size()) != t.n) throw std::invalid_argument("integrate_jacobi: series/time grid mismatch");
  t.validate();
  cfg.validate();

  const int n = t.n;
  const double h = t.du;
  const double gain = -0.25 * cfg.d0 / cfg.r;
  auto accel = [&](const Stf2& a) { return to_matrix({gain * a[0], gain * a[1]}); };

  Trajectory traj;
  traj.t.resize(n);
  traj.position.resize(n);
  traj.velocity.resize(n);
  traj.vertical_position.assign(n, {0.0, 0.0});
  traj.vertical_velocity.assign(n, {0.0, 0.0});
  for (int k = 0; k < n; ++k) traj.t[k] = t.at(k);

  // Integrate the offset from the rest position; adding d0 only on output
  // keeps the tiny displacement free of rounding against the arm length.
  const ArmMatrix x0{cfg.d0, 0.0, 0.0, cfg.d0};
  ArmMatrix x{0.0, 0.0, 0.0, 0.0};
  ArmMatrix v{0.0, 0.0, 0.0, 0.0};
  traj.displacement.resize(n);
  traj.displacement[0] = x;
  traj.position[0] = x0;
  traj.velocity[0] = v;
  for (int k = 0; k + 1 < n; ++k) {
    const ArmMatrix a0 = accel(aw[k]);
    const ArmMatrix am = accel(midpoint(aw, k));
    const ArmMatrix a1 = accel(aw[k + 1]);
    // RK4 stages for (x, v)' = (v, a(t)):
    //   k1 = (v, a0), k2 = (v + h/2 a0, am), k3 = (v + h/2 am, am), k4 = (v + h am, a1)
    for (int q = 0; q < 4; ++q) {
      const double kx1 = v[q];
      const double kx2 = v[q] + 0.5 * h * a0[q];
      const double kx3 = v[q] + 0.5 * h * am[q];
      const double kx4 = v[q] + h * am[q];
      x[q] += h / 6.0 * (kx1 + 2.0 * kx2 + 2.0 * kx3 + kx4);
      v[q] += h / 6.0 * (a0[q] + 4.0 * am[q] + a1[q]);
    }
    traj.displacement[k + 1] = x;
    for (int q = 0; q < 4; ++q) traj.position[k + 1][q] = x0[q] + x[q];
    traj.velocity[k + 1] = v;
  }
  return traj;
}

double return_to_rest_residual(const Trajectory& traj) {
  double peak = 0.0;
  for (const auto& v : traj.velocity)
    for (double c : v) peak = std::max(peak, std::abs(c));
  if (peak == 0.0) return 0.0;
  double last = 0.0;
  for (double c : traj.velocity.back()) last = std::max(last, std::abs(c));
  return last / peak;
}

ArmMatrix permanent_displacement(const Trajectory& traj, const DetectorConfig& cfg) {
  cfg.validate();
  if (traj.position.empty()) throw std::invalid_argument("permanent_displacement: empty trajectory");
  const double residual = return_to_rest_residual(traj);
  if (residual >= kReturnToRestTolerance) {
    throw InvariantError("test masses did not return to rest (residual " + std::to_string(residual) + ")");
  }
  return traj.displacement.back();
}

OrderReport em_subleading_report(const NullFieldAmplitudes& amp, std::span<const double> radii) {
  if (radii.size() < 2) throw std::invalid_argument("em_subleading_report needs at least two radii");
  OrderReport report;
  for (double r : radii) {
    const TidalAcceleration acc = tidal_acceleration(amp, r);
    const double w = frobenius(acc.weyl);
    const double ratio = w > 0.0 ? acc.em / w : std::numeric_limits<double>::infinity();
    report.rows.push_back({r, w, acc.em, ratio});
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  bool defined = true;
  for (const auto& row : report.rows) {
    if (!(row.ratio > 0.0) || !std::isfinite(row.ratio)) defined = false;
  }
  if (!defined) {
    report.slope = std::numeric_limits<double>::quiet_NaN();
    return report;
  }
  const double n = static_cast<double>(report.rows.size());
  for (const auto& row : report.rows) {
    const double x = std::log(row.r), y = std::log(row.ratio);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  report.slope = denom != 0.0 ? (n * sxy - sx * sy) / denom : std::numeric_limits<double>::quiet_NaN();
  return report;
}

}  // namespace emm
