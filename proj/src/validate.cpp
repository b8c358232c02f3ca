#include "emmemory/validate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "emmemory/bns.hpp"
#include "emmemory/detector.hpp"
#include "emmemory/memory.hpp"

namespace emm {

ScalarCoeffs random_scalar_coeffs(int l_max, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ScalarCoeffs c(l_max);
  for (double& v : c.values()) v = normal(rng);
  return c;
}

TensorCoeffs random_tensor_coeffs(int l_max, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  TensorCoeffs c(l_max);
  for (int l = 2; l <= l_max; ++l)
    for (int m = -l; m <= l; ++m) {
      c.electric(l, m) = normal(rng);
      c.magnetic(l, m) = normal(rng);
    }
  return c;
}

std::vector<PulseSpec> random_pulses(int count, int l_max, int l_min, const UGrid& u, std::mt19937_64& rng) {
  const double span = u.back() - u.u0;
  const double mid = 0.5 * (u.u0 + u.back());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<PulseSpec> out;
  for (int p = 0; p < count; ++p) {
    PulseSpec s;
    s.width = span / 48.0 * (1.0 + unit(rng));
    const double room = 0.5 * span - kSupportWidths * s.width;
    s.center = mid + room * (2.0 * unit(rng) - 1.0) * 0.9;
    s.amplitude = 2.0 * unit(rng) - 1.0;
    s.l = l_min + static_cast<int>(unit(rng) * (l_max - l_min + 1));
    s.l = std::min(s.l, l_max);
    s.m = -s.l + static_cast<int>(unit(rng) * (2 * s.l + 1));
    s.m = std::clamp(s.m, -s.l, s.l);
    s.parity = unit(rng) < 0.5 ? Parity::kElectric : Parity::kMagnetic;
    out.push_back(s);
  }
  return out;
}

namespace {

template <FieldKind K>
double max_diff(const Field<K>& a, const Field<K>& b) {
  return (a - b).max_norm();
}

double rel_l2(const ScalarField& a, const ScalarField& b) {
  const ScalarField d = a - b;
  const double scale = std::sqrt(inner(b, b));
  return std::sqrt(inner(d, d)) / (scale > 0.0 ? scale : 1.0);
}

class Suite {
 public:
  void add(std::string name, double value, double tol, bool residual) {
    results.push_back({std::move(name), value, tol, std::isfinite(value) && value < tol, residual});
  }
  std::vector<CheckResult> results;
};

}  // namespace

std::vector<CheckResult> run_invariant_suite(int l_max, std::uint64_t seed) {
  Suite s;
  std::mt19937_64 rng(seed);
  const GridPtr grid = make_grid(l_max);
  const double four_pi = 4.0 * std::numbers::pi;

  {
    double wsum = 0.0;
    for (double w : grid->weights()) wsum += w;
    s.add("grid weight sum", std::abs(wsum - 2.0), 1e-12, false);
    const ScalarField one = sht_synthesize([&] {
      ScalarCoeffs c(0);
      c(0, 0) = std::sqrt(four_pi);
      return c;
    }(), grid);
    s.add("grid area", std::abs(grid->integrate(one.component(0)) - four_pi), 1e-10, false);
  }

  const ScalarCoeffs a = random_scalar_coeffs(l_max, rng);
  const ScalarField f = sht_synthesize(a, grid);
  {
    const ScalarField back = sht_synthesize(sht_analyze(f), grid);
    s.add("scalar round trip", max_diff(back, f) / f.max_norm(), 1e-9, true);
    double sum = 0.0;
    for (double v : a.values()) sum += v * v;
    s.add("scalar Parseval", std::abs(inner(f, f) - sum) / sum, 1e-9, true);
  }
  {
    const TensorCoeffs c = random_tensor_coeffs(l_max, rng);
    const StfTensorField t = tensor_synthesize(c, grid);
    const StfTensorField back = tensor_synthesize(tensor_analyze(t), grid);
    s.add("tensor round trip", max_diff(back, t) / t.max_norm(), 1e-9, true);
    s.add("tensor Parseval", std::abs(inner(t, t) - c.sum_squares()) / c.sum_squares(), 1e-9, true);

    // Electric divergences are pure gradients, magnetic ones pure curls.
    const VectorCoeffs ve = vector_analyze(divergence(tensor_basis(l_max, l_max / 2, Parity::kElectric, grid)));
    const VectorCoeffs vb = vector_analyze(divergence(tensor_basis(l_max, l_max / 2, Parity::kMagnetic, grid)));
    double leak = 0.0;
    for (double v : ve.magnetic_values()) leak = std::max(leak, std::abs(v));
    for (double v : vb.electric_values()) leak = std::max(leak, std::abs(v));
    s.add("divergence parity separation", leak, 1e-8, true);
  }
  {
    double worst = 0.0;
    for (int l = 0; l <= l_max; ++l) {
      const int m = l / 2;
      const ScalarField y = scalar_harmonic(l, m, grid);
      const ScalarField lap = laplacian(y);
      worst = std::max(worst, max_diff(lap, y * (-static_cast<double>(l) * (l + 1))) / std::max(1.0, l * (l + 1.0)));
    }
    s.add("Laplacian eigenvalues", worst, 1e-10, true);
  }
  {
    const PoissonSolution sol = solve_poisson(f);
    ScalarField rhs = f;
    for (double& v : rhs.data()) v -= sol.removed_mean;
    s.add("Poisson residual", rel_l2(laplacian(sol.phi), rhs), 1e-8, true);
  }
  {
    const ScalarField g = sht_synthesize(random_scalar_coeffs(l_max, rng), grid);
    const ScalarField lhs = laplacian(f * 2.5 + g * -0.75);
    const ScalarField rhs = laplacian(f) * 2.5 + laplacian(g) * -0.75;
    s.add("Laplacian linearity", max_diff(lhs, rhs) / rhs.max_norm(), 1e-10, true);
  }

  // Memory pipeline on kernels built from random trains with pulse degree
  // <= l_max / 2, so F stays band-limited on the grid.
  const UGrid u{-12.0, 0.1, 241};
  const int pulse_l = std::max(2, l_max / 2);
  const auto xi_specs = random_pulses(3, pulse_l, 2, u, rng);
  const auto af_specs = random_pulses(2, pulse_l, 1, u, rng);
  const TensorTrain xi = gen_xi_train(xi_specs, grid, u);
  const VectorTrain af = gen_af_train(af_specs, grid, u);
  {
    const ScalarField F = compute_kernel(xi, &af);
    const MemoryResult mr = solve_memory(F);
    double fmin = 0.0;
    for (double v : F.data()) fmin = std::min(fmin, v);
    s.add("kernel non-negative", -fmin, 1e-300, false);
    s.add("mean(Phi) zero", std::abs(mean(mr.Phi)), 1e-12, true);
    s.add("memory reconstruction residual", mr.residual, kReconstructionTolerance, true);

    const ScalarField vacuum = compute_kernel(xi, nullptr);
    ScalarField em_part = F - vacuum;
    ScalarField expected(grid);
    for (int k = 0; k < u.n; ++k) {
      const double w = (k == 0 || k + 1 == u.n) ? 0.5 * u.du : u.du;
      ScalarField sq = squared_norm(af.samples[k]);
      expected += sq * (0.5 * w);
    }
    s.add("electromagnetic kernel shift", max_diff(em_part, expected) / expected.max_norm(), 1e-12, true);

    const double dm = total_mass_change(xi, &af);
    s.add("mass change = mean(F)/2", std::abs(dm - 0.5 * mean(F)) / std::abs(dm), 1e-8, true);

    const int shift = 1 + static_cast<int>(seed % static_cast<std::uint64_t>(grid->n_phi() - 1));
    TensorTrain xi_rot = xi;
    for (auto& smp : xi_rot.samples) smp = roll_longitude(smp, shift);
    VectorTrain af_rot = af;
    for (auto& smp : af_rot.samples) smp = roll_longitude(smp, shift);
    const MemoryResult rot = solve_memory(compute_kernel(xi_rot, &af_rot));
    const double scale = std::max(mr.delta_sigma.max_norm(), 1e-300);
    const double err = std::max({max_diff(rot.F, roll_longitude(mr.F, shift)) / mr.F.max_norm(),
                                 max_diff(rot.Phi, roll_longitude(mr.Phi, shift)) / mr.Phi.max_norm(),
                                 max_diff(rot.delta_sigma, roll_longitude(mr.delta_sigma, shift)) / scale});
    s.add("rotation equivariance", err, 1e-9, true);
  }
  {
    const SigmaHistory h0 = integrate_sigma(xi);
    const StfTensorField sm = tensor_synthesize(random_tensor_coeffs(l_max, rng), grid);
    const SigmaHistory h1 = integrate_sigma(xi, sm);
    s.add("shear jump independent of Sigma^-", max_diff(h0.delta, h1.delta), 1e-300, true);
  }

  // Detector chain on a small grid and a finely sampled single pulse.
  {
    const GridPtr small = make_grid(4);
    const PulseSpec spec{1e-3, 0.0, 1.0, 2, 1, Parity::kElectric};
    const UGrid fine{-8.0, 0.002, 8001};
    const TensorTrain x = gen_xi_pulse(spec, small, fine);
    const TensorTrain aw = aw_from_xi(x);
    DetectorConfig cfg{100.0, 1e5, 1.1, 0.4};
    const auto series = sample_direction(aw, cfg.theta, cfg.phi);
    const Trajectory traj = integrate_jacobi(series, fine, cfg);
    const auto xi_dir = sample_direction(integrate_xi(aw), cfg.theta, cfg.phi);
    double verr = 0.0, vpeak = 0.0;
    for (int k = 0; k < fine.n; ++k) {
      const ArmMatrix expect = to_matrix({cfg.d0 / cfg.r * xi_dir[k][0], cfg.d0 / cfg.r * xi_dir[k][1]});
      for (int q = 0; q < 4; ++q) {
        verr = std::max(verr, std::abs(traj.velocity[k][q] - expect[q]));
        vpeak = std::max(vpeak, std::abs(expect[q]));
      }
    }
    s.add("Jacobi velocity = (d0/r) Xi", verr / vpeak, 1e-6, true);
    s.add("return to rest", return_to_rest_residual(traj), kReturnToRestTolerance, false);
    const ArmMatrix disp = permanent_displacement(traj, cfg);
    const auto delta = tensor_evaluate(tensor_analyze(displacement_map(integrate_sigma(x).delta, cfg.d0, cfg.r)),
                                       cfg.theta, cfg.phi);
    const ArmMatrix expect = to_matrix(delta);
    double derr = 0.0;
    for (int q = 0; q < 4; ++q) derr = std::max(derr, std::abs(disp[q] - expect[q]));
    s.add("permanent displacement cross-check", derr / frobenius(expect), 1e-6, true);
  }
  {
    bns::Scenario lo{2.0, 0.01, 10.0, 1e13, 1e13, 1000.0, 2.5, bns::KappaAnalytic{}};
    bns::Scenario hi = lo;
    hi.b0 = hi.dbdt = 1e15;
    s.add("magnetic energy scenario ratio", std::abs(bns::mag_energy(hi) / bns::mag_energy(lo) - 1e4) / 1e4, 1e-9,
          true);
  }
  return s.results;
}

}  // namespace emm
