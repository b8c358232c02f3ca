// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all
// pass. Tolerances are pinned here and nowhere else.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "emmemory/bns.hpp"
#include "emmemory/detector.hpp"
#include "emmemory/memory.hpp"
#include "emmemory/validate.hpp"
#include "oracles.hpp"

using namespace emm;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what, double value) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s%s=%.3g", detail.empty() ? "" : ", ", what.c_str(), value);
    detail += buf;
    if (!ok) {
      pass = false;
      detail += "(!)";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

bns::Scenario field_scenario(double b, bns::Kappa k) {
  bns::Scenario s;
  s.b0 = s.dbdt = b;
  s.merge_time_ms = 1000.0;
  s.ns_radius_km = 10.0;
  s.kappa = k;
  return s;
}

Outcome energy_figures() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  bns::Scenario g;
  g.total_mass = 2.0;
  g.radiated_fraction = 0.01;
  o.require(rel(bns::grav_energy(g), 3.56e52) < 5e-3, "grav_rel", rel(bns::grav_energy(g), 3.56e52));
  const double lo = bns::mag_energy(field_scenario(1e13, bns::KappaCalibrated{}));
  const double hi = bns::mag_energy(field_scenario(1e15, bns::KappaCalibrated{}));
  o.require(rel(lo, 4.78e49) < 5e-3, "mag13_rel", rel(lo, 4.78e49));
  o.require(rel(hi, 4.78e53) < 5e-3, "mag15_rel", rel(hi, 4.78e53));
  double worst = 0.0;
  for (const bns::Kappa& k : {bns::Kappa{bns::KappaAnalytic{}}, bns::Kappa{bns::KappaCalibrated{}}, bns::Kappa{0.9}})
    worst = std::max(worst, rel(bns::mag_energy(field_scenario(1e15, k)) / bns::mag_energy(field_scenario(1e13, k)), 1e4));
  o.require(worst < 1e-9, "ratio_rel", worst);
  const double quarter = bns::mag_energy(field_scenario(1e13, bns::KappaAnalytic{}));
  const double radial = oracle::exterior_energy_radial(1.001e16, 1e6, 2.5);
  o.require(rel(quarter, radial) < 1e-3, "quarter_vs_quadrature", rel(quarter, radial));
  o.require(rel(quarter, 2.5e49) < 5e-3, "quarter_rel_2.5e49", rel(quarter, 2.5e49));
  const double t = seconds_since(t0);
  o.require(t < 0.1, "seconds", t);
  return o;
}

Outcome spectral_core() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  double round = 0.0, poisson = 0.0, eig = 0.0;
  for (int l_max : {4, 8, 16, 32}) {
    std::mt19937_64 rng(1000 + l_max);
    const GridPtr g = make_grid(l_max);
    const ScalarField f = sht_synthesize(random_scalar_coeffs(l_max, rng), g);
    round = std::max(round, (sht_synthesize(sht_analyze(f), g) - f).max_norm() / f.max_norm());
    const StfTensorField t = tensor_synthesize(random_tensor_coeffs(l_max, rng), g);
    round = std::max(round, (tensor_synthesize(tensor_analyze(t), g) - t).max_norm() / t.max_norm());

    const PoissonSolution sol = solve_poisson(f);
    ScalarField rhs = f;
    for (double& v : rhs.data()) v -= sol.removed_mean;
    const ScalarField d = laplacian(sol.phi) - rhs;
    poisson = std::max(poisson, std::sqrt(inner(d, d) / inner(rhs, rhs)));

    for (int l = 0; l <= l_max; ++l)
      for (int m = -l; m <= l; ++m) {
        const ScalarField y = scalar_harmonic(l, m, g);
        eig = std::max(eig, (laplacian(y) - y * (-l * (l + 1.0))).max_norm() / std::max(1.0, l * (l + 1.0)));
      }
  }
  o.require(round < 1e-9, "round_trip", round);
  o.require(poisson < 1e-8, "poisson", poisson);
  o.require(eig < 1e-10, "eigen", eig);
  const double t = seconds_since(t0);
  o.require(t < 10.0, "seconds", t);
  return o;
}

struct TrainPair {
  TensorTrain xi;
  VectorTrain af;
};

TrainPair seeded_pair(const GridPtr& g, const UGrid& u, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int l = std::max(2, g->l_max() / 2);
  const auto xs = random_pulses(3, l, 2, u, rng);
  const auto as = random_pulses(2, l, 1, u, rng);
  return {gen_xi_train(xs, g, u), gen_af_train(as, g, u)};
}

Outcome memory_pipeline() {
  Outcome o;
  const GridPtr g = make_grid(12);
  const UGrid u{-12.0, 0.1, 241};
  double residual = 0.0, fmin = 0.0, phi_mean = 0.0, shift = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const TrainPair p = seeded_pair(g, u, seed);
    const ScalarField F = compute_kernel(p.xi, &p.af);
    const MemoryResult r = solve_memory(F);
    residual = std::max(residual, r.residual);
    for (double v : F.data()) fmin = std::min(fmin, v);
    phi_mean = std::max(phi_mean, std::abs(mean(r.Phi)));

    const ScalarField em = F - compute_kernel(p.xi);
    ScalarField half(g);
    for (int k = 0; k < u.n; ++k) {
      const double w = (k == 0 || k + 1 == u.n) ? 0.5 * u.du : u.du;
      half += squared_norm(p.af.samples[k]) * (0.5 * w);
    }
    shift = std::max(shift, (em - half).max_norm() / half.max_norm());
  }
  o.require(residual < 1e-6, "residual", residual);
  o.require(fmin >= 0.0, "min_F", fmin);
  o.require(phi_mean < 1e-12, "mean_Phi", phi_mean);
  o.require(shift < 1e-13, "em_shift", shift);
  return o;
}

Outcome conservation() {
  Outcome o;
  const GridPtr g = make_grid(10);
  const UGrid u{-12.0, 0.1, 241};
  double worst = 0.0;
  for (std::uint64_t seed = 101; seed <= 120; ++seed) {
    const TrainPair p = seeded_pair(g, u, seed);
    const double dm = total_mass_change(p.xi, &p.af);
    worst = std::max(worst, rel(dm, 0.5 * mean(compute_kernel(p.xi, &p.af))));
  }
  o.require(worst < 1e-8, "identity", worst);
  return o;
}

struct ChainErrors {
  double velocity = 0.0;
  double displacement = 0.0;
  double rest = 0.0;
  double cross = 0.0;
};

// Full chain on one Gaussian train, with Xi and Sigma from the u-integrals as oracles.
ChainErrors detector_chain(const PulseSpec& spec, const DetectorConfig& cfg) {
  const GridPtr g = make_grid(std::max(4, spec.l));
  const UGrid u{spec.center - 8.0 * spec.width, 0.002 * spec.width, 8001};
  const TensorTrain xi = gen_xi_pulse(spec, g, u);
  const TensorTrain aw = aw_from_xi(xi);
  const Trajectory traj = integrate_jacobi(sample_direction(aw, cfg.theta, cfg.phi), u, cfg);
  const TensorTrain xi_back = integrate_xi(aw);
  const auto xi_dir = sample_direction(xi_back, cfg.theta, cfg.phi);
  const SigmaHistory h = integrate_sigma(xi_back);
  const auto sigma_dir = sample_direction(TensorTrain{TrainKind::kXi, u, g, h.sigma}, cfg.theta, cfg.phi);
  const double gain = cfg.d0 / cfg.r;

  ChainErrors e;
  double vpeak = 0.0, xpeak = 0.0;
  for (int k = 0; k < u.n; ++k) {
    const ArmMatrix v = to_matrix({gain * xi_dir[k][0], gain * xi_dir[k][1]});
    const ArmMatrix x = to_matrix({-gain * sigma_dir[k][0], -gain * sigma_dir[k][1]});
    for (int q = 0; q < 4; ++q) {
      e.velocity = std::max(e.velocity, std::abs(traj.velocity[k][q] - v[q]));
      e.displacement = std::max(e.displacement, std::abs(traj.displacement[k][q] - x[q]));
      vpeak = std::max(vpeak, std::abs(v[q]));
      xpeak = std::max(xpeak, std::abs(x[q]));
    }
  }
  e.velocity /= vpeak;
  e.displacement /= xpeak;
  e.rest = return_to_rest_residual(traj);

  const ArmMatrix d = permanent_displacement(traj, cfg);
  const ArmMatrix m = to_matrix(
      tensor_evaluate(tensor_analyze(displacement_map(integrate_sigma(xi).delta, cfg.d0, cfg.r)), cfg.theta, cfg.phi));
  for (int q = 0; q < 4; ++q) e.cross = std::max(e.cross, std::abs(d[q] - m[q]));
  e.cross /= frobenius(m);
  return e;
}

std::vector<std::pair<PulseSpec, DetectorConfig>> chain_cases() {
  return {
      {{1e-3, 0.0, 1.0, 2, 1, Parity::kElectric}, {100.0, 1e5, 1.1, 0.4}},
      {{-2e-3, 0.5, 0.7, 3, -2, Parity::kMagnetic}, {4e5, 1e22, 0.6, 2.9}},
      {{5e-4, -1.0, 1.4, 4, 0, Parity::kElectric}, {1.0, 1e3, 2.2, 5.1}},
  };
}

// Convergence order of the integrator: max position error over time against
// the closed-form solution for an exactly sampled Gaussian A_W.
double integrator_order() {
  const DetectorConfig cfg{1.0, 1.0, 1.0, 0.0};
  const Stf2 c{0.6, -0.8};
  std::vector<double> err;
  for (double h : {0.2, 0.1, 0.05}) {
    const UGrid u{-8.0, h, static_cast<int>(std::lround(16.0 / h)) + 1};
    std::vector<Stf2> aw(u.n);
    for (int k = 0; k < u.n; ++k) {
      const double a = 4.0 * u.at(k) * oracle::gaussian(u.at(k), 0.0, 1.0);
      aw[k] = {a * c[0], a * c[1]};
    }
    const Trajectory t = integrate_jacobi(aw, u, cfg);
    double e = 0.0;
    for (int k = 0; k < u.n; ++k) {
      const double x = oracle::gaussian_cumulative(u.at(k), 0.0, 1.0);
      const ArmMatrix ref = to_matrix({x * c[0], x * c[1]});
      for (int q = 0; q < 4; ++q) e = std::max(e, std::abs(t.displacement[k][q] - ref[q]));
    }
    err.push_back(e);
  }
  return std::min(std::log2(err[0] / err[1]), std::log2(err[1] / err[2]));
}

Outcome detector_equivalence() {
  Outcome o;
  ChainErrors worst;
  for (const auto& [spec, cfg] : chain_cases()) {
    const ChainErrors e = detector_chain(spec, cfg);
    worst.velocity = std::max(worst.velocity, e.velocity);
    worst.displacement = std::max(worst.displacement, e.displacement);
    worst.rest = std::max(worst.rest, e.rest);
  }
  o.require(worst.velocity < 1e-6, "velocity", worst.velocity);
  o.require(worst.displacement < 1e-6, "displacement", worst.displacement);
  o.require(worst.rest < 1e-6, "return_to_rest", worst.rest);
  const double order = integrator_order();
  o.require(order >= 3.5, "order", order);
  return o;
}

Outcome subleading_em() {
  Outcome o;
  NullFieldAmplitudes amp;
  amp.aw = {0.7, -0.3};
  amp.af = {1.0, 0.4};
  amp.rho = 0.5;
  amp.sigma = 0.25;
  amp.alpha = 1.5;
  const std::vector<double> radii{1e20, 2e20, 4e20, 1e21, 3e21, 1e22};
  const OrderReport r = em_subleading_report(amp, radii);
  o.require(std::abs(r.slope + 1.0) < 0.05, "slope", r.slope);
  o.require(radii.back() / radii.front() >= 100.0, "decades", std::log10(radii.back() / radii.front()));
  return o;
}

Outcome cross_module() {
  Outcome o;
  double worst = 0.0;
  for (const auto& [spec, cfg] : chain_cases()) worst = std::max(worst, detector_chain(spec, cfg).cross);
  o.require(worst < 1e-6, "jacobi_vs_displacement_map", worst);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"energy figures", energy_figures},
      {"spectral core", spectral_core},
      {"memory pipeline properties", memory_pipeline},
      {"conservation identity", conservation},
      {"detector chain equivalence", detector_equivalence},
      {"subleading electromagnetic tidal term", subleading_em},
      {"cross-module displacement agreement", cross_module},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %zu [%s]: %s (%s)\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
