#include <doctest.h>

#include <cmath>
#include <random>

#include "emmemory/memory.hpp"
#include "emmemory/validate.hpp"
#include "oracles.hpp"

using namespace emm;

namespace {

struct Pair {
  TensorTrain xi;
  VectorTrain af;
};

Pair random_pair(const GridPtr& g, const UGrid& u, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int l = std::max(2, g->l_max() / 2);
  const auto xi_specs = random_pulses(3, l, 2, u, rng);
  const auto af_specs = random_pulses(2, l, 1, u, rng);
  return {gen_xi_train(xi_specs, g, u), gen_af_train(af_specs, g, u)};
}

}  // namespace

TEST_CASE("memory kernel") {
  const GridPtr g = make_grid(6);
  const UGrid u{-10.0, 0.1, 201};
  const TensorTrain xi0 = gen_xi_pulse({0.0, 0.0, 1.0, 2, 0, Parity::kElectric}, g, u);
  const VectorTrain af0 = gen_af_pulse({0.0, 0.0, 1.0, 1, 0, Parity::kElectric}, g, u);
  CHECK(compute_kernel(xi0, &af0).max_norm() == 0.0);
  CHECK(compute_kernel(xi0).max_norm() == 0.0);

  // Single electromagnetic term: F = 1/2 int |A_F|^2 du.
  const VectorTrain af = gen_af_pulse({0.8, 0.5, 1.1, 2, -1, Parity::kMagnetic}, g, u);
  const ScalarField F = compute_kernel(xi0, &af);
  const ScalarField expect =
      squared_norm(vector_basis(2, -1, Parity::kMagnetic, g)) * (0.5 * 0.64 * oracle::gaussian_squared_integral(1.1));
  CHECK((F - expect).max_norm() < 1e-3 * expect.max_norm());
  for (double v : F.data()) CHECK(v >= 0.0);

  // Electromagnetic shift is exactly the trapezoid of 1/2 |A_F|^2.
  const Pair p = random_pair(g, u, 4);
  const ScalarField shift = compute_kernel(p.xi, &p.af) - compute_kernel(p.xi);
  ScalarField half(g);
  for (int k = 0; k < u.n; ++k) {
    const double w = (k == 0 || k + 1 == u.n) ? 0.5 * u.du : u.du;
    half += squared_norm(p.af.samples[k]) * (0.5 * w);
  }
  CHECK((shift - half).max_norm() <= 1e-14 * half.max_norm());

  const VectorTrain af_bad = gen_af_pulse({1.0, 0.0, 1.0, 1, 0, Parity::kElectric}, make_grid(5), u);
  CHECK_THROWS_AS(compute_kernel(p.xi, &af_bad), std::invalid_argument);
}

TEST_CASE("memory solve on single harmonics") {
  const GridPtr g = make_grid(8);

  ScalarField c(g);
  for (double& v : c.data()) v = 2.0;
  const MemoryResult rc = solve_memory(c);
  CHECK(rc.Phi.max_norm() < 1e-13);
  CHECK(rc.delta_sigma.max_norm() < 1e-13);
  CHECK(rc.F_bar == doctest::Approx(2.0));
  CHECK(rc.energy_radiated == doctest::Approx(1.0));

  // F = Y_20: Phi = -Y_20/6 and delta = (1/12) STF grad grad Y_20.
  const ScalarField y20 = scalar_harmonic(2, 0, g);
  const MemoryResult r = solve_memory(y20);
  CHECK((r.Phi - y20 * (-1.0 / 6.0)).max_norm() < 1e-13);
  const StfTensorField expect = oracle::sample<FieldKind::kStf>(
      g, [&](double t, double p) {
        auto h = oracle::y20_poly().stf_hessian(t, p);
        return std::array<double, 2>{h[0] / 12.0, h[1] / 12.0};
      });
  CHECK((r.delta_sigma - expect).max_norm() < 1e-13);
  const TensorCoeffs cs = tensor_analyze(r.delta_sigma);
  CHECK(cs.electric(2, 0) == doctest::Approx(std::sqrt(3.0) / 6.0).epsilon(1e-12));
  CHECK(std::abs(cs.magnetic(2, 0)) < 1e-14);
  CHECK(r.residual < 1e-12);
  // Divergence of the jump equals the gradient of Phi.
  CHECK((divergence(r.delta_sigma) - gradient(r.Phi)).max_norm() < 1e-12);

  // F = Y_10: no tensor exists at l = 1.
  const ScalarField y10 = scalar_harmonic(1, 0, g);
  const MemoryResult r1 = solve_memory(y10);
  CHECK((r1.Phi - y10 * -0.5).max_norm() < 1e-13);
  CHECK(r1.delta_sigma.max_norm() < 1e-13);
  CHECK(r1.dropped_l1[1] == doctest::Approx(1.0));
  CHECK(std::abs(r1.dropped_l1[0]) < 1e-13);
  CHECK(std::abs(r1.dropped_l1[2]) < 1e-13);
}

TEST_CASE("memory solve on random kernels") {
  for (int l_max : {4, 8, 16}) {
    const GridPtr g = make_grid(l_max);
    std::mt19937_64 rng(l_max);
    ScalarField F = sht_synthesize(random_scalar_coeffs(l_max, rng), g);
    const MemoryResult r = solve_memory(F);
    CHECK(r.residual < kReconstructionTolerance);
    CHECK(std::abs(mean(r.Phi)) < 1e-12);
    ScalarCoeffs c = sht_analyze(r.Phi);
    CHECK(c(0, 0) == doctest::Approx(0.0).scale(1.0));
    // The magnetic part is zero.
    const TensorCoeffs tc = tensor_analyze(r.delta_sigma);
    for (double v : tc.magnetic_values()) CHECK(std::abs(v) < 1e-12);
  }
  const GridPtr g = make_grid(4);
  ScalarField bad(g);
  bad(0, 1, 1) = std::nan("");
  CHECK_THROWS_AS(solve_memory(bad), std::invalid_argument);
}

TEST_CASE("mass-loss rate normalizations") {
  const GridPtr g = make_grid(6);
  CHECK(mass_loss_rate(StfTensorField(g)) == 0.0);
  const StfTensorField e20 = tensor_basis(2, 0, Parity::kElectric, g);
  CHECK(mass_loss_rate(e20) == doctest::Approx(1.0 / (8.0 * oracle::kPi)).epsilon(1e-12));
  const TangentVectorField v = vector_basis(3, 2, Parity::kElectric, g);
  CHECK(mass_loss_rate(StfTensorField(g), &v) == doctest::Approx(1.0 / (16.0 * oracle::kPi)).epsilon(1e-12));
  CHECK(mass_loss_rate(e20, &v) == doctest::Approx(3.0 / (16.0 * oracle::kPi)).epsilon(1e-12));
}

TEST_CASE("total mass change") {
  const GridPtr g = make_grid(8);
  const UGrid u{-12.0, 0.1, 241};
  const TensorTrain xi0 = gen_xi_pulse({0.0, 0.0, 1.0, 2, 0, Parity::kElectric}, g, u);
  CHECK(total_mass_change(xi0) == 0.0);

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Pair p = random_pair(g, u, seed);
    const double dm = total_mass_change(p.xi, &p.af);
    CHECK(std::abs(dm - 0.5 * mean(compute_kernel(p.xi, &p.af))) < 1e-8 * dm);
    for (double rate : mass_loss_history(p.xi, &p.af)) CHECK(rate >= 0.0);

    Pair q = p;
    for (auto& s : q.xi.samples) s *= 3.0;
    for (auto& s : q.af.samples) s *= 3.0;
    CHECK(total_mass_change(q.xi, &q.af) == doctest::Approx(9.0 * dm).epsilon(1e-14));
  }
}

TEST_CASE("displacement map") {
  const GridPtr g = make_grid(6);
  std::mt19937_64 rng(3);
  const StfTensorField ds = tensor_synthesize(random_tensor_coeffs(6, rng), g);
  CHECK(displacement_map(StfTensorField(g), 1e5, 1e22).max_norm() == 0.0);
  const StfTensorField a = displacement_map(ds, 3e5, 1e22);
  const StfTensorField b = displacement_map(ds, 3e5, 2e22);
  CHECK((a * 0.5 - b).max_norm() == 0.0);
  CHECK((displacement_map(ds, 7.0, 7.0) + ds).max_norm() == 0.0);
  CHECK_THROWS_AS(displacement_map(ds, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(displacement_map(ds, 1.0, -1.0), std::invalid_argument);
  CHECK(displacement_ratio_large(1.0, 10.0));
  CHECK_FALSE(displacement_ratio_large(1e5, 1e22));
}

TEST_CASE("memory is equivariant under longitude rotation") {
  const GridPtr g = make_grid(8);
  const UGrid u{-12.0, 0.1, 241};
  const Pair p = random_pair(g, u, 99);
  const MemoryResult r = solve_memory(compute_kernel(p.xi, &p.af));
  for (int shift : {1, 5, 17}) {
    Pair q = p;
    for (auto& s : q.xi.samples) s = roll_longitude(s, shift);
    for (auto& s : q.af.samples) s = roll_longitude(s, shift);
    const MemoryResult rr = solve_memory(compute_kernel(q.xi, &q.af));
    CHECK((rr.F - roll_longitude(r.F, shift)).max_norm() < 1e-9 * r.F.max_norm());
    CHECK((rr.Phi - roll_longitude(r.Phi, shift)).max_norm() < 1e-9 * r.Phi.max_norm());
    CHECK((rr.delta_sigma - roll_longitude(r.delta_sigma, shift)).max_norm() < 1e-9 * r.delta_sigma.max_norm());
  }
}

TEST_CASE("unit conversion") {
  // c^4 / G in erg/cm.
  CHECK(kErgPerCm == doctest::Approx(1.2103e49).epsilon(1e-4));
}
