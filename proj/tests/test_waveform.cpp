#include <doctest.h>

#include <cmath>
#include <random>

#include "emmemory/errors.hpp"
#include "emmemory/validate.hpp"
#include "emmemory/waveform.hpp"
#include "oracles.hpp"

using namespace emm;

namespace {

// Trapezoid of |sample|^2 over u, pointwise.
template <FieldKind K>
ScalarField energy_integral(const Train<K>& t) {
  ScalarField out(t.grid);
  for (int k = 0; k < t.size(); ++k) {
    const double w = (k == 0 || k + 1 == t.size()) ? 0.5 * t.u.du : t.u.du;
    out += squared_norm(t.samples[k]) * w;
  }
  return out;
}

double max_rel(const StfTensorField& a, const StfTensorField& b) { return (a - b).max_norm() / b.max_norm(); }

int index_of(const UGrid& u, double t) { return static_cast<int>(std::lround((t - u.u0) / u.du)); }

}  // namespace

TEST_CASE("pulse generation") {
  const GridPtr g = make_grid(6);
  const UGrid u{-8.0, 0.05, 321};
  const PulseSpec base{0.7, 0.0, 1.0, 3, -2, Parity::kElectric};

  PulseSpec zero = base;
  zero.amplitude = 0.0;
  for (const auto& s : gen_xi_pulse(zero, g, u).samples) CHECK(s.max_norm() == 0.0);
  for (const auto& s : gen_af_pulse(zero, g, u).samples) CHECK(s.max_norm() == 0.0);

  PulseSpec twice = base;
  twice.amplitude *= 2.0;
  const TensorTrain a = gen_xi_pulse(base, g, u);
  const TensorTrain b = gen_xi_pulse(twice, g, u);
  for (int k = 0; k < u.n; ++k) CHECK(((a.samples[k] * 2.0) - b.samples[k]).max_norm() == 0.0);

  // Sample at the pulse centre is the amplitude times the basis tensor.
  const int kc = index_of(u, 0.0);
  CHECK((a.samples[kc] - tensor_basis(3, -2, Parity::kElectric, g) * 0.7).max_norm() < 1e-14);

  // Gaussian integral: int |Xi|^2 du = a^2 sqrt(pi) tau |basis|^2.
  const ScalarField e = energy_integral(a);
  const ScalarField expect =
      squared_norm(tensor_basis(3, -2, Parity::kElectric, g)) * (0.49 * oracle::gaussian_squared_integral(1.0));
  CHECK((e - expect).max_norm() < 1e-3 * expect.max_norm());

  const VectorTrain af = gen_af_pulse({0.4, 1.0, 0.6, 2, 1, Parity::kElectric}, g, u);
  double leak = 0.0;
  for (const auto& s : af.samples) {
    const VectorCoeffs vc = vector_analyze(s);
    for (double c : vc.magnetic_values()) leak = std::max(leak, std::abs(c));
  }
  CHECK(leak < 1e-9);
  const ScalarField ea = energy_integral(af);
  const ScalarField expa =
      squared_norm(vector_basis(2, 1, Parity::kElectric, g)) * (0.16 * oracle::gaussian_squared_integral(0.6));
  CHECK((ea - expa).max_norm() < 1e-3 * expa.max_norm());
}

TEST_CASE("pulse generation validates its inputs") {
  const GridPtr g = make_grid(4);
  const UGrid u{-3.0, 0.1, 61};
  CHECK_THROWS_AS(gen_xi_pulse({1.0, 0.0, 1.0, 2, 0, Parity::kElectric}, g, u), std::invalid_argument);
  const UGrid wide{-8.0, 0.1, 161};
  CHECK_THROWS_AS(gen_xi_pulse({1.0, 0.0, 1.0, 1, 0, Parity::kElectric}, g, wide), std::invalid_argument);
  CHECK_THROWS_AS(gen_xi_pulse({1.0, 0.0, 1.0, 5, 0, Parity::kElectric}, g, wide), std::invalid_argument);
  CHECK_THROWS_AS(gen_xi_pulse({1.0, 0.0, 0.0, 2, 0, Parity::kElectric}, g, wide), std::invalid_argument);
  CHECK_NOTHROW(gen_af_pulse({1.0, 0.0, 1.0, 1, 0, Parity::kMagnetic}, g, wide));
  CHECK_THROWS_AS(gen_af_pulse({1.0, 0.0, 1.0, 0, 0, Parity::kMagnetic}, g, wide), std::invalid_argument);
}

TEST_CASE("A_W from Xi") {
  const GridPtr g = make_grid(4);
  const PulseSpec spec{1.0, 0.0, 1.0, 2, 0, Parity::kElectric};
  const StfTensorField basis = tensor_basis(2, 0, Parity::kElectric, g);

  const UGrid u0{-8.0, 0.1, 161};
  PulseSpec zero = spec;
  zero.amplitude = 0.0;
  for (const auto& s : aw_from_xi(gen_xi_pulse(zero, g, u0)).samples) CHECK(s.max_norm() == 0.0);

  // A_W = -4 dXi/du = 4 (u - c) / tau^2 Xi; measure the error order.
  std::vector<double> err;
  for (double du : {0.1, 0.05, 0.025}) {
    const UGrid u{-8.0, du, static_cast<int>(std::lround(16.0 / du)) + 1};
    const TensorTrain aw = aw_from_xi(gen_xi_pulse(spec, g, u));
    CHECK(aw.kind == TrainKind::kAw);
    double e = 0.0, peak = 0.0;
    for (int k = 0; k < u.n; ++k) {
      const double t = u.at(k);
      const StfTensorField ref = basis * (4.0 * t * oracle::gaussian(t, 0.0, 1.0));
      e = std::max(e, (aw.samples[k] - ref).max_norm());
      peak = std::max(peak, ref.max_norm());
    }
    err.push_back(e / peak);
  }
  CHECK(err[0] < 1e-2);
  CHECK(std::log2(err[0] / err[1]) > 1.9);
  CHECK(std::log2(err[1] / err[2]) > 1.9);

  const TensorTrain two{TrainKind::kXi, UGrid{0.0, 1.0, 2}, g, std::vector<StfTensorField>(2, basis)};
  CHECK_THROWS_AS(aw_from_xi(two), std::invalid_argument);
}

TEST_CASE("integrating A_W back to Xi") {
  const GridPtr g = make_grid(4);
  const StfTensorField basis = tensor_basis(2, 1, Parity::kMagnetic, g);

  // Constant A_W = c over [0, U]: Xi(U) = -c U / 4 exactly.
  const UGrid u{0.0, 0.2, 26};
  TensorTrain aw{TrainKind::kAw, u, g, std::vector<StfTensorField>(u.n, basis * 3.0)};
  const TensorTrain xi = integrate_xi(aw);
  CHECK(xi.kind == TrainKind::kXi);
  CHECK((xi.samples.back() - basis * (-3.0 * u.back() / 4.0)).max_norm() < 1e-14);
  CHECK(xi.samples.front().max_norm() == 0.0);

  TensorTrain none{TrainKind::kAw, u, g, std::vector<StfTensorField>(u.n, StfTensorField(g))};
  for (const auto& s : integrate_xi(none).samples) CHECK(s.max_norm() == 0.0);

  // Round trip through the derivative is second order.
  std::vector<double> err;
  for (double du : {0.1, 0.05, 0.025}) {
    const UGrid ug{-8.0, du, static_cast<int>(std::lround(16.0 / du)) + 1};
    const TensorTrain x = gen_xi_pulse({1.0, 0.0, 1.0, 2, 1, Parity::kMagnetic}, g, ug);
    const TensorTrain back = integrate_xi(aw_from_xi(x));
    double e = 0.0;
    for (int k = 0; k < ug.n; ++k) e = std::max(e, (back.samples[k] - x.samples[k]).max_norm());
    err.push_back(e / x.peak());
  }
  CHECK(err[0] < 1e-2);
  CHECK(std::log2(err[0] / err[1]) > 1.9);
  CHECK(std::log2(err[1] / err[2]) > 1.9);
}

TEST_CASE("shear history") {
  const GridPtr g = make_grid(6);
  const UGrid u{-10.0, 0.05, 401};
  std::mt19937_64 rng(8);
  const StfTensorField sigma_minus = tensor_synthesize(random_tensor_coeffs(6, rng), g);

  PulseSpec spec{0.3, 0.5, 1.2, 4, 3, Parity::kElectric};
  PulseSpec zero = spec;
  zero.amplitude = 0.0;
  const SigmaHistory h0 = integrate_sigma(gen_xi_pulse(zero, g, u), sigma_minus);
  CHECK((h0.sigma_plus - sigma_minus).max_norm() == 0.0);
  CHECK(h0.delta.max_norm() == 0.0);

  // Gaussian pulse: delta = -a sqrt(2 pi) tau basis.
  const TensorTrain xi = gen_xi_pulse(spec, g, u);
  const SigmaHistory h = integrate_sigma(xi, sigma_minus);
  const StfTensorField expect =
      tensor_basis(4, 3, Parity::kElectric, g) * (-0.3 * oracle::gaussian_integral(1.2));
  CHECK(max_rel(h.delta, expect) < 1e-3);
  CHECK((h.sigma_plus - sigma_minus - h.delta).max_norm() < 1e-14 * sigma_minus.max_norm());
  CHECK(h.sigma.size() == static_cast<std::size_t>(u.n));
  CHECK((h.sigma.front() - sigma_minus).max_norm() == 0.0);

  // The jump does not depend on Sigma^-.
  CHECK((integrate_sigma(xi).delta - h.delta).max_norm() == 0.0);

  // Odd-in-u pulse on a symmetric grid leaves no memory.
  const UGrid sym{-8.0, 0.05, 321};
  const TensorTrain aw_odd = aw_from_xi(gen_xi_pulse({1.0, 0.0, 1.0, 2, 0, Parity::kElectric}, g, sym));
  TensorTrain odd{TrainKind::kXi, sym, g, aw_odd.samples};
  CHECK(integrate_sigma(odd).delta.max_norm() < 1e-12 * odd.peak());
}

TEST_CASE("chain linearity") {
  const GridPtr g = make_grid(6);
  const UGrid u{-10.0, 0.1, 201};
  std::mt19937_64 rng(12);
  const TensorTrain a = gen_xi_train(random_pulses(3, 6, 2, u, rng), g, u);
  const TensorTrain b = gen_xi_train(random_pulses(2, 6, 2, u, rng), g, u);
  const double s = 1.75, t = -0.4;
  TensorTrain c = a;
  for (int k = 0; k < u.n; ++k) c.samples[k] = a.samples[k] * s + b.samples[k] * t;

  const StfTensorField dl = integrate_sigma(c).delta;
  const StfTensorField dr = integrate_sigma(a).delta * s + integrate_sigma(b).delta * t;
  CHECK((dl - dr).max_norm() < 1e-10 * dr.max_norm());

  const TensorTrain rl = integrate_xi(aw_from_xi(c));
  const TensorTrain ra = integrate_xi(aw_from_xi(a));
  const TensorTrain rb = integrate_xi(aw_from_xi(b));
  double err = 0.0;
  for (int k = 0; k < u.n; ++k)
    err = std::max(err, (rl.samples[k] - (ra.samples[k] * s + rb.samples[k] * t)).max_norm());
  CHECK(err < 1e-10 * c.peak());
}

TEST_CASE("trapezoid refinement is second order") {
  const GridPtr g = make_grid(4);
  const StfTensorField basis = tensor_basis(2, 2, Parity::kElectric, g);
  // Partial integral up to u = 1 (interior), where the rule is not spectrally exact.
  const double exact = -oracle::gaussian_cumulative(1.0, 0.0, 1.0);
  std::vector<double> err;
  for (double du : {0.1, 0.05, 0.025}) {
    const UGrid u{-8.0, du, static_cast<int>(std::lround(16.0 / du)) + 1};
    const SigmaHistory h = integrate_sigma(gen_xi_pulse({1.0, 0.0, 1.0, 2, 2, Parity::kElectric}, g, u));
    const StfTensorField ref = basis * exact;
    err.push_back((h.sigma[index_of(u, 1.0)] - ref).max_norm() / ref.max_norm());
  }
  CHECK(std::log2(err[0] / err[1]) >= 1.9);
  CHECK(std::log2(err[1] / err[2]) >= 1.9);

  const std::vector<double> y{1.0, 3.0, 2.0};
  CHECK(trapezoid(y, 0.5) == doctest::Approx(2.25));
  const auto cum = cumulative_trapezoid(y, 0.5);
  REQUIRE(cum.size() == 3);
  CHECK(cum[0] == 0.0);
  CHECK(cum[1] == doctest::Approx(1.0));
  CHECK(cum[2] == doctest::Approx(2.25));
}

TEST_CASE("compact support and consistency checks") {
  const GridPtr g = make_grid(4);
  const UGrid u{-8.0, 0.1, 161};
  const TensorTrain xi = gen_xi_pulse({1.0, 0.0, 1.0, 2, 0, Parity::kElectric}, g, u);
  CHECK_NOTHROW(check_compact_support(xi));

  TensorTrain cut = xi;
  cut.samples.back() = cut.samples[80];
  CHECK_THROWS_AS(check_compact_support(cut), InvariantError);

  const VectorTrain af_other = gen_af_pulse({1.0, 0.0, 1.0, 1, 0, Parity::kElectric}, make_grid(5), u);
  CHECK_THROWS_AS(check_consistent(xi, &af_other), std::invalid_argument);
  const UGrid shifted{-7.0, 0.1, 161};
  const VectorTrain af_shift = gen_af_pulse({1.0, 0.0, 1.0, 1, 0, Parity::kElectric}, g, shifted);
  CHECK_THROWS_AS(check_consistent(xi, &af_shift), std::invalid_argument);
  CHECK_NOTHROW(check_consistent(xi, nullptr));
}

TEST_CASE("sampling at a direction") {
  const GridPtr g = make_grid(6);
  const UGrid u{-8.0, 0.2, 81};
  const TensorTrain xi = gen_xi_pulse({2.0, 0.0, 1.0, 3, 1, Parity::kMagnetic}, g, u);
  const auto series = sample_direction(xi, 1.1, 0.4);
  TensorCoeffs c(6);
  c.magnetic(3, 1) = 1.0;
  const auto b = tensor_evaluate(c, 1.1, 0.4);
  for (int k = 0; k < u.n; ++k) {
    const double s = 2.0 * oracle::gaussian(u.at(k), 0.0, 1.0);
    CHECK(series[k][0] == doctest::Approx(s * b[0]).scale(1.0).epsilon(1e-12));
    CHECK(series[k][1] == doctest::Approx(s * b[1]).scale(1.0).epsilon(1e-12));
  }
}
