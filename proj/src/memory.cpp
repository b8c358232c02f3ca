#include "emmemory/memory.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace emm {

namespace {

double l2_norm(const TangentVectorField& v) { return std::sqrt(inner(v, v)); }

}  // namespace

ScalarField compute_kernel(const TensorTrain& xi, const VectorTrain* af) {
  if (xi.samples.empty()) throw std::invalid_argument("compute_kernel: empty Xi train");
  check_consistent(xi, af);
  const std::size_t n = xi.samples.size();
  const double h = xi.u.du;
  ScalarField F(xi.grid);
  auto out = F.data();
  for (std::size_t k = 0; n > 1 && k < n; ++k) {
    const double w = (k == 0 || k + 1 == n) ? 0.5 * h : h;
    const auto x1 = xi.samples[k].component(0), x2 = xi.samples[k].component(1);
    for (std::size_t q = 0; q < out.size(); ++q) out[q] += w * 2.0 * (x1[q] * x1[q] + x2[q] * x2[q]);
  }
  if (af) {
    for (std::size_t k = 0; n > 1 && k < n; ++k) {
      const double w = (k == 0 || k + 1 == n) ? 0.5 * h : h;
      const auto a1 = af->samples[k].component(0), a2 = af->samples[k].component(1);
      for (std::size_t q = 0; q < out.size(); ++q) out[q] += w * 0.5 * (a1[q] * a1[q] + a2[q] * a2[q]);
    }
  }
  return F;
}

double reconstruction_residual(const StfTensorField& delta_sigma, const ScalarField& phi) {
  ScalarCoeffs c = sht_analyze(phi);
  c(0, 0) = 0.0;
  for (int m = -1; m <= 1; ++m) c(1, m) = 0.0;
  const TangentVectorField rhs = gradient(sht_synthesize(c, phi.grid()));
  const TangentVectorField lhs = divergence(delta_sigma);
  const double err = l2_norm(lhs - rhs);
  const double scale = l2_norm(rhs);
  return scale > 0.0 ? err / scale : err;
}

MemoryResult solve_memory(const ScalarField& F) {
  if (!F.all_finite()) throw std::invalid_argument("solve_memory: non-finite kernel");
  const auto& grid = F.grid();
  const ScalarCoeffs f = sht_analyze(F);
  const int l_max = f.l_max();

  ScalarCoeffs phi(l_max);
  TensorCoeffs sigma(l_max);
  for (int l = 1; l <= l_max; ++l) {
    const double L = static_cast<double>(l) * (l + 1);
    for (int m = -l; m <= l; ++m) {
      phi(l, m) = -f(l, m) / L;
      // div(c E_lm) = c k_l G_lm must equal sqrt(L) Phi_lm G_lm.
      if (l >= 2) sigma.electric(l, m) = std::sqrt(L) * phi(l, m) / tensor_divergence_factor(l);
    }
  }

  MemoryResult r{F, f(0, 0) / std::sqrt(4.0 * std::numbers::pi), sht_synthesize(phi, grid),
                 tensor_synthesize(sigma, grid), {f(1, -1), f(1, 0), f(1, 1)}, 0.0, 0.0};
  r.energy_radiated = 0.5 * r.F_bar;
  r.residual = reconstruction_residual(r.delta_sigma, r.Phi);
  return r;
}

double mass_loss_rate(const StfTensorField& xi, const TangentVectorField* af) {
  ScalarField density = squared_norm(xi);
  if (af) {
    if (!af->g().same_shape(xi.g())) throw std::invalid_argument("mass_loss_rate: grids differ");
    ScalarField a = squared_norm(*af);
    a *= 0.5;
    density += a;
  }
  return density.g().integrate(density.component(0)) / (8.0 * std::numbers::pi);
}

std::vector<double> mass_loss_history(const TensorTrain& xi, const VectorTrain* af) {
  check_consistent(xi, af);
  std::vector<double> rate(xi.samples.size());
  for (std::size_t k = 0; k < rate.size(); ++k) {
    rate[k] = mass_loss_rate(xi.samples[k], af ? &af->samples[k] : nullptr);
  }
  return rate;
}

double total_mass_change(const TensorTrain& xi, const VectorTrain* af) {
  const auto rate = mass_loss_history(xi, af);
  return trapezoid(rate, xi.u.du);
}

StfTensorField displacement_map(const StfTensorField& delta_sigma, double d0, double r) {
  if (!(d0 > 0.0) || !(r > 0.0)) throw std::invalid_argument("displacement_map: d0 and r must be positive");
  return delta_sigma * (-d0 / r);
}

}  // namespace emm
