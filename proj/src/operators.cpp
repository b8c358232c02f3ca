#include <cmath>
#include <numbers>

#include "emmemory/sphere.hpp"

namespace emm {

namespace {
double ell(int l) { return static_cast<double>(l) * (l + 1); }
}  // namespace

ScalarField laplacian(const ScalarField& f) {
  ScalarCoeffs c = sht_analyze(f);
  for (int l = 0; l <= c.l_max(); ++l)
    for (int m = -l; m <= l; ++m) c(l, m) *= -ell(l);
  return sht_synthesize(c, f.grid());
}

TangentVectorField gradient(const ScalarField& f) {
  const ScalarCoeffs a = sht_analyze(f);
  VectorCoeffs v(a.l_max());
  for (int l = 1; l <= a.l_max(); ++l)
    for (int m = -l; m <= l; ++m) v.electric(l, m) = std::sqrt(ell(l)) * a(l, m);
  return vector_synthesize(v, f.grid());
}

// div E_lm = k_l G_lm and div B_lm = k_l C_lm with the same factor.
TangentVectorField divergence(const StfTensorField& t) {
  const TensorCoeffs c = tensor_analyze(t);
  VectorCoeffs v(c.l_max());
  for (int l = 2; l <= c.l_max(); ++l) {
    const double k = tensor_divergence_factor(l);
    for (int m = -l; m <= l; ++m) {
      v.electric(l, m) = k * c.electric(l, m);
      v.magnetic(l, m) = k * c.magnetic(l, m);
    }
  }
  return vector_synthesize(v, t.grid());
}

PoissonSolution solve_poisson(const ScalarField& rhs) {
  ScalarCoeffs c = sht_analyze(rhs);
  const double removed = c(0, 0) / std::sqrt(4.0 * std::numbers::pi);
  c(0, 0) = 0.0;
  for (int l = 1; l <= c.l_max(); ++l)
    for (int m = -l; m <= l; ++m) c(l, m) /= -ell(l);
  return {sht_synthesize(c, rhs.grid()), removed};
}

}  // namespace emm
