#include <cmath>
#include <numbers>
#include <stdexcept>

#include "emmemory/sphere.hpp"
#include "legendre.hpp"

namespace emm {

namespace {

using detail::LegendreRow;

constexpr double kSqrt2 = std::numbers::sqrt2;

double ell(int l) { return static_cast<double>(l) * (l + 1); }

// cos(m phi_j), sin(m phi_j) for 0 <= m <= l_max.
struct Trig {
  Trig(const SphereGrid& g, int l_max) : n_phi(g.n_phi()), c((l_max + 1) * n_phi), s((l_max + 1) * n_phi) {
    for (int m = 0; m <= l_max; ++m)
      for (int j = 0; j < n_phi; ++j) {
        c[m * n_phi + j] = std::cos(m * g.phi()[j]);
        s[m * n_phi + j] = std::sin(m * g.phi()[j]);
      }
  }
  double cos(int m, int j) const { return c[m * n_phi + j]; }
  double sin(int m, int j) const { return s[m * n_phi + j]; }
  int n_phi;
  std::vector<double> c, s;
};

// Fourier sums of one ring of samples.
struct RingSums {
  std::vector<double> c, s;
  RingSums(const double* row, const Trig& trig, int l_max) : c(l_max + 1, 0.0), s(l_max + 1, 0.0) {
    for (int m = 0; m <= l_max; ++m) {
      double cc = 0.0, ss = 0.0;
      for (int j = 0; j < trig.n_phi; ++j) {
        cc += row[j] * trig.cos(m, j);
        ss += row[j] * trig.sin(m, j);
      }
      c[m] = cc;
      s[m] = ss;
    }
  }
  // sum_j row_j t_m(phi_j) with t_0 = 1, t_k = sqrt2 cos, t_-k = sqrt2 sin.
  double t(int m) const {
    if (m == 0) return c[0];
    return m > 0 ? kSqrt2 * c[m] : kSqrt2 * s[-m];
  }
  // sum_j row_j s_m(phi_j) with s_0 = 0, s_k = -sqrt2 sin, s_-k = sqrt2 cos.
  double sg(int m) const {
    if (m == 0) return 0.0;
    return m > 0 ? -kSqrt2 * s[m] : kSqrt2 * c[-m];
  }
};

// Accumulates cos/sin amplitudes of one ring and expands them in phi.
struct RingSeries {
  std::vector<double> c, s;
  explicit RingSeries(int l_max) : c(l_max + 1, 0.0), s(l_max + 1, 0.0) {}
  void add_t(int m, double v) {
    if (m == 0) c[0] += v;
    else if (m > 0) c[m] += kSqrt2 * v;
    else s[-m] += kSqrt2 * v;
  }
  void add_s(int m, double v) {
    if (m == 0) return;
    if (m > 0) s[m] -= kSqrt2 * v;
    else c[-m] += kSqrt2 * v;
  }
  void expand(double* row, const Trig& trig) const {
    const int l_max = static_cast<int>(c.size()) - 1;
    for (int j = 0; j < trig.n_phi; ++j) {
      double v = 0.0;
      for (int m = 0; m <= l_max; ++m) v += c[m] * trig.cos(m, j) + s[m] * trig.sin(m, j);
      row[j] = v;
    }
  }
};

double t_basis(int m, double phi) {
  if (m == 0) return 1.0;
  return m > 0 ? kSqrt2 * std::cos(m * phi) : kSqrt2 * std::sin(-m * phi);
}

double s_basis(int m, double phi) {
  if (m == 0) return 0.0;
  return m > 0 ? -kSqrt2 * std::sin(m * phi) : kSqrt2 * std::cos(-m * phi);
}

// Colatitude profiles (a, b) of a parity basis pair:
//   E = (a t_m, b s_m),  B = (b s_m, -a t_m).
enum class Rank { kVector, kTensor };

struct Profile {
  double a, b;
};

Profile profile(Rank rank, const LegendreRow& leg, int l, int m, double x, double s) {
  const int k = m < 0 ? -m : m;
  const double p = leg.p(l, k);
  const double dp = leg.dp(l, k);
  if (rank == Rank::kVector) {
    const double norm = 1.0 / std::sqrt(ell(l));
    return {dp * norm, k * p / s * norm};
  }
  const double cot = x / s;
  const double norm = 1.0 / tensor_norm(l);
  const double alpha = -0.5 * ell(l) * p + (static_cast<double>(k) * k / (s * s)) * p - cot * dp;
  const double beta = k / s * (dp - cot * p);
  return {alpha * norm, beta * norm};
}

template <FieldKind K>
ParityCoeffs parity_analyze(const Field<K>& f, Rank rank, int l_min) {
  const auto& g = f.g();
  const int l_max = g.l_max();
  ParityCoeffs out(l_max, l_min);
  const Trig trig(g, l_max);
  const double contraction = rank == Rank::kTensor ? 2.0 : 1.0;
  for (int i = 0; i < g.n_theta(); ++i) {
    const double x = g.cos_theta()[i], s = g.sin_theta()[i];
    const LegendreRow leg(l_max, x, s);
    const RingSums r1(f.component(0).data() + i * g.n_phi(), trig, l_max);
    const RingSums r2(f.component(1).data() + i * g.n_phi(), trig, l_max);
    const double w = contraction * g.weights()[i] * g.dphi();
    for (int l = l_min; l <= l_max; ++l)
      for (int m = -l; m <= l; ++m) {
        const Profile pr = profile(rank, leg, l, m, x, s);
        out.electric(l, m) += w * (pr.a * r1.t(m) + pr.b * r2.sg(m));
        out.magnetic(l, m) += w * (pr.b * r1.sg(m) - pr.a * r2.t(m));
      }
  }
  return out;
}

template <FieldKind K>
Field<K> parity_synthesize(const ParityCoeffs& c, const GridPtr& grid, Rank rank) {
  const auto& g = *grid;
  if (c.l_max() > g.l_max()) throw std::invalid_argument("coefficients exceed the grid band limit");
  Field<K> out(grid);
  const Trig trig(g, g.l_max());
  for (int i = 0; i < g.n_theta(); ++i) {
    const double x = g.cos_theta()[i], s = g.sin_theta()[i];
    const LegendreRow leg(c.l_max(), x, s);
    RingSeries x1(g.l_max()), x2(g.l_max());
    for (int l = c.l_min(); l <= c.l_max(); ++l)
      for (int m = -l; m <= l; ++m) {
        const double ce = c.electric(l, m), cb = c.magnetic(l, m);
        if (ce == 0.0 && cb == 0.0) continue;
        const Profile pr = profile(rank, leg, l, m, x, s);
        x1.add_t(m, ce * pr.a);
        x1.add_s(m, cb * pr.b);
        x2.add_s(m, ce * pr.b);
        x2.add_t(m, -cb * pr.a);
      }
    x1.expand(&out(0, i, 0), trig);
    x2.expand(&out(1, i, 0), trig);
  }
  return out;
}

std::array<double, 2> parity_evaluate(const ParityCoeffs& c, Rank rank, double theta, double phi) {
  const double x = std::cos(theta), s = std::sin(theta);
  if (!(s > 0.0)) throw std::domain_error("frame components are undefined at the poles");
  const LegendreRow leg(c.l_max(), x, s);
  double v1 = 0.0, v2 = 0.0;
  for (int l = c.l_min(); l <= c.l_max(); ++l)
    for (int m = -l; m <= l; ++m) {
      const Profile pr = profile(rank, leg, l, m, x, s);
      const double t = t_basis(m, phi), sb = s_basis(m, phi);
      const double ce = c.electric(l, m), cb = c.magnetic(l, m);
      v1 += ce * pr.a * t + cb * pr.b * sb;
      v2 += ce * pr.b * sb - cb * pr.a * t;
    }
  return {v1, v2};
}

void check_basis_index(int l, int m, int l_min, int l_max) {
  if (l < l_min) throw std::invalid_argument("no harmonic of this rank exists for l = " + std::to_string(l));
  if (l > l_max) throw std::invalid_argument("harmonic degree exceeds the grid band limit");
  if (m < -l || m > l) throw std::invalid_argument("harmonic order out of range");
}

}  // namespace

double tensor_norm(int l) { return std::sqrt(0.5 * (l - 1.0) * l * (l + 1.0) * (l + 2.0)); }

double tensor_divergence_factor(int l) { return -std::sqrt(0.5 * (ell(l) - 2.0)); }

ScalarCoeffs sht_analyze(const ScalarField& f) {
  const auto& g = f.g();
  const int l_max = g.l_max();
  ScalarCoeffs out(l_max);
  const Trig trig(g, l_max);
  for (int i = 0; i < g.n_theta(); ++i) {
    const LegendreRow leg(l_max, g.cos_theta()[i], g.sin_theta()[i]);
    const RingSums r(f.component(0).data() + i * g.n_phi(), trig, l_max);
    const double w = g.weights()[i] * g.dphi();
    for (int l = 0; l <= l_max; ++l)
      for (int m = -l; m <= l; ++m) out(l, m) += w * leg.p(l, m < 0 ? -m : m) * r.t(m);
  }
  return out;
}

ScalarField sht_synthesize(const ScalarCoeffs& c, const GridPtr& grid) {
  const auto& g = *grid;
  if (c.l_max() > g.l_max()) throw std::invalid_argument("coefficients exceed the grid band limit");
  ScalarField out(grid);
  const Trig trig(g, g.l_max());
  for (int i = 0; i < g.n_theta(); ++i) {
    const LegendreRow leg(c.l_max(), g.cos_theta()[i], g.sin_theta()[i]);
    RingSeries series(g.l_max());
    for (int l = 0; l <= c.l_max(); ++l)
      for (int m = -l; m <= l; ++m) series.add_t(m, c(l, m) * leg.p(l, m < 0 ? -m : m));
    series.expand(&out.at(i, 0), trig);
  }
  return out;
}

double sht_evaluate(const ScalarCoeffs& c, double theta, double phi) {
  const LegendreRow leg(c.l_max(), std::cos(theta), std::sin(theta));
  double v = 0.0;
  for (int l = 0; l <= c.l_max(); ++l)
    for (int m = -l; m <= l; ++m) v += c(l, m) * leg.p(l, m < 0 ? -m : m) * t_basis(m, phi);
  return v;
}

ScalarField scalar_harmonic(int l, int m, const GridPtr& grid) {
  check_basis_index(l, m, 0, grid->l_max());
  ScalarCoeffs c(l);
  c(l, m) = 1.0;
  return sht_synthesize(c, grid);
}

VectorCoeffs vector_analyze(const TangentVectorField& v) {
  VectorCoeffs out(v.g().l_max());
  static_cast<ParityCoeffs&>(out) = parity_analyze(v, Rank::kVector, 1);
  return out;
}

TangentVectorField vector_synthesize(const VectorCoeffs& c, const GridPtr& grid) {
  return parity_synthesize<FieldKind::kVector>(c, grid, Rank::kVector);
}

TangentVectorField vector_basis(int l, int m, Parity parity, const GridPtr& grid) {
  check_basis_index(l, m, 1, grid->l_max());
  VectorCoeffs c(l);
  c(parity, l, m) = 1.0;
  return vector_synthesize(c, grid);
}

StfTensorField tensor_basis(int l, int m, Parity parity, const GridPtr& grid) {
  check_basis_index(l, m, 2, grid->l_max());
  TensorCoeffs c(l);
  c(parity, l, m) = 1.0;
  return tensor_synthesize(c, grid);
}

TensorCoeffs tensor_analyze(const StfTensorField& t) {
  TensorCoeffs out(t.g().l_max());
  static_cast<ParityCoeffs&>(out) = parity_analyze(t, Rank::kTensor, 2);
  return out;
}

StfTensorField tensor_synthesize(const TensorCoeffs& c, const GridPtr& grid) {
  return parity_synthesize<FieldKind::kStf>(c, grid, Rank::kTensor);
}

std::array<double, 2> tensor_evaluate(const TensorCoeffs& c, double theta, double phi) {
  return parity_evaluate(c, Rank::kTensor, theta, phi);
}

std::array<double, 2> vector_evaluate(const VectorCoeffs& c, double theta, double phi) {
  return parity_evaluate(c, Rank::kVector, theta, phi);
}

}  // namespace emm
