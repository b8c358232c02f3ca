#pragma once
//! \file sphere.hpp
//! \brief Quadrature grids, fields and spectral operators on the unit sphere.
//!
//! Conventions (fixed here, tested explicitly):
//!  - Real orthonormal spherical harmonics without the Condon-Shortley phase:
//!      Y_l0  = Pbar_l0(cos t)
//!      Y_lm  = sqrt(2) Pbar_lm(cos t) cos(m p)    m > 0
//!      Y_l-m = sqrt(2) Pbar_lm(cos t) sin(m p)    m > 0
//!    with Pbar_lm the 4pi-orthonormalised associated Legendre functions
//!    (Pbar_mm > 0 on the open interval).
//!  - Vector and tensor components live in the orthonormal frame
//!    (e_1, e_2) = (e_theta, e_phi). The area form has eps_12 = +1, and the
//!    rotation of a vector is rot(v) = (v_2, -v_1).
//!  - |T|^2 = T_AB T^AB = 2 (T_11^2 + T_12^2) for a symmetric trace-free T.
//!  - Electric tensor harmonic: trace-free part of the Hessian of Y_lm,
//!    divided by N_l = sqrt((l-1) l (l+1) (l+2) / 2). Magnetic harmonic:
//!    (eps T)_AB = eps_A^C T_CB, i.e. (T_11, T_12) -> (T_12, -T_11).
//!  - Gradient harmonic G_lm = grad Y_lm / sqrt(l(l+1)); curl harmonic
//!    C_lm = rot(G_lm).

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace emm {

class SphereGrid;
using GridPtr = std::shared_ptr<const SphereGrid>;

inline constexpr int kMinLMax = 2;
inline constexpr int kMaxLMax = 256;

// Gauss-Legendre colatitude nodes x uniform longitude nodes.
class SphereGrid {
 public:
  SphereGrid(int l_max, int n_theta, int n_phi);

  int l_max() const { return l_max_; }
  int n_theta() const { return n_theta_; }
  int n_phi() const { return n_phi_; }
  std::size_t size() const { return static_cast<std::size_t>(n_theta_) * n_phi_; }

  std::span<const double> theta() const { return theta_; }
  std::span<const double> cos_theta() const { return cos_theta_; }
  std::span<const double> sin_theta() const { return sin_theta_; }
  // Gauss-Legendre weights on [-1, 1]; they sum to 2.
  std::span<const double> weights() const { return weights_; }
  std::span<const double> phi() const { return phi_; }
  double dphi() const;

  // Area-weighted quadrature of row-major samples over S^2.
  double integrate(std::span<const double> values) const;

  bool same_shape(const SphereGrid& other) const {
    return l_max_ == other.l_max_ && n_theta_ == other.n_theta_ && n_phi_ == other.n_phi_;
  }

 private:
  int l_max_;
  int n_theta_;
  int n_phi_;
  std::vector<double> theta_, cos_theta_, sin_theta_, weights_, phi_;
};

// Default grid: n_theta = l_max + 1, n_phi = 2 l_max + 2.
GridPtr make_grid(int l_max);
GridPtr make_grid(int l_max, int n_theta, int n_phi);

// Gauss-Legendre nodes (ascending) and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// The on-disk kind tag doubles as the field type discriminator.
enum class FieldKind : std::int32_t { kScalar = 0, kVector = 1, kStf = 2 };

template <FieldKind K>
class Field {
 public:
  static constexpr FieldKind kKind = K;
  static constexpr int kComponents = K == FieldKind::kScalar ? 1 : 2;

  explicit Field(GridPtr grid);
  Field(GridPtr grid, std::vector<double> data);

  const GridPtr& grid() const { return grid_; }
  const SphereGrid& g() const { return *grid_; }

  double& operator()(int c, int i, int j) { return data_[index(c, i, j)]; }
  double operator()(int c, int i, int j) const { return data_[index(c, i, j)]; }
  double& at(int i, int j) { return data_[index(0, i, j)]; }
  double at(int i, int j) const { return data_[index(0, i, j)]; }

  std::span<double> component(int c) { return {data_.data() + c * grid_->size(), grid_->size()}; }
  std::span<const double> component(int c) const {
    return {data_.data() + c * grid_->size(), grid_->size()};
  }
  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  double max_norm() const;
  bool all_finite() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(double s, Field a) { return a *= s; }
  friend Field operator*(Field a, double s) { return a *= s; }

 private:
  std::size_t index(int c, int i, int j) const {
    return c * grid_->size() + static_cast<std::size_t>(i) * grid_->n_phi() + j;
  }
  GridPtr grid_;
  std::vector<double> data_;
};

using ScalarField = Field<FieldKind::kScalar>;
using TangentVectorField = Field<FieldKind::kVector>;
using StfTensorField = Field<FieldKind::kStf>;

extern template class Field<FieldKind::kScalar>;
extern template class Field<FieldKind::kVector>;
extern template class Field<FieldKind::kStf>;

// Pointwise |v|^2 and |T|^2 = T_AB T^AB.
ScalarField squared_norm(const TangentVectorField& v);
ScalarField squared_norm(const StfTensorField& t);

// L^2 inner products with full index contraction.
double inner(const ScalarField& a, const ScalarField& b);
double inner(const TangentVectorField& a, const TangentVectorField& b);
double inner(const StfTensorField& a, const StfTensorField& b);
double mean(const ScalarField& f);

// rot(v) = (v_2, -v_1); for tensors (T_11, T_12) -> (T_12, -T_11).
TangentVectorField rotate(const TangentVectorField& v);
StfTensorField rotate(const StfTensorField& t);

// Shift every field by `steps` longitude nodes (phi -> phi + steps * dphi).
template <FieldKind K>
Field<K> roll_longitude(const Field<K>& f, int steps);

enum class Parity { kElectric, kMagnetic };

class ScalarCoeffs {
 public:
  explicit ScalarCoeffs(int l_max);
  int l_max() const { return l_max_; }
  static std::size_t index(int l, int m) { return static_cast<std::size_t>(l * l + l + m); }
  double& operator()(int l, int m) { return a_[index(l, m)]; }
  double operator()(int l, int m) const { return a_[index(l, m)]; }
  std::span<double> values() { return a_; }
  std::span<const double> values() const { return a_; }

 private:
  int l_max_;
  std::vector<double> a_;
};

// Electric/magnetic pair of coefficient sets. Tensor coefficients start at
// l = 2, vector coefficients at l = 1.
class ParityCoeffs {
 public:
  ParityCoeffs(int l_max, int l_min);
  int l_max() const { return l_max_; }
  int l_min() const { return l_min_; }
  std::size_t index(int l, int m) const {
    return static_cast<std::size_t>(l * l + l + m - l_min_ * l_min_);
  }
  double& electric(int l, int m) { return e_[index(l, m)]; }
  double electric(int l, int m) const { return e_[index(l, m)]; }
  double& magnetic(int l, int m) { return b_[index(l, m)]; }
  double magnetic(int l, int m) const { return b_[index(l, m)]; }
  double& operator()(Parity p, int l, int m) { return p == Parity::kElectric ? electric(l, m) : magnetic(l, m); }
  double operator()(Parity p, int l, int m) const { return p == Parity::kElectric ? electric(l, m) : magnetic(l, m); }
  std::span<const double> electric_values() const { return e_; }
  std::span<const double> magnetic_values() const { return b_; }
  double sum_squares() const;

 private:
  int l_max_;
  int l_min_;
  std::vector<double> e_, b_;
};

struct TensorCoeffs : ParityCoeffs {
  explicit TensorCoeffs(int l_max) : ParityCoeffs(l_max, 2) {}
};
struct VectorCoeffs : ParityCoeffs {
  explicit VectorCoeffs(int l_max) : ParityCoeffs(l_max, 1) {}
};

// Scalar transforms.
ScalarCoeffs sht_analyze(const ScalarField& f);
ScalarField sht_synthesize(const ScalarCoeffs& c, const GridPtr& grid);
double sht_evaluate(const ScalarCoeffs& c, double theta, double phi);
ScalarField scalar_harmonic(int l, int m, const GridPtr& grid);

// Gradient/curl expansion of tangent vector fields.
VectorCoeffs vector_analyze(const TangentVectorField& v);
TangentVectorField vector_synthesize(const VectorCoeffs& c, const GridPtr& grid);
TangentVectorField vector_basis(int l, int m, Parity parity, const GridPtr& grid);

// Electric/magnetic expansion of symmetric trace-free tensor fields.
StfTensorField tensor_basis(int l, int m, Parity parity, const GridPtr& grid);
TensorCoeffs tensor_analyze(const StfTensorField& t);
StfTensorField tensor_synthesize(const TensorCoeffs& c, const GridPtr& grid);
// (T_11, T_12) at an arbitrary point.
std::array<double, 2> tensor_evaluate(const TensorCoeffs& c, double theta, double phi);
std::array<double, 2> vector_evaluate(const VectorCoeffs& c, double theta, double phi);

// Differential operators, all spectral.
ScalarField laplacian(const ScalarField& f);
TangentVectorField gradient(const ScalarField& f);
TangentVectorField divergence(const StfTensorField& t);

struct PoissonSolution {
  ScalarField phi;
  double removed_mean;
};
// Zero-mean solution of lap(phi) = rhs - mean(rhs).
PoissonSolution solve_poisson(const ScalarField& rhs);

// div of the normalised electric (or magnetic) l-harmonic is this factor
// times the gradient (or curl) l-harmonic.
double tensor_divergence_factor(int l);
// Normalisation N_l of the electric tensor harmonic built from Y_lm.
double tensor_norm(int l);

}  // namespace emm
