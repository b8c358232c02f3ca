#include "emmemory/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace emm {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // One more derivative evaluation at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

SphereGrid::SphereGrid(int l_max, int n_theta, int n_phi) : l_max_(l_max), n_theta_(n_theta), n_phi_(n_phi) {
  if (l_max < kMinLMax || l_max > kMaxLMax) {
    throw std::invalid_argument("l_max must lie in [" + std::to_string(kMinLMax) + ", " +
                                std::to_string(kMaxLMax) + "], got " + std::to_string(l_max));
  }
  if (n_theta < l_max + 1) throw std::invalid_argument("n_theta must be at least l_max + 1");
  if (n_phi < 2 * l_max + 1) throw std::invalid_argument("n_phi must be at least 2 l_max + 1");

  std::vector<double> x;
  gauss_legendre(n_theta, x, weights_);
  // Rings run north to south: theta ascending, cos(theta) descending.
  std::reverse(x.begin(), x.end());
  std::reverse(weights_.begin(), weights_.end());
  cos_theta_ = x;
  theta_.resize(n_theta);
  sin_theta_.resize(n_theta);
  for (int i = 0; i < n_theta; ++i) {
    theta_[i] = std::acos(x[i]);
    sin_theta_[i] = std::sqrt((1.0 - x[i]) * (1.0 + x[i]));
  }
  phi_.resize(n_phi);
  for (int j = 0; j < n_phi; ++j) phi_[j] = 2.0 * std::numbers::pi * j / n_phi;
}

double SphereGrid::dphi() const { return 2.0 * std::numbers::pi / n_phi_; }

double SphereGrid::integrate(std::span<const double> values) const {
  if (values.size() != size()) throw std::invalid_argument("integrate: sample count does not match grid");
  double total = 0.0;
  for (int i = 0; i < n_theta_; ++i) {
    double row = 0.0;
    for (int j = 0; j < n_phi_; ++j) row += values[static_cast<std::size_t>(i) * n_phi_ + j];
    total += weights_[i] * row;
  }
  return total * dphi();
}

GridPtr make_grid(int l_max) { return make_grid(l_max, l_max + 1, 2 * l_max + 2); }

GridPtr make_grid(int l_max, int n_theta, int n_phi) {
  return std::make_shared<const SphereGrid>(l_max, n_theta, n_phi);
}

// ---------------------------------------------------------------------------

template <FieldKind K>
Field<K>::Field(GridPtr grid) : grid_(std::move(grid)) {
  if (!grid_) throw std::invalid_argument("field requires a grid");
  data_.assign(kComponents * grid_->size(), 0.0);
}

template <FieldKind K>
Field<K>::Field(GridPtr grid, std::vector<double> data) : grid_(std::move(grid)), data_(std::move(data)) {
  if (!grid_) throw std::invalid_argument("field requires a grid");
  if (data_.size() != kComponents * grid_->size()) {
    throw std::invalid_argument("field data size does not match grid");
  }
}

template <FieldKind K>
double Field<K>::max_norm() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

template <FieldKind K>
bool Field<K>::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

template <FieldKind K>
Field<K>& Field<K>::operator+=(const Field& other) {
  if (!grid_->same_shape(*other.grid_)) throw std::invalid_argument("field grids differ");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

template <FieldKind K>
Field<K>& Field<K>::operator-=(const Field& other) {
  if (!grid_->same_shape(*other.grid_)) throw std::invalid_argument("field grids differ");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

template <FieldKind K>
Field<K>& Field<K>::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

template class Field<FieldKind::kScalar>;
template class Field<FieldKind::kVector>;
template class Field<FieldKind::kStf>;

namespace {

void require_same(const SphereGrid& a, const SphereGrid& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("fields live on different grids");
}

}  // namespace

ScalarField squared_norm(const TangentVectorField& v) {
  ScalarField out(v.grid());
  auto a = v.component(0), b = v.component(1);
  auto o = out.component(0);
  for (std::size_t k = 0; k < o.size(); ++k) o[k] = a[k] * a[k] + b[k] * b[k];
  return out;
}

ScalarField squared_norm(const StfTensorField& t) {
  ScalarField out(t.grid());
  auto a = t.component(0), b = t.component(1);
  auto o = out.component(0);
  for (std::size_t k = 0; k < o.size(); ++k) o[k] = 2.0 * (a[k] * a[k] + b[k] * b[k]);
  return out;
}

namespace {

template <FieldKind K>
double inner_impl(const Field<K>& a, const Field<K>& b, double contraction) {
  require_same(a.g(), b.g());
  std::vector<double> prod(a.g().size(), 0.0);
  for (int c = 0; c < Field<K>::kComponents; ++c) {
    auto x = a.component(c), y = b.component(c);
    for (std::size_t k = 0; k < prod.size(); ++k) prod[k] += x[k] * y[k];
  }
  return contraction * a.g().integrate(prod);
}

}  // namespace

double inner(const ScalarField& a, const ScalarField& b) { return inner_impl(a, b, 1.0); }
double inner(const TangentVectorField& a, const TangentVectorField& b) { return inner_impl(a, b, 1.0); }
double inner(const StfTensorField& a, const StfTensorField& b) { return inner_impl(a, b, 2.0); }

double mean(const ScalarField& f) { return f.g().integrate(f.component(0)) / (4.0 * std::numbers::pi); }

TangentVectorField rotate(const TangentVectorField& v) {
  TangentVectorField out(v.grid());
  auto a = v.component(0), b = v.component(1);
  auto o0 = out.component(0), o1 = out.component(1);
  for (std::size_t k = 0; k < a.size(); ++k) {
    o0[k] = b[k];
    o1[k] = -a[k];
  }
  return out;
}

StfTensorField rotate(const StfTensorField& t) {
  StfTensorField out(t.grid());
  auto a = t.component(0), b = t.component(1);
  auto o0 = out.component(0), o1 = out.component(1);
  for (std::size_t k = 0; k < a.size(); ++k) {
    o0[k] = b[k];
    o1[k] = -a[k];
  }
  return out;
}

template <FieldKind K>
Field<K> roll_longitude(const Field<K>& f, int steps) {
  const auto& g = f.g();
  const int n = g.n_phi();
  const int s = ((steps % n) + n) % n;
  Field<K> out(f.grid());
  for (int c = 0; c < Field<K>::kComponents; ++c)
    for (int i = 0; i < g.n_theta(); ++i)
      for (int j = 0; j < n; ++j) out(c, i, (j + s) % n) = f(c, i, j);
  return out;
}

template ScalarField roll_longitude(const ScalarField&, int);
template TangentVectorField roll_longitude(const TangentVectorField&, int);
template StfTensorField roll_longitude(const StfTensorField&, int);

ScalarCoeffs::ScalarCoeffs(int l_max) : l_max_(l_max), a_(static_cast<std::size_t>((l_max + 1) * (l_max + 1)), 0.0) {
  if (l_max < 0) throw std::invalid_argument("ScalarCoeffs: negative l_max");
}

ParityCoeffs::ParityCoeffs(int l_max, int l_min) : l_max_(l_max), l_min_(l_min) {
  const int n = std::max(0, (l_max + 1) * (l_max + 1) - l_min * l_min);
  e_.assign(n, 0.0);
  b_.assign(n, 0.0);
}

double ParityCoeffs::sum_squares() const {
  double s = 0.0;
  for (double v : e_) s += v * v;
  for (double v : b_) s += v * v;
  return s;
}

}  // namespace emm
