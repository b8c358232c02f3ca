#include "emmemory/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "emmemory/errors.hpp"
#include "emmemory/field_io.hpp"

namespace emm {

const char* to_string(TrainKind kind) {
  switch (kind) {
    case TrainKind::kXi: return "XI";
    case TrainKind::kAw: return "AW";
    case TrainKind::kAf: return "AF";
  }
  return "?";
}

void UGrid::validate() const {
  if (!(du > 0.0) || !std::isfinite(du)) throw std::invalid_argument("u-grid step must be positive");
  if (n < 1) throw std::invalid_argument("u-grid needs at least one sample");
  if (!std::isfinite(u0)) throw std::invalid_argument("u-grid start must be finite");
}

template <FieldKind K>
double Train<K>::peak() const {
  double p = 0.0;
  for (const auto& s : samples) p = std::max(p, s.max_norm());
  return p;
}

template struct Train<FieldKind::kStf>;
template struct Train<FieldKind::kVector>;

namespace {

double gaussian(double u, double center, double width) {
  const double z = (u - center) / width;
  return std::exp(-0.5 * z * z);
}

void check_pulse(const PulseSpec& spec, const UGrid& u, int l_min) {
  u.validate();
  if (!(spec.width > 0.0)) throw std::invalid_argument("pulse width must be positive");
  if (spec.l < l_min) throw std::invalid_argument("pulse degree l is below the minimum for this field rank");
  const double reach = kSupportWidths * spec.width;
  const double slack = 1e-12 * std::max(1.0, std::abs(spec.center) + reach);
  if (u.u0 > spec.center - reach + slack || u.back() < spec.center + reach - slack) {
    throw std::invalid_argument("u-grid does not cover the pulse support (center +/- 6 widths)");
  }
}

template <FieldKind K, typename Basis>
Train<K> gen_train(std::span<const PulseSpec> specs, const GridPtr& grid, const UGrid& u, TrainKind kind, int l_min,
                   Basis basis) {
  u.validate();
  Train<K> train{kind, u, grid, {}};
  train.samples.assign(u.n, Field<K>(grid));
  for (const auto& spec : specs) {
    check_pulse(spec, u, l_min);
    const Field<K> shape = basis(spec);
    for (int k = 0; k < u.n; ++k) {
      const double s = spec.amplitude * gaussian(u.at(k), spec.center, spec.width);
      if (s == 0.0) continue;
      auto out = train.samples[k].data();
      auto in = shape.data();
      for (std::size_t q = 0; q < out.size(); ++q) out[q] += s * in[q];
    }
  }
  return train;
}

template <FieldKind K>
std::vector<Field<K>> cumulative(const std::vector<Field<K>>& y, double dx, double scale, const Field<K>& start) {
  std::vector<Field<K>> out;
  out.reserve(y.size());
  out.push_back(start);
  for (std::size_t k = 1; k < y.size(); ++k) {
    Field<K> next = out.back();
    auto o = next.data();
    auto a = y[k - 1].data(), b = y[k].data();
    for (std::size_t q = 0; q < o.size(); ++q) o[q] += scale * 0.5 * dx * (a[q] + b[q]);
    out.push_back(std::move(next));
  }
  return out;
}

}  // namespace

TensorTrain gen_xi_pulse(const PulseSpec& spec, const GridPtr& grid, const UGrid& u) {
  return gen_xi_train(std::span<const PulseSpec>(&spec, 1), grid, u);
}

TensorTrain gen_xi_train(std::span<const PulseSpec> specs, const GridPtr& grid, const UGrid& u) {
  return gen_train<FieldKind::kStf>(specs, grid, u, TrainKind::kXi, 2, [&](const PulseSpec& s) {
    return tensor_basis(s.l, s.m, s.parity, grid);
  });
}

VectorTrain gen_af_pulse(const PulseSpec& spec, const GridPtr& grid, const UGrid& u) {
  return gen_af_train(std::span<const PulseSpec>(&spec, 1), grid, u);
}

VectorTrain gen_af_train(std::span<const PulseSpec> specs, const GridPtr& grid, const UGrid& u) {
  return gen_train<FieldKind::kVector>(specs, grid, u, TrainKind::kAf, 1, [&](const PulseSpec& s) {
    return vector_basis(s.l, s.m, s.parity, grid);
  });
}

TensorTrain aw_from_xi(const TensorTrain& xi) {
  const int n = xi.size();
  if (n < 3) throw std::invalid_argument("aw_from_xi needs at least three samples");
  TensorTrain aw{TrainKind::kAw, xi.u, xi.grid, {}};
  aw.samples.assign(n, StfTensorField(xi.grid));
  const double h = xi.u.du;
  const double scale = -4.0 / (2.0 * h);
  for (int k = 0; k < n; ++k) {
    auto o = aw.samples[k].data();
    // Stencil coefficients over (k-1, k, k+1) or the one-sided variants.
    int i0, i1, i2;
    double c0, c1, c2;
    if (k == 0) {
      i0 = 0, i1 = 1, i2 = 2, c0 = -3.0, c1 = 4.0, c2 = -1.0;
    } else if (k == n - 1) {
      i0 = n - 3, i1 = n - 2, i2 = n - 1, c0 = 1.0, c1 = -4.0, c2 = 3.0;
    } else {
      i0 = k - 1, i1 = k, i2 = k + 1, c0 = -1.0, c1 = 0.0, c2 = 1.0;
    }
    auto a = xi.samples[i0].data(), b = xi.samples[i1].data(), c = xi.samples[i2].data();
    for (std::size_t q = 0; q < o.size(); ++q) o[q] = scale * (c0 * a[q] + c1 * b[q] + c2 * c[q]);
  }
  return aw;
}

TensorTrain integrate_xi(const TensorTrain& aw) {
  if (aw.samples.empty()) throw std::invalid_argument("integrate_xi: empty train");
  for (const auto& s : aw.samples)
    if (!s.all_finite()) throw std::invalid_argument("integrate_xi: non-finite A_W sample");
  return TensorTrain{TrainKind::kXi, aw.u, aw.grid,
                     cumulative(aw.samples, aw.u.du, -0.25, StfTensorField(aw.grid))};
}

SigmaHistory integrate_sigma(const TensorTrain& xi, const StfTensorField& sigma_minus) {
  if (xi.samples.empty()) throw std::invalid_argument("integrate_sigma: empty train");
  if (!sigma_minus.g().same_shape(*xi.grid)) throw std::invalid_argument("Sigma^- lives on a different grid");
  auto history = cumulative(xi.samples, xi.u.du, -1.0, sigma_minus);
  StfTensorField plus = history.back();
  // Accumulate the jump separately so it is independent of Sigma^-.
  StfTensorField delta(xi.grid);
  const double h = xi.u.du;
  for (std::size_t k = 0; xi.samples.size() > 1 && k < xi.samples.size(); ++k) {
    const double w = (k == 0 || k + 1 == xi.samples.size()) ? 0.5 * h : h;
    auto o = delta.data();
    auto a = xi.samples[k].data();
    for (std::size_t q = 0; q < o.size(); ++q) o[q] -= w * a[q];
  }
  return {std::move(history), std::move(plus), std::move(delta)};
}

SigmaHistory integrate_sigma(const TensorTrain& xi) { return integrate_sigma(xi, StfTensorField(xi.grid)); }

void check_compact_support(const TensorTrain& xi) {
  if (xi.samples.empty()) throw InvariantError("empty Xi train");
  const double peak = xi.peak();
  if (peak == 0.0) return;
  const double ends = std::max(xi.samples.front().max_norm(), xi.samples.back().max_norm());
  if (ends >= kCompactSupportTolerance * peak) {
    throw InvariantError("Xi does not vanish at the train ends (end/peak = " + std::to_string(ends / peak) + ")");
  }
}

void check_consistent(const TensorTrain& xi, const VectorTrain* af) {
  for (const auto& s : xi.samples)
    if (!s.g().same_shape(*xi.grid)) throw std::invalid_argument("Xi samples use different grids");
  if (!af) return;
  if (!af->grid->same_shape(*xi.grid)) throw std::invalid_argument("Xi and A_F trains use different grids");
  if (af->u.n != xi.u.n || af->u.u0 != xi.u.u0 || af->u.du != xi.u.du || af->size() != xi.size()) {
    throw std::invalid_argument("Xi and A_F trains use different u-grids");
  }
}

std::vector<std::array<double, 2>> sample_direction(const TensorTrain& train, double theta, double phi) {
  std::vector<std::array<double, 2>> out;
  out.reserve(train.samples.size());
  for (const auto& s : train.samples) out.push_back(tensor_evaluate(tensor_analyze(s), theta, phi));
  return out;
}

std::vector<std::array<double, 2>> sample_direction(const VectorTrain& train, double theta, double phi) {
  std::vector<std::array<double, 2>> out;
  out.reserve(train.samples.size());
  for (const auto& s : train.samples) out.push_back(vector_evaluate(vector_analyze(s), theta, phi));
  return out;
}

double trapezoid(std::span<const double> y, double dx) {
  if (y.size() < 2) return 0.0;
  double s = 0.5 * (y.front() + y.back());
  for (std::size_t k = 1; k + 1 < y.size(); ++k) s += y[k];
  return s * dx;
}

std::vector<double> cumulative_trapezoid(std::span<const double> y, double dx) {
  std::vector<double> out(y.size(), 0.0);
  for (std::size_t k = 1; k < y.size(); ++k) out[k] = out[k - 1] + 0.5 * dx * (y[k - 1] + y[k]);
  return out;
}

// ---------------------------------------------------------------------------

namespace {
constexpr char kTrainMagic[4] = {'E', 'M', 'T', '1'};

FieldKind field_kind_of(TrainKind kind) {
  return kind == TrainKind::kAf ? FieldKind::kVector : FieldKind::kStf;
}
}  // namespace

template <FieldKind K>
void write_train(std::ostream& os, const Train<K>& train) {
  os.write(kTrainMagic, 4);
  le::write_i32(os, static_cast<std::int32_t>(train.kind));
  le::write_f64(os, train.u.u0);
  le::write_f64(os, train.u.du);
  le::write_i64(os, static_cast<std::int64_t>(train.samples.size()));
  for (const auto& s : train.samples) write_field(os, s);
}

template <FieldKind K>
Train<K> read_train(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kTrainMagic, 4) != 0) throw IoError("not an EMT1 train file");
  const auto tag = le::read_i32(is);
  if (tag < 0 || tag > 2) throw IoError("unknown train kind tag " + std::to_string(tag));
  const auto kind = static_cast<TrainKind>(tag);
  if (field_kind_of(kind) != K) {
    throw IoError(std::string("train kind ") + to_string(kind) + " does not hold the requested field type");
  }
  UGrid u;
  u.u0 = le::read_f64(is);
  u.du = le::read_f64(is);
  const auto n = le::read_i64(is);
  if (n < 1 || n > (std::int64_t{1} << 31)) throw IoError("invalid train length");
  u.n = static_cast<int>(n);
  try {
    u.validate();
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("invalid train header: ") + e.what());
  }
  Train<K> train{kind, u, nullptr, {}};
  train.samples.reserve(u.n);
  for (int k = 0; k < u.n; ++k) {
    train.samples.push_back(read_field<K>(is, train.grid));
    if (!train.grid) train.grid = train.samples.back().grid();
    if (train.samples.back().grid() != train.grid) throw IoError("train samples use different grids");
  }
  return train;
}

template <FieldKind K>
void save_train(const std::filesystem::path& path, const Train<K>& train) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  write_train(os, train);
}

template <FieldKind K>
Train<K> load_train(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  return read_train<K>(is);
}

#define EMM_INSTANTIATE_TRAIN_IO(K)                                           \
  template void write_train(std::ostream&, const Train<K>&);                 \
  template Train<K> read_train<K>(std::istream&);                            \
  template void save_train(const std::filesystem::path&, const Train<K>&);   \
  template Train<K> load_train<K>(const std::filesystem::path&);

EMM_INSTANTIATE_TRAIN_IO(FieldKind::kStf)
EMM_INSTANTIATE_TRAIN_IO(FieldKind::kVector)

#undef EMM_INSTANTIATE_TRAIN_IO

}  // namespace emm
