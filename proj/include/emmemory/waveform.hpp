#pragma once
//! \file waveform.hpp
//! \brief Radiative data at null infinity sampled on a uniform retarded-time
//! grid, synthetic pulse generators, and the u-evolution relations
//!   dSigma/du = -Xi,   dXi/du = -A_W / 4.
//!
//! Units are geometric (G = c = 1, lengths in cm): u in cm, Xi and A_F
//! dimensionless, A_W in 1/cm, Sigma in cm.

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "emmemory/sphere.hpp"

namespace emm {

enum class TrainKind : std::int32_t { kXi = 0, kAw = 1, kAf = 2 };

const char* to_string(TrainKind kind);

struct UGrid {
  double u0 = 0.0;
  double du = 1.0;
  int n = 0;

  double at(int k) const { return u0 + du * k; }
  double back() const { return at(n - 1); }
  void validate() const;
};

// Trains are immutable once built; every sample shares one grid.
template <FieldKind K>
struct Train {
  TrainKind kind;
  UGrid u;
  GridPtr grid;
  std::vector<Field<K>> samples;

  int size() const { return static_cast<int>(samples.size()); }
  double peak() const;
};

using TensorTrain = Train<FieldKind::kStf>;
using VectorTrain = Train<FieldKind::kVector>;

// Gaussian-in-u pulse carrying one angular mode.
struct PulseSpec {
  double amplitude = 1.0;
  double center = 0.0;
  double width = 1.0;
  int l = 2;
  int m = 0;
  Parity parity = Parity::kElectric;
};

inline constexpr double kSupportWidths = 6.0;
inline constexpr double kCompactSupportTolerance = 1e-6;

// Xi(u) = sum of amplitude * exp(-(u-u_c)^2 / 2 tau^2) * tensor_basis(l, m, parity).
TensorTrain gen_xi_pulse(const PulseSpec& spec, const GridPtr& grid, const UGrid& u);
TensorTrain gen_xi_train(std::span<const PulseSpec> specs, const GridPtr& grid, const UGrid& u);
// A_F(u) = sum of amplitude * exp(...) * vector_basis(l, m, parity).
VectorTrain gen_af_pulse(const PulseSpec& spec, const GridPtr& grid, const UGrid& u);
VectorTrain gen_af_train(std::span<const PulseSpec> specs, const GridPtr& grid, const UGrid& u);

// A_W = -4 dXi/du; central differences inside, one-sided second order at the ends.
TensorTrain aw_from_xi(const TensorTrain& xi);
// Xi(u) = -1/4 * cumulative trapezoid of A_W, Xi(u0) = 0.
TensorTrain integrate_xi(const TensorTrain& aw);

struct SigmaHistory {
  std::vector<StfTensorField> sigma;
  StfTensorField sigma_plus;
  StfTensorField delta;  // sigma_plus - sigma_minus
};

// Sigma(u) = Sigma^- - cumulative trapezoid of Xi.
SigmaHistory integrate_sigma(const TensorTrain& xi, const StfTensorField& sigma_minus);
SigmaHistory integrate_sigma(const TensorTrain& xi);

// Throws InvariantError unless the first and last Xi samples are below
// kCompactSupportTolerance times the peak.
void check_compact_support(const TensorTrain& xi);
// Throws std::invalid_argument on inconsistent trains (mismatched grids or sizes).
void check_consistent(const TensorTrain& xi, const VectorTrain* af);

// Frame components of every sample at one sky direction.
std::vector<std::array<double, 2>> sample_direction(const TensorTrain& train, double theta, double phi);
std::vector<std::array<double, 2>> sample_direction(const VectorTrain& train, double theta, double phi);

// Trapezoid rule and its cumulative form on a uniform grid.
double trapezoid(std::span<const double> y, double dx);
std::vector<double> cumulative_trapezoid(std::span<const double> y, double dx);

// Train record: "EMT1", int32 kind, float64 u0, float64 du, int64 n_u,
// then n_u field records.
template <FieldKind K>
void write_train(std::ostream& os, const Train<K>& train);
template <FieldKind K>
Train<K> read_train(std::istream& is);
template <FieldKind K>
void save_train(const std::filesystem::path& path, const Train<K>& train);
template <FieldKind K>
Train<K> load_train(const std::filesystem::path& path);

}  // namespace emm
