#pragma once
//! \file field_io.hpp
//! \brief Little-endian binary field records.
//!
//! Record layout:
//!   char[4]  "EMM1"
//!   int32    kind (scalar 0, vector 1, stf 2)
//!   int32    l_max, n_theta, n_phi
//!   float64  components, each row-major [n_theta][n_phi]
//! The grid is rebuilt from the header on read.

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "emmemory/sphere.hpp"

namespace emm {

namespace le {
void write_i32(std::ostream& os, std::int32_t v);
void write_i64(std::ostream& os, std::int64_t v);
void write_f64(std::ostream& os, double v);
std::int32_t read_i32(std::istream& is);
std::int64_t read_i64(std::istream& is);
double read_f64(std::istream& is);
}  // namespace le

template <FieldKind K>
void write_field(std::ostream& os, const Field<K>& f);

// `reuse` is returned as the field's grid when the header matches its shape.
template <FieldKind K>
Field<K> read_field(std::istream& is, const GridPtr& reuse = nullptr);

template <FieldKind K>
void save_field(const std::filesystem::path& path, const Field<K>& f);

template <FieldKind K>
Field<K> load_field(const std::filesystem::path& path);

}  // namespace emm
