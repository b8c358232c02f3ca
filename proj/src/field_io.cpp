#include "emmemory/field_io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "emmemory/errors.hpp"

namespace emm {

namespace {

constexpr char kFieldMagic[4] = {'E', 'M', 'M', '1'};

template <typename T>
void write_le(std::ostream& os, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
  if (!os) throw IoError("write failed");
}

template <typename T>
T read_le(std::istream& is) {
  unsigned char bytes[sizeof(T)];
  is.read(reinterpret_cast<char*>(bytes), sizeof(T));
  if (!is) throw IoError("unexpected end of field data");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T v;
  std::memcpy(&v, bytes, sizeof(T));
  return v;
}

}  // namespace

namespace le {
void write_i32(std::ostream& os, std::int32_t v) { write_le(os, v); }
void write_i64(std::ostream& os, std::int64_t v) { write_le(os, v); }
void write_f64(std::ostream& os, double v) { write_le(os, v); }
std::int32_t read_i32(std::istream& is) { return read_le<std::int32_t>(is); }
std::int64_t read_i64(std::istream& is) { return read_le<std::int64_t>(is); }
double read_f64(std::istream& is) { return read_le<double>(is); }
}  // namespace le

template <FieldKind K>
void write_field(std::ostream& os, const Field<K>& f) {
  os.write(kFieldMagic, 4);
  le::write_i32(os, static_cast<std::int32_t>(K));
  le::write_i32(os, f.g().l_max());
  le::write_i32(os, f.g().n_theta());
  le::write_i32(os, f.g().n_phi());
  for (double v : f.data()) le::write_f64(os, v);
}

template <FieldKind K>
Field<K> read_field(std::istream& is, const GridPtr& reuse) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kFieldMagic, 4) != 0) throw IoError("not an EMM1 field record");
  const auto kind = le::read_i32(is);
  if (kind != static_cast<std::int32_t>(K)) {
    throw IoError("field kind mismatch: expected " + std::to_string(static_cast<int>(K)) + ", found " +
                  std::to_string(kind));
  }
  const int l_max = le::read_i32(is);
  const int n_theta = le::read_i32(is);
  const int n_phi = le::read_i32(is);
  GridPtr grid;
  if (reuse && reuse->l_max() == l_max && reuse->n_theta() == n_theta && reuse->n_phi() == n_phi) {
    grid = reuse;
  } else {
    try {
      grid = make_grid(l_max, n_theta, n_phi);
    } catch (const std::invalid_argument& e) {
      throw IoError(std::string("invalid field header: ") + e.what());
    }
  }
  std::vector<double> data(Field<K>::kComponents * grid->size());
  for (double& v : data) v = le::read_f64(is);
  return Field<K>(grid, std::move(data));
}

template <FieldKind K>
void save_field(const std::filesystem::path& path, const Field<K>& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  write_field(os, f);
}

template <FieldKind K>
Field<K> load_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  return read_field<K>(is);
}

#define EMM_INSTANTIATE_IO(K)                                                   \
  template void write_field(std::ostream&, const Field<K>&);                   \
  template Field<K> read_field<K>(std::istream&, const GridPtr&);              \
  template void save_field(const std::filesystem::path&, const Field<K>&);     \
  template Field<K> load_field<K>(const std::filesystem::path&);

EMM_INSTANTIATE_IO(FieldKind::kScalar)
EMM_INSTANTIATE_IO(FieldKind::kVector)
EMM_INSTANTIATE_IO(FieldKind::kStf)

#undef EMM_INSTANTIATE_IO

}  // namespace emm
