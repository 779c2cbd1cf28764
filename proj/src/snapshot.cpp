#include "filmcascade/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace filmcascade {

namespace {

constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::vector<unsigned char>& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char b[sizeof(T)];
  std::memcpy(b, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    std::reverse(std::begin(b), std::end(b));
  out.insert(out.end(), std::begin(b), std::end(b));
}

template <typename T>
T take(const std::vector<unsigned char>& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw SnapshotError("TFLM: truncated file");
  unsigned char b[sizeof(T)];
  std::memcpy(b, in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    std::reverse(std::begin(b), std::end(b));
  pos += sizeof(T);
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

}  // namespace

std::vector<unsigned char> encode_snapshot(const Snapshot& s) {
  const std::size_t nb = static_cast<std::size_t>(s.nx) * s.ny;
  if (s.eta.size() != s.nx || s.u.size() != nb || s.v.size() != nb || s.p.size() != nb)
    throw SnapshotError("TFLM: array sizes do not match nx, ny");
  std::vector<unsigned char> out;
  out.reserve(4 + 12 + 48 + 8 * (s.nx + 3 * nb));
  for (char c : {'T', 'F', 'L', 'M'}) out.push_back(static_cast<unsigned char>(c));
  put(out, kVersion);
  put(out, s.nx);
  put(out, s.ny);
  for (double d : {s.time, s.delta, s.epsilon, s.reynolds, s.weber, s.alpha}) put(out, d);
  for (const auto* arr : {&s.eta, &s.u, &s.v, &s.p})
    for (double d : *arr) put(out, d);
  return out;
}

Snapshot decode_snapshot(const std::vector<unsigned char>& in) {
  if (in.size() < 4 || std::memcmp(in.data(), "TFLM", 4) != 0)
    throw SnapshotError("TFLM: bad magic");
  std::size_t pos = 4;
  const auto version = take<std::uint32_t>(in, pos);
  if (version != kVersion) throw SnapshotError("TFLM: unsupported version");
  Snapshot s;
  s.nx = take<std::uint32_t>(in, pos);
  s.ny = take<std::uint32_t>(in, pos);
  s.time = take<double>(in, pos);
  s.delta = take<double>(in, pos);
  s.epsilon = take<double>(in, pos);
  s.reynolds = take<double>(in, pos);
  s.weber = take<double>(in, pos);
  s.alpha = take<double>(in, pos);
  const std::size_t nb = static_cast<std::size_t>(s.nx) * s.ny;
  if (in.size() != pos + 8 * (s.nx + 3 * nb))
    throw SnapshotError("TFLM: payload size mismatch");
  auto read_arr = [&](std::vector<double>& a, std::size_t n) {
    a.resize(n);
    for (auto& d : a) d = take<double>(in, pos);
  };
  read_arr(s.eta, s.nx);
  read_arr(s.u, nb);
  read_arr(s.v, nb);
  read_arr(s.p, nb);
  return s;
}

void write_snapshot(const std::string& path, const Snapshot& s) {
  const auto bytes = encode_snapshot(s);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw SnapshotError("TFLM: cannot open '" + path + "' for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!f) throw SnapshotError("TFLM: write failed for '" + path + "'");
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw SnapshotError("TFLM: cannot open '" + path + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(f)),
                                   std::istreambuf_iterator<char>());
  return decode_snapshot(bytes);
}

}  // namespace filmcascade
