#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "filmcascade/params.hpp"

namespace filmcascade {

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// In-memory image of a "TFLM" file. Arrays are x-major (index i*ny + j).
struct Snapshot {
  std::uint32_t nx = 0;
  std::uint32_t ny = 0;
  double time = 0.0;
  double delta = 0.0, epsilon = 0.0, reynolds = 0.0, weber = 0.0, alpha = 0.0;
  std::vector<double> eta, u, v, p;
};

/// Layout: "TFLM", u32 version = 1, u32 nx, u32 ny, f64 time, f64 delta,
/// epsilon, R, W, alpha, then f64 eta[nx], u[nx*ny], v[nx*ny], p[nx*ny];
/// all little-endian.
void write_snapshot(const std::string& path, const Snapshot& s);
Snapshot read_snapshot(const std::string& path);
std::vector<unsigned char> encode_snapshot(const Snapshot& s);
Snapshot decode_snapshot(const std::vector<unsigned char>& bytes);

}  // namespace filmcascade
