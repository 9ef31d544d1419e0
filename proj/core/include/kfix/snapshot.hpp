#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace kfix {

/**
 * Binary snapshot of one space x velocity slice. Fixed little-endian
 * layout, bit-exact on round trip:
 *
 *   offset  size  field
 *        0     5  magic "KFIX1"
 *        5     1  u8  dim
 *        6     2  u8  reserved (0)
 *        8     4  u32 spatial nodes per axis
 *       12     4  u32 velocity nodes per axis
 *       16     4  u32 time index
 *       20     4  u32 reserved (0)
 *       24     8  f64 velocity extent
 *       32     8  f64 spatial period
 *       40     8  f64 time value
 *       48     8  u64 payload count (= nx^dim * nv^dim)
 *       56     -  f64 payload, row-major [space][velocity]
 */
struct SnapshotHeader {
  int dim = 3;
  int spatial_nodes = 1;
  int velocity_nodes = 0;
  std::uint32_t time_index = 0;
  double velocity_extent = 0.0;
  double spatial_period = 1.0;
  double time_value = 0.0;
  std::uint64_t count = 0;
};

void write_snapshot(const std::string& path, const SnapshotHeader& header,
                    std::span<const double> payload);

// Throws std::runtime_error on bad magic, malformed header or truncation.
std::pair<SnapshotHeader, std::vector<double>> read_snapshot(const std::string& path);

}  // namespace kfix
