#include "kfix/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace kfix {

namespace {

constexpr char kMagic[5] = {'K', 'F', 'I', 'X', '1'};
constexpr std::size_t kHeaderSize = 56;

void put_u32(std::vector<unsigned char>& buf, std::size_t at, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf[at + static_cast<std::size_t>(i)] =
      static_cast<unsigned char>((v >> (8 * i)) & 0xff);
}

void put_u64(std::vector<unsigned char>& buf, std::size_t at, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf[at + static_cast<std::size_t>(i)] =
      static_cast<unsigned char>((v >> (8 * i)) & 0xff);
}

void put_f64(std::vector<unsigned char>& buf, std::size_t at, double v) {
  put_u64(buf, at, std::bit_cast<std::uint64_t>(v));
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

double get_f64(const unsigned char* p) { return std::bit_cast<double>(get_u64(p)); }

}  // namespace

void write_snapshot(const std::string& path, const SnapshotHeader& header,
                    std::span<const double> payload) {
  if (payload.size() != header.count)
    throw std::invalid_argument("snapshot: payload length does not match header count");

  std::vector<unsigned char> buf(kHeaderSize + 8 * payload.size());
  std::memcpy(buf.data(), kMagic, 5);
  buf[5] = static_cast<unsigned char>(header.dim);
  buf[6] = 0;
  buf[7] = 0;
  put_u32(buf, 8, static_cast<std::uint32_t>(header.spatial_nodes));
  put_u32(buf, 12, static_cast<std::uint32_t>(header.velocity_nodes));
  put_u32(buf, 16, header.time_index);
  put_u32(buf, 20, 0);
  put_f64(buf, 24, header.velocity_extent);
  put_f64(buf, 32, header.spatial_period);
  put_f64(buf, 40, header.time_value);
  put_u64(buf, 48, header.count);
  for (std::size_t i = 0; i < payload.size(); ++i)
    put_f64(buf, kHeaderSize + 8 * i, payload[i]);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("snapshot: cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw std::runtime_error("snapshot: short write to '" + path + "'");
}

std::pair<SnapshotHeader, std::vector<double>> read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("snapshot: cannot open '" + path + "'");
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  if (buf.size() < kHeaderSize) throw std::runtime_error("snapshot: truncated header");
  if (std::memcmp(buf.data(), kMagic, 5) != 0)
    throw std::runtime_error("snapshot: bad magic in '" + path + "'");

  SnapshotHeader h;
  h.dim = buf[5];
  h.spatial_nodes = static_cast<int>(get_u32(buf.data() + 8));
  h.velocity_nodes = static_cast<int>(get_u32(buf.data() + 12));
  h.time_index = get_u32(buf.data() + 16);
  h.velocity_extent = get_f64(buf.data() + 24);
  h.spatial_period = get_f64(buf.data() + 32);
  h.time_value = get_f64(buf.data() + 40);
  h.count = get_u64(buf.data() + 48);

  if (buf.size() != kHeaderSize + 8 * h.count)
    throw std::runtime_error("snapshot: payload length does not match header count");
  std::vector<double> payload(h.count);
  for (std::size_t i = 0; i < payload.size(); ++i)
    payload[i] = get_f64(buf.data() + kHeaderSize + 8 * i);
  return {h, std::move(payload)};
}

}  // namespace kfix
