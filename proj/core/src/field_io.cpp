#include "odl/field_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "odl/errors.hpp"

namespace odl {
namespace {

constexpr char kMagic[4] = {'O', 'D', 'L', 'F'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeader = 40;

template <typename T>
void put_le(std::string& out, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  out.append(reinterpret_cast<const char*>(b), sizeof(T));
}

template <typename T>
T get_le(const std::string& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw Error(ErrorCode::parse, "truncated field dump");
  unsigned char b[sizeof(T)];
  std::memcpy(b, in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  T v;
  std::memcpy(&v, b, sizeof(T));
  pos += sizeof(T);
  return v;
}

void append_number(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "inf";
    return;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

std::string field_to_csv(const DistanceField& field) {
  const Grid& g = field.grid;
  std::string out = "x,y,d\n";
  out.reserve(out.size() + g.size() * 40);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const Vec2 p = g.point(i, j);
      append_number(out, p.x);
      out += ',';
      append_number(out, p.y);
      out += ',';
      append_number(out, field.at(i, j));
      out += '\n';
    }
  }
  return out;
}

std::string field_to_binary(const DistanceField& field) {
  const Grid& g = field.grid;
  std::string out;
  out.reserve(kHeader + g.size() * 9);
  out.append(kMagic, 4);
  put_le<std::uint32_t>(out, kVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.nx));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.ny));
  put_le<double>(out, g.h);
  put_le<double>(out, g.origin.x);
  put_le<double>(out, g.origin.y);
  for (double v : field.values) put_le<double>(out, v);
  for (CellType c : g.mask) out.push_back(static_cast<char>(c));
  return out;
}

DistanceField field_from_binary(const std::string& bytes) {
  if (bytes.size() < kHeader || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::parse, "not an ODLF field dump");
  }
  std::size_t pos = 4;
  const auto version = get_le<std::uint32_t>(bytes, pos);
  if (version != kVersion) throw Error(ErrorCode::parse, "unsupported ODLF version");
  DistanceField f;
  f.grid.nx = static_cast<int>(get_le<std::uint32_t>(bytes, pos));
  f.grid.ny = static_cast<int>(get_le<std::uint32_t>(bytes, pos));
  f.grid.h = get_le<double>(bytes, pos);
  f.grid.origin.x = get_le<double>(bytes, pos);
  f.grid.origin.y = get_le<double>(bytes, pos);
  const std::size_t n = f.grid.size();
  if (f.grid.nx <= 0 || f.grid.ny <= 0 || bytes.size() != kHeader + n * 9) {
    throw Error(ErrorCode::parse, "field dump size does not match its header");
  }
  f.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) f.values[k] = get_le<double>(bytes, pos);
  f.grid.mask.resize(n);
  f.status.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto c = static_cast<unsigned char>(bytes[pos++]);
    if (c > 2) throw Error(ErrorCode::parse, "invalid cell type in field dump");
    f.grid.mask[k] = static_cast<CellType>(c);
    f.status[k] = std::isfinite(f.values[k]) ? NodeStatus::accepted : NodeStatus::far;
  }
  f.solver = "loaded";
  return f;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(ErrorCode::io, "cannot open " + tmp.string() + " for writing");
    os.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!os) throw Error(ErrorCode::io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::io, "cannot rename into " + target.string());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::io, "cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace odl
