#include "ltd/cube_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "ltd/error.hpp"

namespace ltd {

namespace fs = std::filesystem;

namespace {

std::vector<unsigned char> slurp(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::Io, "read failed: " + path.string());
  return bytes;
}

void dump(const fs::path &path, const std::string &bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot create " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

std::uint64_t load_le(const unsigned char *p, int width) {
  std::uint64_t v = 0;
  for (int b = width - 1; b >= 0; --b) v = (v << 8) | p[b];
  return v;
}

void store_le(std::string &out, std::uint64_t v, int width) {
  for (int b = 0; b < width; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

struct PgmHeader {
  Index width = 0;
  Index height = 0;
  int maxval = 0;
  std::size_t data_offset = 0;
};

PgmHeader parse_pgm_header(const std::vector<unsigned char> &bytes, const fs::path &path) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
    throw Error(ErrorCode::BadMagic, "not a binary PGM (P5): " + path.string());
  std::size_t pos = 2;
  auto next_int = [&]() -> long {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
    long v = 0;
    const auto *first = reinterpret_cast<const char *>(bytes.data() + pos);
    const auto *last = reinterpret_cast<const char *>(bytes.data() + bytes.size());
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr == first)
      throw Error(ErrorCode::Truncated, "malformed PGM header: " + path.string());
    pos += static_cast<std::size_t>(ptr - first);
    return v;
  };
  PgmHeader h;
  h.width = next_int();
  h.height = next_int();
  const long maxval = next_int();
  if (h.width < 1 || h.height < 1 || maxval < 1 || maxval > 65535)
    throw Error(ErrorCode::InvalidInput, "unsupported PGM header values: " + path.string());
  h.maxval = static_cast<int>(maxval);
  if (pos >= bytes.size() || !std::isspace(bytes[pos]))
    throw Error(ErrorCode::Truncated, "malformed PGM header: " + path.string());
  h.data_offset = pos + 1;
  const std::size_t depth = h.maxval < 256 ? 1 : 2;
  const auto need = static_cast<std::size_t>(h.width * h.height) * depth;
  if (bytes.size() - h.data_offset < need)
    throw Error(ErrorCode::Truncated, "PGM pixel data is truncated: " + path.string());
  return h;
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), ptr);
}

} // namespace

Tensor3 read_cube(const fs::path &path) {
  const auto bytes = slurp(path);
  if (bytes.size() < 4) throw Error(ErrorCode::Truncated, "cube header is truncated: " + path.string());
  if (std::memcmp(bytes.data(), "HSC1", 4) != 0)
    throw Error(ErrorCode::BadMagic, "bad magic (expected HSC1): " + path.string());
  if (bytes.size() < 17) throw Error(ErrorCode::Truncated, "cube header is truncated: " + path.string());
  const auto n1 = static_cast<Index>(load_le(bytes.data() + 4, 4));
  const auto n2 = static_cast<Index>(load_le(bytes.data() + 8, 4));
  const auto n3 = static_cast<Index>(load_le(bytes.data() + 12, 4));
  const unsigned dtype = bytes[16];
  if (dtype > 1) throw Error(ErrorCode::InvalidInput, "unknown cube dtype " + std::to_string(dtype));
  if (n1 == 0 || n2 == 0 || n3 == 0) throw Error(ErrorCode::InvalidInput, "cube has a zero dimension");

  const int width = dtype == 0 ? 4 : 8;
  const auto count = static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2) * static_cast<std::size_t>(n3);
  const std::size_t payload = bytes.size() - 17;
  if (payload / static_cast<std::size_t>(width) < count)
    throw Error(ErrorCode::Truncated, "cube payload is truncated: " + path.string());
  if (payload != count * static_cast<std::size_t>(width))
    throw Error(ErrorCode::InvalidInput, "cube has trailing bytes after the payload: " + path.string());

  std::vector<double> values(count);
  const unsigned char *p = bytes.data() + 17;
  for (std::size_t n = 0; n < count; ++n, p += width) {
    const std::uint64_t raw = load_le(p, width);
    const double v = dtype == 0 ? static_cast<double>(std::bit_cast<float>(static_cast<std::uint32_t>(raw)))
                                : std::bit_cast<double>(raw);
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "cube contains non-finite values: " + path.string());
    values[n] = v;
  }
  return Tensor3(n1, n2, n3, std::move(values));
}

void write_cube(const fs::path &path, const Tensor3 &t, CubeDtype dtype) {
  if (!t.all_finite()) throw Error(ErrorCode::NonFinite, "refusing to write non-finite cube");
  std::string out = "HSC1";
  store_le(out, static_cast<std::uint64_t>(t.n1()), 4);
  store_le(out, static_cast<std::uint64_t>(t.n2()), 4);
  store_le(out, static_cast<std::uint64_t>(t.n3()), 4);
  out.push_back(static_cast<char>(dtype));
  for (double v : t.values()) {
    if (dtype == CubeDtype::F32)
      store_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)), 4);
    else
      store_le(out, std::bit_cast<std::uint64_t>(v), 8);
  }
  dump(path, out);
}

Tensor3 normalize_cube(const Tensor3 &t) {
  if (t.size() == 0) throw Error(ErrorCode::InvalidInput, "normalize_cube: empty cube");
  const auto [lo_it, hi_it] = std::minmax_element(t.values().begin(), t.values().end());
  const double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) throw Error(ErrorCode::DegenerateInput, "normalize_cube: cube is constant");
  Tensor3 out = t;
  for (double &v : out.values()) v = (v - lo) / (hi - lo);
  return out;
}

Map2D read_pgm(const fs::path &path) {
  const auto bytes = slurp(path);
  const PgmHeader h = parse_pgm_header(bytes, path);
  Map2D m(h.height, h.width);
  const unsigned char *p = bytes.data() + h.data_offset;
  for (Index i = 0; i < h.height; ++i)
    for (Index j = 0; j < h.width; ++j) {
      if (h.maxval < 256) {
        m(i, j) = *p++;
      } else {
        m(i, j) = (p[0] << 8) | p[1];
        p += 2;
      }
    }
  return m;
}

GroundTruth read_mask(const fs::path &path) {
  const auto bytes = slurp(path);
  const PgmHeader h = parse_pgm_header(bytes, path);
  if (h.maxval > 255) throw Error(ErrorCode::InvalidInput, "mask must be an 8-bit PGM: " + path.string());
  GroundTruth gt(h.height, h.width);
  const unsigned char *p = bytes.data() + h.data_offset;
  for (std::size_t n = 0; n < gt.labels.size(); ++n) gt.labels[n] = p[n] > 127 ? 1 : 0;
  return gt;
}

void write_mask(const fs::path &path, const GroundTruth &gt) {
  std::string out = "P5\n" + std::to_string(gt.n2) + " " + std::to_string(gt.n1) + "\n255\n";
  for (auto l : gt.labels) out.push_back(static_cast<char>(l ? 255 : 0));
  dump(path, out);
}

void write_pgm16(const fs::path &path, const Map2D &m) {
  if (!m.allFinite()) throw Error(ErrorCode::NonFinite, "refusing to write a non-finite map");
  std::string out = "P5\n" + std::to_string(m.cols()) + " " + std::to_string(m.rows()) + "\n65535\n";
  const double lo = m.size() ? m.minCoeff() : 0.0;
  const double hi = m.size() ? m.maxCoeff() : 0.0;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) {
      const double unit = hi > lo ? (m(i, j) - lo) / (hi - lo) : 0.0;
      const auto v = static_cast<unsigned>(std::lround(std::clamp(unit, 0.0, 1.0) * 65535.0));
      out.push_back(static_cast<char>(v >> 8));
      out.push_back(static_cast<char>(v & 0xff));
    }
  dump(path, out);
}

void write_csv_map(const fs::path &path, const Map2D &m) {
  std::string out;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out.push_back(',');
      out += format_double(m(i, j));
    }
    out.push_back('\n');
  }
  dump(path, out);
}

Map2D read_csv_map(const fs::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    const char *p = line.data();
    const char *end = p + line.size();
    while (true) {
      while (p < end && *p == ' ') ++p;
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(p, end, v);
      if (ec != std::errc() || ptr == p)
        throw Error(ErrorCode::InvalidInput, "malformed number in " + path.string() + ": " + line);
      row.push_back(v);
      p = ptr;
      while (p < end && *p == ' ') ++p;
      if (p == end) break;
      if (*p != ',') throw Error(ErrorCode::InvalidInput, "malformed row in " + path.string() + ": " + line);
      ++p;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw Error(ErrorCode::InvalidInput, "ragged rows in " + path.string());
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::InvalidInput, "no data in " + path.string());
  Map2D m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  if (!m.allFinite()) throw Error(ErrorCode::NonFinite, "non-finite score in " + path.string());
  return m;
}

} // namespace ltd
