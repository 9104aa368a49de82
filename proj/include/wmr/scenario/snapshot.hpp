// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wigner-mrsolve Authors

#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "wmr/core/error.hpp"
#include "wmr/phase_space/field.hpp"

namespace wmr::scenario {

enum class SnapshotFormat { csv, pgm };

/// Writes `contents` to `path` through a sibling temporary file and a rename, so readers
/// never observe a partial file.
inline void write_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) fail(ErrorKind::io, "cannot open " + tmp.string() + " for writing");
    os.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    os.flush();
    if (!os) fail(ErrorKind::io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorKind::io, "cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorKind::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

namespace detail {

inline std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(std::string_view s, const std::string& context) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) fail(ErrorKind::io, context + ": bad number '" + std::string(s) + "'");
  return v;
}

}  // namespace detail

/// Header lines `# key = value` (grid bounds, level, time, hbar), then 2^J rows of 2^J
/// values: row i holds W(q_i, p_0..p_{n-1}). Values carry 17 significant digits.
inline std::string snapshot_csv(const phase::WignerField& w, double hbar) {
  std::string out;
  out += "# wigner-mrsolve snapshot\n";
  out += "# q_min = " + detail::g17(w.grid.q_min) + "\n";
  out += "# q_max = " + detail::g17(w.grid.q_max) + "\n";
  out += "# p_min = " + detail::g17(w.grid.p_min) + "\n";
  out += "# p_max = " + detail::g17(w.grid.p_max) + "\n";
  out += "# level = " + std::to_string(w.grid.level) + "\n";
  out += "# time = " + detail::g17(w.time) + "\n";
  out += "# hbar = " + detail::g17(hbar) + "\n";
  const std::size_t n = w.grid.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j) out += ',';
      out += detail::g17(w.values(i, j));
    }
    out += '\n';
  }
  return out;
}

struct CsvSnapshot {
  phase::WignerField field;
  double hbar = 1.0;
};

inline CsvSnapshot parse_snapshot_csv(std::string_view text, const std::string& context = "snapshot") {
  CsvSnapshot out;
  bool have_level = false;
  std::vector<std::vector<double>> rows;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) continue;
      std::string key(line.substr(1, eq - 1));
      key.erase(std::remove(key.begin(), key.end(), ' '), key.end());
      const auto value = line.substr(eq + 1);
      auto& g = out.field.grid;
      if (key == "q_min") g.q_min = detail::parse_double(value, context);
      else if (key == "q_max") g.q_max = detail::parse_double(value, context);
      else if (key == "p_min") g.p_min = detail::parse_double(value, context);
      else if (key == "p_max") g.p_max = detail::parse_double(value, context);
      else if (key == "time") out.field.time = detail::parse_double(value, context);
      else if (key == "hbar") out.hbar = detail::parse_double(value, context);
      else if (key == "level") {
        g.level = static_cast<int>(detail::parse_double(value, context));
        have_level = true;
      }
      continue;
    }
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      row.push_back(detail::parse_double(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start), context));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  if (!have_level) fail(ErrorKind::io, context + ": missing '# level' header");
  try {
    out.field.grid.validate();
  } catch (const Error& e) {
    fail(ErrorKind::io, context + ": " + e.what());
  }
  const std::size_t n = out.field.grid.size();
  if (rows.size() != n) fail(ErrorKind::io, context + ": expected " + std::to_string(n) + " rows, found " + std::to_string(rows.size()));
  out.field.values = Grid2D(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) fail(ErrorKind::io, context + ": row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) + " values");
    for (std::size_t j = 0; j < n; ++j) out.field.values(i, j) = rows[i][j];
  }
  return out;
}

inline CsvSnapshot read_snapshot_csv(const std::filesystem::path& path) {
  return parse_snapshot_csv(read_file(path), path.string());
}

/// Linear map [lo, hi] -> [0, 65535]; lo == hi sends every sample to 0.
struct PgmMapping {
  double lo = 0.0;
  double hi = 0.0;
  double value(std::uint16_t level) const { return hi > lo ? lo + (hi - lo) * level / 65535.0 : lo; }
  std::uint16_t level(double v) const {
    if (!(hi > lo)) return 0;
    const double x = std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
    return static_cast<std::uint16_t>(std::lround(x * 65535.0));
  }
};

/// 16-bit big-endian P5. Image column i is q index i; image row r is p index n-1-r, so
/// momentum increases upward. The comment line records the mapping with 17 digits.
inline std::string snapshot_pgm(const phase::WignerField& w) {
  const std::size_t n = w.grid.size();
  PgmMapping m;
  const auto [mn, mx] = std::minmax_element(w.values.flat().begin(), w.values.flat().end());
  m.lo = *mn;
  m.hi = *mx;
  std::string out = "P5\n# wigner-mrsolve min=" + detail::g17(m.lo) + " max=" + detail::g17(m.hi) + " time=" +
                    detail::g17(w.time) + "\n" + std::to_string(n) + " " + std::to_string(n) + "\n65535\n";
  out.reserve(out.size() + 2 * n * n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t j = n - 1 - r;
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint16_t v = m.level(w.values(i, j));
      out += static_cast<char>(v >> 8);
      out += static_cast<char>(v & 0xff);
    }
  }
  return out;
}

struct PgmImage {
  std::size_t width = 0;
  std::size_t height = 0;
  PgmMapping mapping;
  std::vector<std::uint16_t> pixels;  ///< row-major, top row first

  /// Field value for grid sample (i, j) after undoing the mapping.
  double sample(std::size_t i, std::size_t j) const { return mapping.value(pixels[(height - 1 - j) * width + i]); }
};

inline PgmImage parse_pgm(std::string_view data, const std::string& context = "pgm") {
  PgmImage img;
  std::size_t pos = 0;
  auto next_token = [&]() -> std::string {
    while (pos < data.size()) {
      if (data[pos] == '#') {
        const auto nl = data.find('\n', pos);
        const auto line = data.substr(pos, nl - pos);
        const auto lo = line.find("min=");
        const auto hi = line.find("max=");
        if (lo != std::string_view::npos && hi != std::string_view::npos) {
          auto field = [&](std::size_t at) {
            const auto end = line.find(' ', at);
            return line.substr(at + 4, end == std::string_view::npos ? line.npos : end - at - 4);
          };
          img.mapping.lo = detail::parse_double(field(lo), context);
          img.mapping.hi = detail::parse_double(field(hi), context);
        }
        pos = nl == std::string_view::npos ? data.size() : nl + 1;
      } else if (std::isspace(static_cast<unsigned char>(data[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
    const auto start = pos;
    while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
    return std::string(data.substr(start, pos - start));
  };
  if (next_token() != "P5") fail(ErrorKind::io, context + ": not a binary PGM (P5)");
  img.width = static_cast<std::size_t>(detail::parse_double(next_token(), context));
  img.height = static_cast<std::size_t>(detail::parse_double(next_token(), context));
  if (next_token() != "65535") fail(ErrorKind::io, context + ": expected maxval 65535");
  ++pos;  // single whitespace before the raster
  const std::size_t count = img.width * img.height;
  if (data.size() < pos + 2 * count) fail(ErrorKind::io, context + ": truncated raster");
  img.pixels.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    const auto hi = static_cast<unsigned char>(data[pos + 2 * k]);
    const auto lo = static_cast<unsigned char>(data[pos + 2 * k + 1]);
    img.pixels[k] = static_cast<std::uint16_t>((hi << 8) | lo);
  }
  return img;
}

inline PgmImage read_pgm(const std::filesystem::path& path) { return parse_pgm(read_file(path), path.string()); }

inline void emit_snapshot(const phase::WignerField& w, const std::filesystem::path& path, SnapshotFormat format,
                          double hbar = 1.0) {
  write_atomic(path, format == SnapshotFormat::csv ? snapshot_csv(w, hbar) : snapshot_pgm(w));
}

/// 64-bit FNV-1a, used for golden-file comparisons.
inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace wmr::scenario
