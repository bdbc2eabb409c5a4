#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rfsim/diagnostics.hpp"
#include "rfsim/error.hpp"
#include "rfsim/wavefield.hpp"

namespace rfsim::cli {

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // fold -0 into 0
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw Error("format_double: conversion failed");
  return {buf.data(), end};
}

/// Frequency label for file names: integer hertz when exact, shortest form otherwise.
inline std::string frequency_label(double freq_hz) {
  if (freq_hz == std::floor(freq_hz) && freq_hz < 1e18) return std::to_string(static_cast<std::uint64_t>(freq_hz));
  return format_double(freq_hz);
}

/// Buffered CSV file with a fixed header row; rows must match the column count.
class CsvWriter {
public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
      : path_(path), columns_(header.size()) {
    append_row(header);
  }

  void row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_double(v));
    append_row(cells);
  }

  void row(const std::vector<std::string>& cells) { append_row(cells); }

  void close() {
    std::ofstream out(path_, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path_.string());
    out.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
    if (!out) throw IoError("write failed for " + path_.string());
  }

private:
  void append_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw Error("CsvWriter: row width does not match header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) buffer_ += ',';
      buffer_ += cells[i];
    }
    buffer_ += '\n';
  }

  std::filesystem::path path_;
  std::size_t columns_;
  std::string buffer_;
};

/**
 * Binary 16-bit PGM (P5, maxval 65535, big-endian samples). The top image row
 * is the highest y. Pixel = round(|v| / max|v| * 65535); an all-zero map is black.
 */
inline std::string encode_pgm(const FieldMap& map) {
  const auto& g = map.grid;
  double peak = 0.0;
  for (const auto& v : map.values) peak = std::max(peak, std::abs(v));

  std::string out = "P5\n" + std::to_string(g.nx) + " " + std::to_string(g.ny) + "\n65535\n";
  out.reserve(out.size() + 2 * g.size());
  for (std::size_t row = 0; row < g.ny; ++row) {
    const std::size_t iy = g.ny - 1 - row;
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      const double norm = peak > 0.0 ? std::abs(map.at(ix, iy)) / peak : 0.0;
      const auto px = static_cast<std::uint16_t>(std::lround(std::clamp(norm, 0.0, 1.0) * 65535.0));
      out.push_back(static_cast<char>(px >> 8));
      out.push_back(static_cast<char>(px & 0xff));
    }
  }
  return out;
}

inline void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

inline void write_field_csv(const std::filesystem::path& path, const FieldMap& map) {
  CsvWriter csv(path, {"x", "y", "re", "im"});
  for (std::size_t iy = 0; iy < map.grid.ny; ++iy)
    for (std::size_t ix = 0; ix < map.grid.nx; ++ix) {
      const Vec2 p = map.grid.point(ix, iy);
      const Phasor v = map.at(ix, iy);
      csv.row(std::vector<double>{p.x, p.y, v.real(), v.imag()});
    }
  csv.close();
}

/// Structured summary written as report.json next to every run's outputs.
struct RunReport {
  std::string command;
  double wall_time_s = 0.0;
  std::size_t patch_count = 0;
  std::size_t frequency_count = 0;
  std::vector<Diagnostics::Entry> warnings;
  nlohmann::json extra = nlohmann::json::object();

  nlohmann::json to_json() const {
    nlohmann::json w = nlohmann::json::array();
    for (const auto& e : warnings) w.push_back({{"message", e.message}, {"count", e.count}});
    nlohmann::json j{{"command", command},
                     {"wall_time_s", wall_time_s},
                     {"patch_count", patch_count},
                     {"frequency_count", frequency_count},
                     {"warnings", w}};
    for (const auto& [k, v] : extra.items()) j[k] = v;
    return j;
  }
};

}  // namespace rfsim::cli
