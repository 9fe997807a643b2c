#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sboxlab/errors.hpp"
#include "sboxlab/metrics.hpp"

namespace sboxlab {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr Rgb kMarkerGreen{0, 176, 0};

struct HeatmapSpec {
  std::optional<std::int64_t> scale;  // symmetric bound; default is the extreme
  Rgb marker = kMarkerGreen;
};

struct Heatmap {
  std::size_t side = 0;
  std::int64_t scale = 0;
  std::int64_t extreme = 0;  // max |v| outside row 0 and column 0
  std::vector<Rgb> pixels;   // row-major, row = first index
  std::vector<std::uint8_t> marked;
  std::size_t marker_count = 0;
};

/// LAT in half units: sums(a, b) / 2, the scale biases are reported on.
inline SquareTable<std::int32_t> lat_bias_table(const Lat& lat) {
  SquareTable<std::int32_t> out(lat.bits());
  for (std::size_t a = 0; a < lat.side(); ++a) {
    for (std::size_t b = 0; b < lat.side(); ++b) out(a, b) = lat(a, b) / 2;
  }
  return out;
}

/// Blue (negative) through white (0) to red (positive), clamped at +-scale.
inline Rgb diverging_color(std::int64_t v, std::int64_t scale) {
  if (scale <= 0) return {255, 255, 255};
  const double t = std::clamp(static_cast<double>(std::llabs(v)) / static_cast<double>(scale), 0.0, 1.0);
  const auto fade = static_cast<std::uint8_t>(255.0 * (1.0 - t) + 0.5);
  if (v < 0) return {fade, fade, 255};
  if (v > 0) return {255, fade, fade};
  return {255, 255, 255};
}

/// Row and column 0 are drawn but never define the scale or get markers.
/// Cells whose |value| equals the extreme get the marker color.
template <typename T>
Heatmap render_heatmap(const SquareTable<T>& m, const HeatmapSpec& spec = {}) {
  Heatmap h;
  h.side = m.side();
  for (std::size_t a = 1; a < m.side(); ++a) {
    for (std::size_t b = 1; b < m.side(); ++b) {
      h.extreme = std::max<std::int64_t>(h.extreme, std::llabs(static_cast<std::int64_t>(m(a, b))));
    }
  }
  h.scale = spec.scale.value_or(h.extreme);
  if (h.scale < h.extreme) {
    throw ConfigError("heatmap scale " + std::to_string(h.scale) + " is below the table extreme " +
                      std::to_string(h.extreme));
  }
  h.pixels.resize(m.side() * m.side());
  h.marked.assign(m.side() * m.side(), 0);
  for (std::size_t a = 0; a < m.side(); ++a) {
    for (std::size_t b = 0; b < m.side(); ++b) {
      const auto v = static_cast<std::int64_t>(m(a, b));
      const std::size_t idx = a * m.side() + b;
      if (a != 0 && b != 0 && h.extreme != 0 && std::llabs(v) == h.extreme) {
        h.pixels[idx] = spec.marker;
        h.marked[idx] = 1;
        ++h.marker_count;
      } else {
        h.pixels[idx] = diverging_color(v, h.scale);
      }
    }
  }
  return h;
}

/// Binary PPM (P6), 8-bit RGB.
inline void write_ppm(std::ostream& os, const Heatmap& h) {
  os << "P6\n" << h.side << ' ' << h.side << "\n255\n";
  for (const Rgb& p : h.pixels) {
    const char rgb[3] = {static_cast<char>(p.r), static_cast<char>(p.g), static_cast<char>(p.b)};
    os.write(rgb, 3);
  }
}

/// One matrix row per line, comma separated, no header.
template <typename T>
void write_table_csv(std::ostream& os, const SquareTable<T>& m) {
  for (std::size_t a = 0; a < m.side(); ++a) {
    for (std::size_t b = 0; b < m.side(); ++b) {
      if (b) os << ',';
      os << static_cast<std::int64_t>(m(a, b));
    }
    os << '\n';
  }
}

template <typename T>
SquareTable<T> read_table_csv(std::istream& is) {
  std::vector<std::vector<std::int64_t>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::int64_t> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::size_t used = 0;
      std::int64_t v = 0;
      try {
        v = std::stoll(cell, &used);
      } catch (const std::exception&) {
        throw ParseError("CSV cell '" + cell + "' is not an integer");
      }
      if (used != cell.size()) throw ParseError("CSV cell '" + cell + "' is not an integer");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  const std::size_t side = rows.size();
  if (side < 4 || !std::has_single_bit(side)) throw ParseError("CSV table must have 2^n rows");
  SquareTable<T> m(std::countr_zero(side));
  for (std::size_t a = 0; a < side; ++a) {
    if (rows[a].size() != side) throw ParseError("CSV row " + std::to_string(a) + " has the wrong width");
    for (std::size_t b = 0; b < side; ++b) m(a, b) = static_cast<T>(rows[a][b]);
  }
  return m;
}

}  // namespace sboxlab
