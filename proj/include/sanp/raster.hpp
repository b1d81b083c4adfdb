#pragma once
// Elevation rasters with explicit no-data masks, and their two file formats.
//
// ascii-grid   ESRI-style text: ncols, nrows, xllcorner, yllcorner, cellsize,
//              NODATA_value header lines, then one line per row, row 0 being
//              the northmost.
// sanp-binary  "SDEM1", six little-endian u64 header fields (ncols, nrows,
//              cell size as f64 bits, x origin as f64 bits, y origin as f64
//              bits, reserved = 0), a row-major mask bitmap (bit i%8 of byte
//              i/8, 1 = void), then ncols*nrows little-endian f32 elevations.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sanp {

// Projected map coordinate in meters.
struct MapCoord {
  double east = 0.0;
  double north = 0.0;
};

struct DemGrid {
  std::size_t ncols = 0;
  std::size_t nrows = 0;
  double cell_size = 1.0;
  double x_origin = 0.0;  // west edge
  double y_origin = 0.0;  // south edge
  std::vector<float> elevations;      // row-major, row 0 northmost
  std::vector<std::uint8_t> nodata;   // 1 = void

  static DemGrid filled(std::size_t nrows, std::size_t ncols, double cell_size,
                        float value = 0.0f);

  std::size_t size() const { return elevations.size(); }
  std::size_t index(std::size_t row, std::size_t col) const {
    return row * ncols + col;
  }
  std::size_t row_of(std::size_t index) const { return index / ncols; }
  std::size_t col_of(std::size_t index) const { return index % ncols; }
  bool observed(std::size_t index) const { return nodata[index] == 0; }
  bool observed(std::size_t row, std::size_t col) const {
    return nodata[index(row, col)] == 0;
  }
  float at(std::size_t row, std::size_t col) const {
    return elevations[index(row, col)];
  }

  MapCoord center(std::size_t row, std::size_t col) const {
    return {x_origin + (double(col) + 0.5) * cell_size,
            y_origin + (double(nrows - row) - 0.5) * cell_size};
  }
  MapCoord center(std::size_t index) const {
    return center(row_of(index), col_of(index));
  }
  // Continuous (row, col) position of a map coordinate; pixel centers sit on
  // integers.
  double col_position(double east) const {
    return (east - x_origin) / cell_size - 0.5;
  }
  double row_position(double north) const {
    return double(nrows) - 0.5 - (north - y_origin) / cell_size;
  }
  bool contains(MapCoord p) const;

  std::size_t observed_count() const;
  std::size_t void_count() const { return size() - observed_count(); }

  // Throws DataError if dimensions, cell size, or observed values are invalid.
  void validate() const;

  // Equal geometry, identical masks, and bit-identical elevations at observed
  // cells.
  bool operator==(const DemGrid& other) const;
};

enum class RasterFormat { AsciiGrid, SanpBinary };

// .asc / .txt -> AsciiGrid, .sdem / .bin -> SanpBinary.
RasterFormat format_from_path(const std::filesystem::path& path);
RasterFormat parse_format(std::string_view name);

constexpr double kDefaultAsciiNodata = -99999.0;

DemGrid parse_ascii_grid(std::string_view text);
std::string format_ascii_grid(const DemGrid& grid,
                              double nodata_value = kDefaultAsciiNodata);
DemGrid decode_sanp_binary(std::vector<char> bytes);
std::vector<char> encode_sanp_binary(const DemGrid& grid);

DemGrid load_raster(const std::filesystem::path& path, RasterFormat format);
DemGrid load_raster(const std::filesystem::path& path);
void save_raster(const DemGrid& grid, const std::filesystem::path& path,
                 RasterFormat format);
void save_raster(const DemGrid& grid, const std::filesystem::path& path);

}  // namespace sanp
