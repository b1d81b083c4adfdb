#include "sanp/png.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <vector>

#include "sanp/errors.hpp"

namespace sanp {

namespace {

// Kept apart from the caller so no locals there live across setjmp.
void encode_png(const std::string& tmp, const std::vector<png_byte>& pixels,
                std::size_t ncols, std::size_t nrows) {
  std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(tmp.c_str(), "wb"), &std::fclose);
  if (!fp) throw IoError("cannot open " + tmp + " for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng failed writing " + tmp);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, png_uint_32(ncols), png_uint_32(nrows), 8,
               PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (std::size_t r = 0; r < nrows; ++r)
    png_write_row(png, pixels.data() + r * ncols);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fflush(fp.get()) != 0) throw IoError("cannot write " + tmp);
}

}  // namespace

std::pair<double, double> write_png_greyscale(const std::filesystem::path& path,
                                              const DemGrid& grid) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!grid.observed(i)) continue;
    lo = std::min(lo, double(grid.elevations[i]));
    hi = std::max(hi, double(grid.elevations[i]));
  }
  if (!std::isfinite(lo)) lo = hi = 0.0;
  const double range = hi - lo;

  std::vector<png_byte> pixels(grid.size(), 0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!grid.observed(i)) continue;
    const double u = range > 0 ? (grid.elevations[i] - lo) / range : 0.0;
    pixels[i] = static_cast<png_byte>(1 + std::lround(u * 254.0));
  }

  const std::string tmp = path.string() + ".tmp";
  encode_png(tmp, pixels, grid.ncols, grid.nrows);
  std::filesystem::rename(tmp, path);

  std::ofstream side(path.string() + ".txt");
  side.precision(17);
  side << "min=" << lo << "\nmax=" << hi
       << "\nmapping=value = min + (grey - 1) / 254 * (max - min); grey 0 is no-data\n";
  if (!side) throw IoError("cannot write " + path.string() + ".txt");
  return {lo, hi};
}

}  // namespace sanp
