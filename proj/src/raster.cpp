#include "sanp/raster.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <sstream>

#include "detail/byte_io.hpp"
#include "sanp/errors.hpp"

namespace sanp {

DemGrid DemGrid::filled(std::size_t nrows, std::size_t ncols, double cell_size,
                        float value) {
  DemGrid g;
  g.nrows = nrows;
  g.ncols = ncols;
  g.cell_size = cell_size;
  g.elevations.assign(nrows * ncols, value);
  g.nodata.assign(nrows * ncols, 0);
  return g;
}

bool DemGrid::contains(MapCoord p) const {
  return p.east >= x_origin && p.east <= x_origin + double(ncols) * cell_size &&
         p.north >= y_origin && p.north <= y_origin + double(nrows) * cell_size;
}

std::size_t DemGrid::observed_count() const {
  return static_cast<std::size_t>(
      std::count(nodata.begin(), nodata.end(), std::uint8_t{0}));
}

void DemGrid::validate() const {
  if (ncols == 0 || nrows == 0)
    throw DataError("raster dimensions must be positive");
  if (!(cell_size > 0) || !std::isfinite(cell_size))
    throw DataError("raster cell size must be positive");
  if (elevations.size() != ncols * nrows || nodata.size() != ncols * nrows)
    throw DataError("raster storage does not match its dimensions");
  for (std::size_t i = 0; i < elevations.size(); ++i)
    if (!nodata[i] && !std::isfinite(elevations[i]))
      throw DataError("non-finite elevation at observed cell " +
                      std::to_string(i));
}

bool DemGrid::operator==(const DemGrid& o) const {
  if (ncols != o.ncols || nrows != o.nrows || cell_size != o.cell_size ||
      x_origin != o.x_origin || y_origin != o.y_origin || nodata != o.nodata)
    return false;
  for (std::size_t i = 0; i < elevations.size(); ++i)
    if (!nodata[i] && std::memcmp(&elevations[i], &o.elevations[i],
                                  sizeof(float)) != 0)
      return false;
  return true;
}

RasterFormat format_from_path(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".asc" || ext == ".txt") return RasterFormat::AsciiGrid;
  if (ext == ".sdem" || ext == ".bin") return RasterFormat::SanpBinary;
  throw ParseError("unknown raster format for '" + path.string() +
                   "' (expected .asc or .sdem)");
}

RasterFormat parse_format(std::string_view name) {
  if (name == "ascii-grid" || name == "ascii") return RasterFormat::AsciiGrid;
  if (name == "sanp-binary" || name == "binary") return RasterFormat::SanpBinary;
  throw ParseError("unknown raster format '" + std::string(name) + "'");
}

// ------------------------------------------------------------- ascii grid

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_number(std::string_view tok, std::size_t line_no) {
  double v = 0;
  const char* first = tok.data();
  if (!tok.empty() && tok.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("ascii-grid line " + std::to_string(line_no) +
                     ": invalid number '" + std::string(tok) + "'");
  return v;
}

std::size_t parse_count(std::string_view tok, std::size_t line_no) {
  const double v = parse_number(tok, line_no);
  if (!(v >= 1) || v != std::floor(v) || v > 1e9)
    throw ParseError("ascii-grid line " + std::to_string(line_no) +
                     ": expected a positive integer, got '" + std::string(tok) +
                     "'");
  return static_cast<std::size_t>(v);
}

}  // namespace

DemGrid parse_ascii_grid(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> lines;
  {
    std::size_t pos = 0, line_no = 1;
    while (pos <= text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(pos, end - pos);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (!split_ws(line).empty()) lines.emplace_back(line_no, line);
      pos = end + 1;
      ++line_no;
    }
  }
  if (lines.empty()) throw ParseError("ascii-grid: empty file");

  std::map<std::string, std::pair<std::string_view, std::size_t>> header;
  std::size_t li = 0;
  for (; li < lines.size(); ++li) {
    auto toks = split_ws(lines[li].second);
    const char c0 = toks[0].front();
    if (std::isdigit(static_cast<unsigned char>(c0)) || c0 == '-' ||
        c0 == '+' || c0 == '.')
      break;
    if (toks.size() != 2)
      throw ParseError("ascii-grid line " + std::to_string(lines[li].first) +
                       ": malformed header line");
    header[lower(toks[0])] = {toks[1], lines[li].first};
  }
  auto need = [&](const std::string& key) {
    auto it = header.find(key);
    if (it == header.end())
      throw ParseError("ascii-grid: missing header field '" + key + "'");
    return it->second;
  };

  DemGrid g;
  {
    auto [tok, ln] = need("ncols");
    g.ncols = parse_count(tok, ln);
  }
  {
    auto [tok, ln] = need("nrows");
    g.nrows = parse_count(tok, ln);
  }
  {
    auto [tok, ln] = need("cellsize");
    g.cell_size = parse_number(tok, ln);
    if (!(g.cell_size > 0))
      throw ParseError("ascii-grid line " + std::to_string(ln) +
                       ": cellsize must be positive");
  }
  for (const char* axis : {"x", "y"}) {
    double& origin = axis[0] == 'x' ? g.x_origin : g.y_origin;
    const std::string corner = std::string(axis) + "llcorner";
    const std::string centre = std::string(axis) + "llcenter";
    if (header.contains(corner)) {
      auto [tok, ln] = header[corner];
      origin = parse_number(tok, ln);
    } else if (header.contains(centre)) {
      auto [tok, ln] = header[centre];
      origin = parse_number(tok, ln) - 0.5 * g.cell_size;
    } else {
      throw ParseError("ascii-grid: missing header field '" + corner + "'");
    }
  }
  double nodata_value = kDefaultAsciiNodata;
  if (auto it = header.find("nodata_value"); it != header.end())
    nodata_value = parse_number(it->second.first, it->second.second);

  const std::size_t data_lines = lines.size() - li;
  if (data_lines != g.nrows)
    throw ParseError("ascii-grid: header declares " + std::to_string(g.nrows) +
                     " rows but " + std::to_string(data_lines) +
                     " data rows follow (first data line " +
                     (li < lines.size() ? std::to_string(lines[li].first)
                                        : std::string("none")) +
                     ")");
  g.elevations.assign(g.ncols * g.nrows, 0.0f);
  g.nodata.assign(g.ncols * g.nrows, 0);
  for (std::size_t r = 0; r < g.nrows; ++r) {
    const auto& [ln, line] = lines[li + r];
    auto toks = split_ws(line);
    if (toks.size() != g.ncols)
      throw ParseError("ascii-grid line " + std::to_string(ln) + ": row has " +
                       std::to_string(toks.size()) + " values, expected " +
                       std::to_string(g.ncols));
    for (std::size_t c = 0; c < g.ncols; ++c) {
      const double v = parse_number(toks[c], ln);
      const std::size_t i = g.index(r, c);
      if (v == nodata_value || std::isnan(v)) {
        g.nodata[i] = 1;
      } else {
        g.elevations[i] = static_cast<float>(v);
      }
    }
  }
  return g;
}

std::string format_ascii_grid(const DemGrid& grid, double nodata_value) {
  grid.validate();
  // Pick a sentinel that cannot collide with an observed value.
  float lo = std::numeric_limits<float>::max();
  bool collision = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!grid.observed(i)) continue;
    lo = std::min(lo, grid.elevations[i]);
    collision = collision || double(grid.elevations[i]) == nodata_value;
  }
  if (collision) nodata_value = std::floor(double(lo)) - 99999.0;

  std::ostringstream os;
  os.precision(17);
  os << "ncols " << grid.ncols << '\n'
     << "nrows " << grid.nrows << '\n'
     << "xllcorner " << grid.x_origin << '\n'
     << "yllcorner " << grid.y_origin << '\n'
     << "cellsize " << grid.cell_size << '\n'
     << "NODATA_value " << nodata_value << '\n';
  char buf[64];
  for (std::size_t r = 0; r < grid.nrows; ++r) {
    for (std::size_t c = 0; c < grid.ncols; ++c) {
      if (c) os << ' ';
      const std::size_t i = grid.index(r, c);
      if (!grid.observed(i)) {
        os << nodata_value;
        continue;
      }
      // Shortest representation that round-trips the float exactly.
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, grid.elevations[i]);
      (void)ec;
      os.write(buf, end - buf);
    }
    os << '\n';
  }
  return os.str();
}

// ------------------------------------------------------------ sanp binary

namespace {
constexpr std::string_view kRasterMagic = "SDEM1";
}

std::vector<char> encode_sanp_binary(const DemGrid& grid) {
  grid.validate();
  detail::ByteWriter w;
  w.bytes(kRasterMagic);
  w.u64(grid.ncols);
  w.u64(grid.nrows);
  w.f64(grid.cell_size);
  w.f64(grid.x_origin);
  w.f64(grid.y_origin);
  w.u64(0);
  const std::size_t n = grid.size();
  for (std::size_t byte = 0; byte < (n + 7) / 8; ++byte) {
    std::uint8_t bits = 0;
    for (std::size_t b = 0; b < 8 && byte * 8 + b < n; ++b)
      if (grid.nodata[byte * 8 + b]) bits |= std::uint8_t(1u << b);
    w.u8(bits);
  }
  for (float v : grid.elevations) w.f32(v);
  return w.data();
}

DemGrid decode_sanp_binary(std::vector<char> bytes) {
  detail::ByteReader r(std::move(bytes), "sanp-binary");
  if (r.remaining() == 0) throw ParseError("sanp-binary: empty file");
  if (r.bytes(kRasterMagic.size()) != kRasterMagic)
    throw ParseError("sanp-binary: bad magic at offset 0, expected SDEM1");
  DemGrid g;
  g.ncols = r.u64();
  g.nrows = r.u64();
  g.cell_size = r.f64();
  g.x_origin = r.f64();
  g.y_origin = r.f64();
  const std::uint64_t reserved = r.u64();
  (void)reserved;
  if (g.ncols == 0 || g.nrows == 0 || g.ncols > (1u << 28) ||
      g.nrows > (1u << 28))
    throw ParseError("sanp-binary: invalid dimensions at offset 5");
  if (!(g.cell_size > 0))
    throw ParseError("sanp-binary: invalid cell size at offset 21");
  const std::size_t n = g.ncols * g.nrows;
  if (r.remaining() != (n + 7) / 8 + 4 * n)
    throw ParseError("sanp-binary: payload size mismatch at offset " +
                     std::to_string(r.offset()));
  g.nodata.assign(n, 0);
  for (std::size_t byte = 0; byte < (n + 7) / 8; ++byte) {
    const std::uint8_t bits = r.u8();
    for (std::size_t b = 0; b < 8 && byte * 8 + b < n; ++b)
      g.nodata[byte * 8 + b] = (bits >> b) & 1u;
  }
  g.elevations.resize(n);
  for (auto& v : g.elevations) v = r.f32();
  return g;
}

// ------------------------------------------------------------------ files

DemGrid load_raster(const std::filesystem::path& path, RasterFormat format) {
  auto bytes = detail::read_file(path);
  DemGrid g;
  try {
    if (format == RasterFormat::AsciiGrid) {
      g = parse_ascii_grid(std::string_view(bytes.data(), bytes.size()));
    } else {
      g = decode_sanp_binary(std::move(bytes));
    }
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  try {
    g.validate();
  } catch (const DataError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return g;
}

DemGrid load_raster(const std::filesystem::path& path) {
  return load_raster(path, format_from_path(path));
}

void save_raster(const DemGrid& grid, const std::filesystem::path& path,
                 RasterFormat format) {
  if (format == RasterFormat::AsciiGrid) {
    const std::string text = format_ascii_grid(grid);
    detail::write_file_atomic(path, std::vector<char>(text.begin(), text.end()));
  } else {
    detail::write_file_atomic(path, encode_sanp_binary(grid));
  }
}

void save_raster(const DemGrid& grid, const std::filesystem::path& path) {
  save_raster(grid, path, format_from_path(path));
}

}  // namespace sanp
