#include "roomgraph/occupancy_grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "roomgraph/pgm.hpp"

namespace roomgraph {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw std::runtime_error("map metadata: bad value '" + v + "' for key '" + key + "'");
  }
}

}  // namespace

MapMetadata read_map_metadata(const std::filesystem::path& yaml_path) {
  std::ifstream in(yaml_path);
  if (!in) throw std::runtime_error("map metadata: cannot open " + yaml_path.string());

  MapMetadata meta;
  bool have_image = false, have_resolution = false;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) {
      throw std::runtime_error("map metadata: malformed line '" + line + "' in " + yaml_path.string());
    }
    const std::string key = trim(line.substr(0, colon));
    const std::string value = trim(line.substr(colon + 1));
    if (key == "image") {
      meta.image = value;
      have_image = true;
    } else if (key == "resolution") {
      meta.resolution = parse_double(value, key);
      have_resolution = true;
    } else if (key == "origin") {
      // [x, y] or [x, y, yaw]; yaw is accepted and ignored.
      std::string v = value;
      std::erase(v, '[');
      std::erase(v, ']');
      std::replace(v.begin(), v.end(), ',', ' ');
      std::istringstream os(v);
      double x, y;
      if (!(os >> x >> y)) {
        throw std::runtime_error("map metadata: malformed origin '" + value + "'");
      }
      meta.origin = {x, y};
    } else if (key == "negate") {
      meta.negate = parse_double(value, key) != 0.0;
    } else if (key == "occupied_thresh") {
      meta.occupied_thresh = parse_double(value, key);
    } else if (key == "free_thresh") {
      meta.free_thresh = parse_double(value, key);
    } else if (key == "unknown_value") {
      meta.unknown_value = static_cast<int>(parse_double(value, key));
    }
    // Unrecognized keys (mode, etc.) are ignored.
  }
  if (!have_image) throw std::runtime_error("map metadata: missing 'image' key in " + yaml_path.string());
  if (!have_resolution) throw std::runtime_error("map metadata: missing 'resolution' key in " + yaml_path.string());
  if (meta.resolution <= 0.0) throw std::runtime_error("map metadata: resolution must be > 0 in " + yaml_path.string());
  return meta;
}

OccupancyGrid load_map(const std::filesystem::path& yaml_path) {
  const MapMetadata meta = read_map_metadata(yaml_path);
  const std::filesystem::path image_path = yaml_path.parent_path() / meta.image;
  const GrayImage img = read_pgm(image_path);

  OccupancyGrid g;
  g.width = img.width;
  g.height = img.height;
  g.resolution = meta.resolution;
  g.origin = meta.origin;
  g.cells.resize(img.pixels.size());
  g.unknown.assign(img.pixels.size(), 0);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    const int v = img.pixels[i];
    const double p = meta.negate ? v / 255.0 : (255 - v) / 255.0;
    g.cells[i] = static_cast<float>(p);
    if (v == meta.unknown_value && p > meta.free_thresh && p < meta.occupied_thresh) {
      g.unknown[i] = 1;
    }
  }
  return g;
}

void save_map(const OccupancyGrid& grid, const std::filesystem::path& yaml_path) {
  const std::string stem = yaml_path.stem().string();
  const std::string image_name = stem + ".pgm";

  GrayImage img;
  img.width = grid.width;
  img.height = grid.height;
  img.pixels.resize(grid.cells.size());
  for (std::size_t i = 0; i < grid.cells.size(); ++i) {
    if (grid.unknown[i]) {
      img.pixels[i] = static_cast<std::uint8_t>(kDefaultUnknownValue);
    } else {
      const double p = std::clamp(static_cast<double>(grid.cells[i]), 0.0, 1.0);
      img.pixels[i] = static_cast<std::uint8_t>(std::lround(255.0 * (1.0 - p)));
    }
  }
  write_pgm(yaml_path.parent_path() / image_name, img);

  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "image: %s\nresolution: %.6f\norigin: [%.6f, %.6f, 0.000000]\n"
                "negate: 0\noccupied_thresh: %.3f\nfree_thresh: %.3f\n",
                image_name.c_str(), grid.resolution, grid.origin.x, grid.origin.y,
                kDefaultOccupiedThresh, kDefaultFreeThresh);
  std::ofstream out(yaml_path);
  if (!out) throw std::runtime_error("save_map: cannot write " + yaml_path.string());
  out << buf;
}

OccupancyGrid normalize_resolution(const OccupancyGrid& g) {
  if (g.resolution <= 0.0) throw std::runtime_error("normalize_resolution: resolution must be > 0");
  if (g.resolution == kNormalizedResolution) return g;
  if (g.width < 2 || g.height < 2) {
    throw std::runtime_error("normalize_resolution: degenerate grid (needs at least 2x2 cells)");
  }

  const double scale = g.resolution / kNormalizedResolution;
  OccupancyGrid out;
  out.width = std::max(1, static_cast<int>(std::lround(g.width * scale)));
  out.height = std::max(1, static_cast<int>(std::lround(g.height * scale)));
  out.resolution = kNormalizedResolution;
  out.origin = g.origin;
  out.cells.resize(static_cast<std::size_t>(out.width) * out.height);
  out.unknown.resize(out.cells.size());

  for (int r = 0; r < out.height; ++r) {
    // Source coordinates of the output cell center, in source cell units.
    const double sy = std::clamp((r + 0.5) / scale - 0.5, 0.0, g.height - 1.0);
    const int y0 = static_cast<int>(sy);
    const int y1 = std::min(y0 + 1, g.height - 1);
    const double fy = sy - y0;
    for (int c = 0; c < out.width; ++c) {
      const double sx = std::clamp((c + 0.5) / scale - 0.5, 0.0, g.width - 1.0);
      const int x0 = static_cast<int>(sx);
      const int x1 = std::min(x0 + 1, g.width - 1);
      const double fx = sx - x0;
      const double p = (1 - fy) * ((1 - fx) * g.at(y0, x0) + fx * g.at(y0, x1)) +
                       fy * ((1 - fx) * g.at(y1, x0) + fx * g.at(y1, x1));
      const std::size_t i = out.index(r, c);
      out.cells[i] = static_cast<float>(p);
      out.unknown[i] = g.unknown[g.index(fy < 0.5 ? y0 : y1, fx < 0.5 ? x0 : x1)];
    }
  }
  return out;
}

namespace {

BinaryGrid binarize_values(const float* values, const std::uint8_t* unknown,
                           int width, int height, double occ, double free,
                           UnknownPolicy policy) {
  if (!(0.0 <= free && free < occ && occ <= 1.0)) {
    throw std::invalid_argument("binarize: need 0 <= free_thresh < occupied_thresh <= 1");
  }
  BinaryGrid b;
  b.width = width;
  b.height = height;
  b.occupied.resize(static_cast<std::size_t>(width) * height);
  const std::uint8_t fallback = policy == UnknownPolicy::AsOccupied ? 1 : 0;
  for (std::size_t i = 0; i < b.occupied.size(); ++i) {
    if (unknown && unknown[i]) {
      b.occupied[i] = fallback;
    } else {
      const double p = values[i];
      b.occupied[i] = p >= occ ? 1 : (p <= free ? 0 : fallback);
    }
  }
  return b;
}

}  // namespace

BinaryGrid binarize(const OccupancyGrid& g, double occupied_thresh,
                    double free_thresh, UnknownPolicy policy) {
  return binarize_values(g.cells.data(), g.unknown.data(), g.width, g.height,
                         occupied_thresh, free_thresh, policy);
}

BinaryGrid binarize_patch(const Patch& p, double occupied_thresh,
                          double free_thresh, UnknownPolicy policy) {
  return binarize_values(p.data.data(), nullptr, kPatchSize, kPatchSize,
                         occupied_thresh, free_thresh, policy);
}

std::vector<Cell> sliding_window_origins(int height, int width, int stride) {
  if (width < kPatchSize || height < kPatchSize) {
    throw std::runtime_error("sliding_windows: grid smaller than one window");
  }
  if (stride <= 0) throw std::invalid_argument("sliding_windows: stride must be > 0");

  const auto axis_origins = [stride](int extent) {
    std::vector<int> v;
    for (int o = 0; o + kPatchSize <= extent; o += stride) v.push_back(o);
    if (v.back() != extent - kPatchSize) v.push_back(extent - kPatchSize);
    return v;
  };
  const std::vector<int> rows = axis_origins(height);
  const std::vector<int> cols = axis_origins(width);

  std::vector<Cell> out;
  out.reserve(rows.size() * cols.size());
  for (int r : rows) {
    for (int c : cols) out.push_back({r, c});
  }
  return out;
}

std::vector<Patch> sliding_windows(const OccupancyGrid& g, int stride) {
  const std::vector<Cell> origins = sliding_window_origins(g.height, g.width, stride);
  std::vector<Patch> patches;
  patches.reserve(origins.size());
  for (const Cell& o : origins) {
    Patch p;
    p.row = o.row;
    p.col = o.col;
    p.data.resize(static_cast<std::size_t>(kPatchSize) * kPatchSize);
    for (int r = 0; r < kPatchSize; ++r) {
      const float* src = &g.cells[g.index(o.row + r, o.col)];
      std::copy(src, src + kPatchSize, &p.data[static_cast<std::size_t>(r) * kPatchSize]);
    }
    patches.push_back(std::move(p));
  }
  return patches;
}

}  // namespace roomgraph
