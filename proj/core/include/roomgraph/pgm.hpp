#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace roomgraph {

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major

  std::uint8_t at(int row, int col) const {
    return pixels[static_cast<std::size_t>(row) * width + col];
  }
};

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, 3 bytes per pixel

  void set(int row, int col, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const std::size_t i = 3 * (static_cast<std::size_t>(row) * width + col);
    pixels[i] = r;
    pixels[i + 1] = g;
    pixels[i + 2] = b;
  }
};

// Binary (P5) PGM with maxval <= 255. Throws std::runtime_error on any
// malformed input, wrong magic, or wider-than-8-bit maxval.
GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const GrayImage& img);

// Binary (P6) PPM, used for colorized label/topometric renderings.
void write_ppm(const std::filesystem::path& path, const RgbImage& img);

}  // namespace roomgraph
