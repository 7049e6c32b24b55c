#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace roomgraph {

// Run-length coding for binary bitmaps: alternating run lengths starting
// with a zero-run (possibly length 0). Runs always sum to the bitmap size.
inline std::vector<int> rle_encode(const std::vector<std::uint8_t>& bits) {
  std::vector<int> runs;
  std::uint8_t current = 0;
  int len = 0;
  for (std::uint8_t b : bits) {
    const std::uint8_t v = b ? 1 : 0;
    if (v == current) {
      ++len;
    } else {
      runs.push_back(len);
      current = v;
      len = 1;
    }
  }
  runs.push_back(len);
  return runs;
}

inline std::vector<std::uint8_t> rle_decode(const std::vector<int>& runs,
                                            std::size_t size) {
  std::vector<std::uint8_t> bits;
  bits.reserve(size);
  std::uint8_t current = 0;
  for (int r : runs) {
    if (r < 0) throw std::invalid_argument("rle: negative run length");
    bits.insert(bits.end(), static_cast<std::size_t>(r), current);
    current = current ? 0 : 1;
  }
  if (bits.size() != size) throw std::invalid_argument("rle: run lengths do not sum to size");
  return bits;
}

}  // namespace roomgraph
