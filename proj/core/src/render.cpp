#include "roomgraph/render.hpp"

#include <algorithm>
#include <cmath>

namespace roomgraph {
namespace {

struct Rgb {
  std::uint8_t r, g, b;
};

// Fixed qualitative palette; segment ids cycle through it.
constexpr Rgb kPalette[] = {
    {230, 97, 97},  {97, 160, 230}, {122, 204, 122}, {230, 180, 90},
    {170, 120, 220}, {90, 200, 200}, {230, 140, 190}, {160, 160, 90},
    {120, 140, 230}, {200, 120, 90}, {100, 210, 150}, {210, 200, 110},
};
constexpr int kPaletteSize = static_cast<int>(sizeof(kPalette) / sizeof(kPalette[0]));
constexpr Rgb kBackground{40, 40, 40};

RgbImage blank(int width, int height) {
  RgbImage img;
  img.width = width;
  img.height = height;
  img.pixels.assign(static_cast<std::size_t>(width) * height * 3, 0);
  return img;
}

}  // namespace

RgbImage render_labels(const SegmentLabelMap& labels) {
  RgbImage img = blank(labels.width, labels.height);
  for (int r = 0; r < labels.height; ++r)
    for (int c = 0; c < labels.width; ++c) {
      const std::int32_t l = labels.at(r, c);
      const Rgb color = l == 0 ? kBackground : kPalette[(l - 1) % kPaletteSize];
      img.set(r, c, color.r, color.g, color.b);
    }
  return img;
}

RgbImage render_entities(const SegmentLabelMap& labels,
                         const std::vector<EntityScore>& scores,
                         const std::vector<DoorHypothesis>& valid_doors) {
  std::vector<std::uint8_t> corridor(static_cast<std::size_t>(labels.count) + 1, 0);
  for (const EntityScore& s : scores)
    if (s.segment_id >= 1 && s.segment_id <= labels.count && s.corridor)
      corridor[s.segment_id] = 1;

  RgbImage img = blank(labels.width, labels.height);
  for (int r = 0; r < labels.height; ++r)
    for (int c = 0; c < labels.width; ++c) {
      const std::int32_t l = labels.at(r, c);
      if (l == 0) {
        img.set(r, c, kBackground.r, kBackground.g, kBackground.b);
      } else if (corridor[l]) {
        img.set(r, c, 235, 190, 80);  // corridors amber
      } else {
        const Rgb color = kPalette[(l - 1) % kPaletteSize];
        img.set(r, c, color.r, color.g, color.b);
      }
    }
  for (const DoorHypothesis& h : valid_doors)
    for (const Cell& cell : h.cells)
      if (cell.row >= 0 && cell.row < labels.height && cell.col >= 0 &&
          cell.col < labels.width)
        img.set(cell.row, cell.col, 60, 230, 90);  // doors green
  return img;
}

RgbImage render_heatmap(const SegmentLabelMap& labels,
                        const std::vector<EntityScore>& scores) {
  std::vector<double> conf(static_cast<std::size_t>(labels.count) + 1, 0.0);
  for (const EntityScore& s : scores)
    if (s.segment_id >= 1 && s.segment_id <= labels.count)
      conf[s.segment_id] = s.corridor_confidence;

  RgbImage img = blank(labels.width, labels.height);
  for (int r = 0; r < labels.height; ++r)
    for (int c = 0; c < labels.width; ++c) {
      const std::int32_t l = labels.at(r, c);
      if (l == 0) {
        img.set(r, c, kBackground.r, kBackground.g, kBackground.b);
        continue;
      }
      // Cold blue (0) to hot red (1).
      const double v = std::clamp(conf[l], 0.0, 1.0);
      img.set(r, c, static_cast<std::uint8_t>(std::lround(40 + 215 * v)),
              static_cast<std::uint8_t>(std::lround(60 + 40 * (1.0 - v))),
              static_cast<std::uint8_t>(std::lround(40 + 215 * (1.0 - v))));
    }
  return img;
}

RgbImage render_classes(const GroundTruth& truth) {
  RgbImage img = blank(truth.width, truth.height);
  for (int r = 0; r < truth.height; ++r)
    for (int c = 0; c < truth.width; ++c) {
      switch (truth.class_at(r, c)) {
        case CellClass::Exterior: img.set(r, c, 40, 40, 40); break;
        case CellClass::Wall: img.set(r, c, 10, 10, 10); break;
        case CellClass::Corridor: img.set(r, c, 235, 190, 80); break;
        case CellClass::Room: img.set(r, c, 97, 160, 230); break;
        case CellClass::Door: img.set(r, c, 60, 230, 90); break;
      }
    }
  return img;
}

GrayImage class_index_image(const GroundTruth& truth) {
  GrayImage img;
  img.width = truth.width;
  img.height = truth.height;
  img.pixels.resize(truth.classes.size());
  for (std::size_t i = 0; i < truth.classes.size(); ++i)
    img.pixels[i] = static_cast<std::uint8_t>(truth.classes[i]);
  return img;
}

GrayImage label_index_image(const SegmentLabelMap& labels) {
  GrayImage img;
  img.width = labels.width;
  img.height = labels.height;
  img.pixels.resize(labels.labels.size());
  for (std::size_t i = 0; i < labels.labels.size(); ++i)
    img.pixels[i] = static_cast<std::uint8_t>(std::min<std::int32_t>(labels.labels[i], 255));
  return img;
}

}  // namespace roomgraph
