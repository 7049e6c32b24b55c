#include "roomgraph/segmentation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace roomgraph {
namespace {

struct UnionFind {
  std::vector<std::int32_t> parent;
  std::vector<std::int32_t> size;

  explicit UnionFind(std::size_t n) : parent(n), size(n, 1) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::int32_t find(std::int32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  std::int32_t unite(std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return a;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
    return a;
  }
};

// First-encounter relabeling restricted to free cells, with the minimum-size
// filter applied before ids are assigned.
SegmentLabelMap relabel(const BinaryGrid& b, UnionFind& uf, int min_size) {
  SegmentLabelMap out;
  out.width = b.width;
  out.height = b.height;
  out.labels.assign(b.occupied.size(), 0);
  std::vector<std::int32_t> remap(b.occupied.size(), 0);
  for (std::size_t i = 0; i < b.occupied.size(); ++i) {
    if (b.occupied[i]) continue;
    const std::int32_t root = uf.find(static_cast<std::int32_t>(i));
    if (uf.size[root] < min_size) continue;
    if (remap[root] == 0) remap[root] = ++out.count;
    out.labels[i] = remap[root];
  }
  return out;
}

SegmentLabelMap segment_components(const BinaryGrid& b, const SegmentationParams& params) {
  UnionFind uf(b.occupied.size());
  for (int r = 0; r < b.height; ++r)
    for (int c = 0; c < b.width; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * b.width + c;
      if (b.occupied[i]) continue;
      if (c + 1 < b.width && !b.occupied[i + 1])
        uf.unite(static_cast<std::int32_t>(i), static_cast<std::int32_t>(i + 1));
      if (r + 1 < b.height && !b.occupied[i + b.width])
        uf.unite(static_cast<std::int32_t>(i), static_cast<std::int32_t>(i + b.width));
    }
  return relabel(b, uf, params.min_segment_size);
}

SegmentLabelMap segment_graph(const BinaryGrid& b, const SegmentationParams& params) {
  // Felzenszwalb-Huttenlocher on the 4-connected pixel graph. Weights are
  // |I(u) - I(v)| with I in {0, 255}, so a counting sort by weight suffices.
  struct Edge {
    std::int32_t a, b;
  };
  std::vector<Edge> zero_edges, step_edges;
  auto intensity = [&](std::size_t i) { return b.occupied[i] ? 0 : 255; };
  for (int r = 0; r < b.height; ++r)
    for (int c = 0; c < b.width; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * b.width + c;
      if (c + 1 < b.width) {
        Edge e{static_cast<std::int32_t>(i), static_cast<std::int32_t>(i + 1)};
        (intensity(i) == intensity(i + 1) ? zero_edges : step_edges).push_back(e);
      }
      if (r + 1 < b.height) {
        Edge e{static_cast<std::int32_t>(i), static_cast<std::int32_t>(i + b.width)};
        (intensity(i) == intensity(i + b.width) ? zero_edges : step_edges).push_back(e);
      }
    }

  UnionFind uf(b.occupied.size());
  std::vector<double> internal(b.occupied.size(), 0.0);
  auto process = [&](const std::vector<Edge>& edges, double w) {
    for (const Edge& e : edges) {
      const std::int32_t ra = uf.find(e.a), rb = uf.find(e.b);
      if (ra == rb) continue;
      const double ta = internal[ra] + params.felz_k / uf.size[ra];
      const double tb = internal[rb] + params.felz_k / uf.size[rb];
      if (w <= std::min(ta, tb)) {
        const std::int32_t root = uf.unite(ra, rb);
        internal[root] = w;  // edges arrive in nondecreasing weight order
      }
    }
  };
  process(zero_edges, 0.0);
  process(step_edges, 255.0);
  return relabel(b, uf, params.min_segment_size);
}

}  // namespace

BinaryGrid close_doors(const BinaryGrid& b, const std::vector<DoorHypothesis>& hyps,
                       const std::vector<int>& open_ids) {
  for (int id : open_ids) {
    const bool known = std::any_of(hyps.begin(), hyps.end(),
                                   [id](const DoorHypothesis& h) { return h.id == id; });
    if (!known)
      throw std::invalid_argument("close_doors: unknown hypothesis id " + std::to_string(id));
  }
  BinaryGrid out = b;
  auto is_open = [&](int id) {
    return std::find(open_ids.begin(), open_ids.end(), id) != open_ids.end();
  };
  // A closed hypothesis seals its one-cell neighborhood as well, the way a
  // door leaf seats against its frame; without the rim, speckle noise in the
  // jamb cells right beside the mask would leak around the plug.
  for (const DoorHypothesis& h : hyps) {
    if (is_open(h.id)) continue;
    for (const Cell& c : h.cells) {
      if (!out.in_bounds(c.row, c.col))
        throw std::invalid_argument("close_doors: hypothesis cell outside grid");
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc)
          if (out.in_bounds(c.row + dr, c.col + dc))
            out.occupied[out.index(c.row + dr, c.col + dc)] = 1;
    }
  }
  // Open doors last so an opened doorway wins where masks overlap.
  for (const DoorHypothesis& h : hyps) {
    if (!is_open(h.id)) continue;
    for (const Cell& c : h.cells) {
      if (!out.in_bounds(c.row, c.col))
        throw std::invalid_argument("close_doors: hypothesis cell outside grid");
      out.occupied[out.index(c.row, c.col)] = 0;
    }
  }
  return out;
}

SegmentLabelMap segment(const BinaryGrid& b, SegmentationMethod method,
                        const SegmentationParams& params) {
  return method == SegmentationMethod::Components ? segment_components(b, params)
                                                  : segment_graph(b, params);
}

int count_segments(const BinaryGrid& b, SegmentationMethod method,
                   const SegmentationParams& params) {
  return segment(b, method, params).count;
}

}  // namespace roomgraph
