#include "roomgraph/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "roomgraph/occupancy_grid.hpp"
#include "roomgraph/version.hpp"

namespace roomgraph {
namespace {

int overlap_1d(int a, int b, int size) {
  const int lo = std::max(a, b);
  const int hi = std::min(a, b) + size;
  return std::max(0, hi - lo);
}

// Local bitmap view of a cell set, padded by one background ring.
struct LocalMask {
  int row0 = 0, col0 = 0, w = 0, h = 0;
  std::vector<std::uint8_t> bits;

  std::size_t idx(int r, int c) const { return static_cast<std::size_t>(r) * w + c; }
  bool in(int r, int c) const { return r >= 0 && r < h && c >= 0 && c < w; }
  bool set(int r, int c) const { return in(r, c) && bits[idx(r, c)]; }
};

LocalMask make_local(const std::vector<Cell>& cells) {
  const CellBounds b = cell_bounds(cells);
  LocalMask m;
  m.row0 = b.min_row - 1;
  m.col0 = b.min_col - 1;
  m.h = b.height() + 2;
  m.w = b.width() + 2;
  m.bits.assign(static_cast<std::size_t>(m.w) * m.h, 0);
  for (const Cell& c : cells) m.bits[m.idx(c.row - m.row0, c.col - m.col0)] = 1;
  return m;
}

std::vector<std::uint8_t> erode2x2(const LocalMask& m, const std::vector<std::uint8_t>& bits) {
  std::vector<std::uint8_t> out(bits.size(), 0);
  for (int r = 0; r + 1 < m.h; ++r)
    for (int c = 0; c + 1 < m.w; ++c) {
      if (bits[m.idx(r, c)] && bits[m.idx(r + 1, c)] && bits[m.idx(r, c + 1)] &&
          bits[m.idx(r + 1, c + 1)])
        out[m.idx(r, c)] = 1;
    }
  return out;
}

constexpr int kNeighbors4[4][2] = {{-1, 0}, {0, -1}, {0, 1}, {1, 0}};
constexpr std::size_t kMinMarkerCells = 6;  // smaller erosion remnants are slivers

// 4-connected components in scan order; returns label map (0 = background)
// and component count.
int label_components(const LocalMask& m, const std::vector<std::uint8_t>& bits,
                     std::vector<int>& labels) {
  labels.assign(bits.size(), 0);
  int next = 0;
  std::vector<std::size_t> stack;
  for (int r = 0; r < m.h; ++r)
    for (int c = 0; c < m.w; ++c) {
      const std::size_t i = m.idx(r, c);
      if (!bits[i] || labels[i]) continue;
      ++next;
      labels[i] = next;
      stack.assign(1, i);
      while (!stack.empty()) {
        const std::size_t cur = stack.back();
        stack.pop_back();
        const int cr = static_cast<int>(cur) / m.w;
        const int cc = static_cast<int>(cur) % m.w;
        for (const auto& d : kNeighbors4) {
          const int nr = cr + d[0], nc = cc + d[1];
          if (!m.in(nr, nc)) continue;
          const std::size_t ni = m.idx(nr, nc);
          if (bits[ni] && !labels[ni]) {
            labels[ni] = next;
            stack.push_back(ni);
          }
        }
      }
    }
  return next;
}

// Exact squared Euclidean distance to the nearest background cell
// (separable lower-envelope transform).
std::vector<long long> squared_edt(const LocalMask& m) {
  const long long inf = static_cast<long long>(m.w + m.h + 1) * (m.w + m.h + 1);
  std::vector<long long> d(m.bits.size());
  // Vertical pass: squared distance to nearest background in the column.
  for (int c = 0; c < m.w; ++c) {
    long long run = inf;
    for (int r = 0; r < m.h; ++r) {
      run = m.bits[m.idx(r, c)] ? std::min(run + 1, static_cast<long long>(m.h + 1)) : 0;
      d[m.idx(r, c)] = run;
    }
    run = inf;
    for (int r = m.h - 1; r >= 0; --r) {
      run = m.bits[m.idx(r, c)] ? std::min(run + 1, static_cast<long long>(m.h + 1)) : 0;
      d[m.idx(r, c)] = std::min(d[m.idx(r, c)], run);
    }
    for (int r = 0; r < m.h; ++r) d[m.idx(r, c)] *= d[m.idx(r, c)];
  }
  // Horizontal pass: lower envelope of parabolas rooted at the column values.
  std::vector<long long> f(m.w), out(m.w);
  std::vector<int> v(m.w);
  std::vector<double> z(m.w + 1);
  for (int r = 0; r < m.h; ++r) {
    for (int c = 0; c < m.w; ++c) f[c] = d[m.idx(r, c)];
    int k = 0;
    v[0] = 0;
    z[0] = -std::numeric_limits<double>::infinity();
    z[1] = std::numeric_limits<double>::infinity();
    for (int q = 1; q < m.w; ++q) {
      double s;
      while (true) {
        const int p = v[k];
        s = (static_cast<double>(f[q] - f[p]) + static_cast<double>(q) * q -
             static_cast<double>(p) * p) /
            (2.0 * (q - p));
        if (s > z[k]) break;
        --k;
      }
      ++k;
      v[k] = q;
      z[k] = s;
      z[k + 1] = std::numeric_limits<double>::infinity();
    }
    k = 0;
    for (int q = 0; q < m.w; ++q) {
      while (z[k + 1] < q) ++k;
      const long long dq = q - v[k];
      out[q] = dq * dq + f[v[k]];
    }
    for (int c = 0; c < m.w; ++c) d[m.idx(r, c)] = out[c];
  }
  return d;
}

struct FloodItem {
  long long depth;
  int r, c, label;
};
struct FloodOrder {
  bool operator()(const FloodItem& a, const FloodItem& b) const {
    if (a.depth != b.depth) return a.depth < b.depth;  // deepest pops first
    if (a.r != b.r) return a.r > b.r;
    return a.c > b.c;
  }
};

std::vector<std::vector<Cell>> split_rec(const std::vector<Cell>& cells, int depth) {
  const std::size_t n = cells.size();
  const RotatedRect rect = mbr(cells);
  if (rect.area() <= kMaxAreaRatio * static_cast<double>(n) + 1e-9 || depth >= 4)
    return {cells};

  LocalMask m = make_local(cells);
  std::vector<std::uint8_t> current = m.bits;
  std::vector<int> markers;
  int n_markers = label_components(m, current, markers);
  if (n_markers < 2) {
    while (true) {
      current = erode2x2(m, current);
      if (std::find(current.begin(), current.end(), 1) == current.end())
        return {cells};  // eroded away before separating
      n_markers = label_components(m, current, markers);
      if (n_markers >= 2) break;
    }
    // Eroding a thin region shatters it into slivers; seeding the watershed
    // with those would mince one doorway into beads. Keep only markers that
    // are substantial remnants of thick lobes, and only split when two or
    // more survive.
    std::vector<std::size_t> marker_size(static_cast<std::size_t>(n_markers) + 1, 0);
    for (const int label : markers)
      if (label) ++marker_size[static_cast<std::size_t>(label)];
    std::vector<int> remap(static_cast<std::size_t>(n_markers) + 1, 0);
    int kept = 0;
    for (int k = 1; k <= n_markers; ++k)
      if (marker_size[static_cast<std::size_t>(k)] >= kMinMarkerCells) remap[k] = ++kept;
    if (kept < 2) return {cells};
    for (int& label : markers) label = remap[label];
    n_markers = kept;
  }

  // Marker-based watershed over the negated distance transform of the
  // original mask: deepest cells flood first, markers keep their labels.
  const std::vector<long long> depth_map = squared_edt(m);
  std::vector<int> labels(m.bits.size(), 0);
  std::priority_queue<FloodItem, std::vector<FloodItem>, FloodOrder> queue;
  for (int r = 0; r < m.h; ++r)
    for (int c = 0; c < m.w; ++c) {
      const std::size_t i = m.idx(r, c);
      if (markers[i]) {
        labels[i] = markers[i];
        queue.push({depth_map[i], r, c, markers[i]});
      }
    }
  while (!queue.empty()) {
    const FloodItem it = queue.top();
    queue.pop();
    for (const auto& d : kNeighbors4) {
      const int nr = it.r + d[0], nc = it.c + d[1];
      if (!m.set(nr, nc)) continue;
      const std::size_t ni = m.idx(nr, nc);
      if (labels[ni]) continue;
      labels[ni] = it.label;
      queue.push({depth_map[ni], nr, nc, it.label});
    }
  }
  // Mask components unreachable from any marker become their own parts.
  for (int r = 0; r < m.h; ++r)
    for (int c = 0; c < m.w; ++c) {
      const std::size_t i = m.idx(r, c);
      if (m.bits[i] && !labels[i]) {
        ++n_markers;
        labels[i] = n_markers;
        std::vector<std::size_t> stack{i};
        while (!stack.empty()) {
          const std::size_t cur = stack.back();
          stack.pop_back();
          const int cr = static_cast<int>(cur) / m.w, cc = static_cast<int>(cur) % m.w;
          for (const auto& d : kNeighbors4) {
            const int ar = cr + d[0], ac = cc + d[1];
            if (!m.set(ar, ac)) continue;
            const std::size_t ai = m.idx(ar, ac);
            if (!labels[ai]) {
              labels[ai] = n_markers;
              stack.push_back(ai);
            }
          }
        }
      }
    }

  std::vector<std::vector<Cell>> parts(n_markers);
  for (const Cell& c : cells) {
    const int label = labels[m.idx(c.row - m.row0, c.col - m.col0)];
    parts[label - 1].push_back(c);
  }
  std::vector<std::vector<Cell>> out;
  for (std::vector<Cell>& part : parts) {
    if (part.empty()) continue;
    if (static_cast<std::size_t>(part.size()) == n) return {cells};  // no progress
    for (std::vector<Cell>& sub : split_rec(part, depth + 1)) out.push_back(std::move(sub));
  }
  return out;
}

const char* state_name(HypothesisState s) {
  switch (s) {
    case HypothesisState::Candidate: return "candidate";
    case HypothesisState::Valid: return "valid";
    case HypothesisState::Rejected: return "rejected";
  }
  return "candidate";
}

HypothesisState state_from_name(const std::string& s) {
  if (s == "candidate") return HypothesisState::Candidate;
  if (s == "valid") return HypothesisState::Valid;
  if (s == "rejected") return HypothesisState::Rejected;
  throw std::runtime_error("hypothesis file: unknown state '" + s + "'");
}

}  // namespace

double iou(const DetectionBox& a, const DetectionBox& b) {
  const long long inter = static_cast<long long>(overlap_1d(a.row, b.row, kPatchSize)) *
                          overlap_1d(a.col, b.col, kPatchSize);
  const long long area = static_cast<long long>(kPatchSize) * kPatchSize;
  return static_cast<double>(inter) / static_cast<double>(2 * area - inter);
}

std::vector<DetectionCluster> cluster(const std::vector<DetectionBox>& boxes,
                                      double iou_threshold) {
  std::vector<std::size_t> order(boxes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (boxes[a].confidence != boxes[b].confidence)
      return boxes[a].confidence > boxes[b].confidence;
    if (boxes[a].row != boxes[b].row) return boxes[a].row < boxes[b].row;
    return boxes[a].col < boxes[b].col;
  });

  std::vector<char> assigned(boxes.size(), 0);
  std::vector<DetectionCluster> clusters;
  for (std::size_t si : order) {
    if (assigned[si]) continue;
    DetectionCluster c;
    c.members.push_back(boxes[si]);
    c.confidence = boxes[si].confidence;
    assigned[si] = 1;
    for (std::size_t bi : order) {
      if (assigned[bi]) continue;
      if (iou(boxes[si], boxes[bi]) > iou_threshold) {
        c.members.push_back(boxes[bi]);
        assigned[bi] = 1;
      }
    }
    clusters.push_back(std::move(c));
  }
  return clusters;
}

std::vector<Cell> fuse_masks(const DetectionCluster& c) {
  std::vector<Cell> cells;
  for (const DetectionBox& b : c.members) {
    if (!b.has_mask()) throw std::invalid_argument("fuse_masks: member without mask");
    for (int r = 0; r < kPatchSize; ++r)
      for (int col = 0; col < kPatchSize; ++col)
        if (b.mask[static_cast<std::size_t>(r) * kPatchSize + col])
          cells.push_back(Cell{b.row + r, b.col + col});
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return cells;
}

RotatedRect mbr(const std::vector<Cell>& cells) {
  if (cells.empty()) throw std::invalid_argument("mbr: empty cell set");
  std::vector<Vec2> centers;
  centers.reserve(cells.size());
  for (const Cell& c : cells) centers.push_back(cell_center(c));
  return inflate(min_area_rect(centers), 0.5);
}

std::vector<std::vector<Cell>> split_if_merged(const std::vector<Cell>& cells) {
  if (cells.empty()) throw std::invalid_argument("split_if_merged: empty cell set");
  return split_rec(cells, 0);
}

std::vector<DoorHypothesis> build_hypotheses(const std::vector<DetectionBox>& filtered,
                                             double iou_threshold) {
  const std::vector<DetectionCluster> clusters = cluster(filtered, iou_threshold);
  std::vector<std::vector<Cell>> fused(clusters.size());
  for (std::size_t i = 0; i < clusters.size(); ++i) fused[i] = fuse_masks(clusters[i]);

  // Fused masks from different clusters can still share cells (e.g. the same
  // door seen from windows too far apart to cluster); merge them before the
  // rectangle stage so each doorway yields one hypothesis.
  std::vector<std::size_t> root(clusters.size());
  std::iota(root.begin(), root.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  std::unordered_map<Cell, std::size_t> owner;
  for (std::size_t i = 0; i < fused.size(); ++i)
    for (const Cell& c : fused[i]) {
      auto [it, inserted] = owner.try_emplace(c, i);
      if (!inserted) {
        const std::size_t a = find(i), b = find(it->second);
        if (a != b) root[std::max(a, b)] = std::min(a, b);
      }
    }

  std::vector<DoorHypothesis> out;
  for (std::size_t i = 0; i < fused.size(); ++i) {
    if (find(i) != i) continue;
    std::vector<Cell> cells;
    double conf = 0.0;
    for (std::size_t j = i; j < fused.size(); ++j) {
      if (find(j) != i) continue;
      cells.insert(cells.end(), fused[j].begin(), fused[j].end());
      conf = std::max(conf, clusters[j].confidence);
    }
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    if (cells.empty()) continue;
    for (std::vector<Cell>& part : split_if_merged(cells)) {
      DoorHypothesis h;
      h.id = static_cast<int>(out.size());
      std::sort(part.begin(), part.end());
      h.cells = std::move(part);
      h.mbr = mbr(h.cells);
      h.area_ratio = h.mbr.area() / static_cast<double>(h.cells.size());
      h.confidence = conf;
      h.unsplittable = h.area_ratio > kMaxAreaRatio + 1e-9;
      out.push_back(std::move(h));
    }
  }
  return out;
}

void write_hypotheses(const std::filesystem::path& path, const HypothesisFile& file) {
  nlohmann::ordered_json doc;
  doc["version"] = kSchemaVersion;
  doc["width"] = file.width;
  doc["height"] = file.height;
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const DoorHypothesis& h : file.hypotheses) {
    nlohmann::ordered_json rec;
    rec["id"] = h.id;
    rec["state"] = state_name(h.state);
    rec["confidence"] = h.confidence;
    rec["area_ratio"] = h.area_ratio;
    rec["unsplittable"] = h.unsplittable;
    rec["ambiguous"] = h.ambiguous;
    rec["segments"] = nlohmann::ordered_json::array({h.segment_a, h.segment_b});
    nlohmann::ordered_json corners = nlohmann::ordered_json::array();
    for (const Vec2& c : h.mbr.corners())
      corners.push_back(nlohmann::ordered_json::array({c.x, c.y}));
    rec["mbr"] = std::move(corners);
    // Mask as runs of consecutive row-major indices: [start, length, ...].
    nlohmann::ordered_json runs = nlohmann::ordered_json::array();
    std::size_t k = 0;
    while (k < h.cells.size()) {
      const long long start =
          static_cast<long long>(h.cells[k].row) * file.width + h.cells[k].col;
      long long len = 1;
      while (k + 1 < h.cells.size() &&
             static_cast<long long>(h.cells[k + 1].row) * file.width + h.cells[k + 1].col ==
                 start + len) {
        ++len;
        ++k;
      }
      runs.push_back(start);
      runs.push_back(len);
      ++k;
    }
    rec["cells_rle"] = std::move(runs);
    list.push_back(std::move(rec));
  }
  doc["hypotheses"] = std::move(list);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

HypothesisFile read_hypotheses(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open hypothesis file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("hypothesis file " + path.string() + ": " + e.what());
  }
  if (!doc.contains("version") || doc["version"].get<int>() != kSchemaVersion)
    throw std::runtime_error("hypothesis file " + path.string() + ": missing/unsupported version");
  HypothesisFile file;
  file.width = doc.at("width").get<int>();
  file.height = doc.at("height").get<int>();
  if (file.width <= 0 || file.height <= 0)
    throw std::runtime_error("hypothesis file: invalid dimensions");
  for (const nlohmann::json& rec : doc.at("hypotheses")) {
    DoorHypothesis h;
    h.id = rec.at("id").get<int>();
    h.state = state_from_name(rec.at("state").get<std::string>());
    h.confidence = rec.at("confidence").get<double>();
    h.area_ratio = rec.at("area_ratio").get<double>();
    h.unsplittable = rec.at("unsplittable").get<bool>();
    h.ambiguous = rec.at("ambiguous").get<bool>();
    h.segment_a = rec.at("segments").at(0).get<int>();
    h.segment_b = rec.at("segments").at(1).get<int>();
    const nlohmann::json& runs = rec.at("cells_rle");
    if (runs.size() % 2 != 0) throw std::runtime_error("hypothesis file: odd run list");
    for (std::size_t k = 0; k < runs.size(); k += 2) {
      const long long start = runs[k].get<long long>();
      const long long len = runs[k + 1].get<long long>();
      if (start < 0 || len <= 0 ||
          start + len > static_cast<long long>(file.width) * file.height)
        throw std::runtime_error("hypothesis file: run out of bounds");
      for (long long i = start; i < start + len; ++i)
        h.cells.push_back(Cell{static_cast<int>(i / file.width),
                               static_cast<int>(i % file.width)});
    }
    const std::vector<Vec2> corners = [&] {
      std::vector<Vec2> cs;
      for (const nlohmann::json& c : rec.at("mbr"))
        cs.push_back(Vec2{c.at(0).get<double>(), c.at(1).get<double>()});
      return cs;
    }();
    if (corners.size() == 4) {
      RotatedRect r;
      r.center = (corners[0] + corners[1] + corners[2] + corners[3]) * 0.25;
      const Vec2 u = corners[1] - corners[0];
      const Vec2 v = corners[3] - corners[0];
      const double lu = norm(u), lv = norm(v);
      r.axis = lu > 0 ? u * (1.0 / lu) : Vec2{1.0, 0.0};
      r.half_u = lu * 0.5;
      r.half_v = lv * 0.5;
      h.mbr = r;
    } else if (!h.cells.empty()) {
      h.mbr = mbr(h.cells);
    }
    file.hypotheses.push_back(std::move(h));
  }
  return file;
}

}  // namespace roomgraph
