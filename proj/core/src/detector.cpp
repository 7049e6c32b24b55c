#include "roomgraph/detector.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "roomgraph/parallel.hpp"
#include "roomgraph/rle.hpp"
#include "roomgraph/version.hpp"

namespace roomgraph {
namespace {

constexpr double kGapSlackM = 0.1;        // accepted beyond the 0.7-1.6 m interval
constexpr double kMinFlankM = 0.3;        // wall required on each side of a gap
constexpr double kFlankFullScoreM = 1.0;  // flank length earning full marks
constexpr int kPinholeMergeCells = 2;     // free gaps absorbed into wall runs
constexpr int kMaxGapInterruption = 4;    // occupied cells tolerated inside a gap
constexpr int kMaxBandHalfWidth = 5;      // wall-thickness probe limit

struct ScanDir {
  int dr, dc;        // step along the line
  int pr, pc;        // perpendicular step (side +1)
  double step_m;     // metric length of one step
  const int* side_offsets;
  int n_side_offsets;
};

struct Run {
  int begin = 0;  // line indices, inclusive begin, exclusive end
  int end = 0;
  int length() const { return end - begin; }
};

struct Candidate {
  double confidence = 0.0;
  bool valid = false;
  // Everything needed to rasterize the gap rectangle afterwards.
  const ScanDir* dir = nullptr;
  int origin_r = 0, origin_c = 0;  // line start cell
  int gap_begin = 0, gap_end = 0;  // line indices spanning the opening
  int flank_a_last = 0, flank_b_first = 0;
};

constexpr int kAxisOffsets[] = {2, 3, 4};
constexpr int kDiagOffsets[] = {2, 3};

// Maximal occupied runs along one scan line, then pinhole merging: runs
// separated by at most kPinholeMergeCells free cells fuse into one.
std::vector<Run> merged_runs(const std::vector<std::uint8_t>& line) {
  std::vector<Run> runs;
  const int n = static_cast<int>(line.size());
  int i = 0;
  while (i < n) {
    if (!line[i]) {
      ++i;
      continue;
    }
    Run r{i, i};
    while (r.end < n && line[r.end]) ++r.end;
    i = r.end;
    runs.push_back(r);
  }
  std::vector<Run> merged;
  for (const Run& r : runs) {
    if (!merged.empty() && r.begin - merged.back().end <= kPinholeMergeCells)
      merged.back().end = r.end;
    else
      merged.push_back(r);
  }
  return merged;
}

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

class PatchScanner {
 public:
  explicit PatchScanner(const BinaryGrid& b) : b_(b) {}

  Candidate best() const { return best_; }

  void scan_line(const ScanDir& dir, int r0, int c0) {
    line_cells_.clear();
    line_.clear();
    for (int r = r0, c = c0; r >= 0 && r < b_.height && c >= 0 && c < b_.width;
         r += dir.dr, c += dir.dc) {
      line_cells_.push_back({r, c});
      line_.push_back(b_.occupied[b_.index(r, c)]);
    }
    if (static_cast<int>(line_.size()) < 24) return;

    const std::vector<Run> runs = merged_runs(line_);
    for (std::size_t i = 0; i < runs.size(); ++i) {
      for (std::size_t j = i + 1; j < runs.size() && j <= i + 2; ++j) {
        int interruption = 0;
        if (j == i + 2) {
          interruption = runs[i + 1].length();
          if (interruption > kMaxGapInterruption) break;
        }
        consider(dir, runs[i], runs[j], interruption);
      }
    }
  }

 private:
  struct LineCell {
    int r, c;
  };

  void consider(const ScanDir& dir, const Run& a, const Run& b, int interruption) {
    const int span = b.begin - a.end;
    const double gap_m = span * dir.step_m;
    if (gap_m < 0.7 - kGapSlackM || gap_m > 1.6 + kGapSlackM) return;
    const double len_a = a.length() * dir.step_m;
    const double len_b = b.length() * dir.step_m;
    if (len_a < kMinFlankM - 1e-9 || len_b < kMinFlankM - 1e-9) return;

    // Free clearance perpendicular to the gap, both sides of the wall axis.
    // Checked over the whole opening and again over the few cells nearest
    // each flank: a doorway is approachable at both jambs, while a wedge
    // between two oblique walls (rotated corners) closes onto its flanks.
    free_positions_.clear();
    for (int p = a.end; p < b.begin; ++p)
      if (!line_[p]) free_positions_.push_back(p);
    if (free_positions_.empty()) return;
    const int n_free = static_cast<int>(free_positions_.size());
    const int n_end = std::min(3, n_free);
    double side_frac[2];
    for (int s = 0; s < 2; ++s) {
      const int sign = s == 0 ? 1 : -1;
      auto free_fraction = [&](int lo, int hi, double& frac) {
        int total = 0, free_cells = 0;
        for (int k = lo; k < hi; ++k) {
          const int p = free_positions_[k];
          for (int oi = 0; oi < dir.n_side_offsets; ++oi) {
            const int o = sign * dir.side_offsets[oi];
            const int rr = line_cells_[p].r + dir.pr * o;
            const int cc = line_cells_[p].c + dir.pc * o;
            if (!b_.in_bounds(rr, cc)) continue;
            ++total;
            free_cells += b_.is_free(rr, cc);
          }
        }
        if (total == 0) {
          frac = -1.0;
          return false;
        }
        frac = static_cast<double>(free_cells) / total;
        return frac >= 0.5;
      };
      double end_frac;
      if (!free_fraction(0, n_free, side_frac[s])) return;
      // End regions with every probe off-patch stay unverified but allowed.
      if (!free_fraction(0, n_end, end_frac) && end_frac >= 0.0) return;
      if (!free_fraction(n_free - n_end, n_free, end_frac) && end_frac >= 0.0) return;
    }

    const double flank_score = clamp01(std::min(len_a, len_b) / kFlankFullScoreM);
    const double gap_score = clamp01(1.0 - std::abs(gap_m - 1.15) / 0.55);
    const double clear_score = 0.5 * (side_frac[0] + side_frac[1]);
    const double interrupt_score = 1.0 - interruption / 5.0;
    const double conf = 0.3 * flank_score + 0.25 * gap_score + 0.3 * clear_score +
                        0.15 * interrupt_score;
    if (!best_.valid || conf > best_.confidence) {
      best_.valid = true;
      best_.confidence = conf;
      best_.dir = &dir;
      best_.origin_r = line_cells_[0].r;
      best_.origin_c = line_cells_[0].c;
      best_.gap_begin = a.end;
      best_.gap_end = b.begin;
      best_.flank_a_last = a.end - 1;
      best_.flank_b_first = b.begin;
    }
  }

  const BinaryGrid& b_;
  std::vector<LineCell> line_cells_;
  std::vector<std::uint8_t> line_;
  std::vector<int> free_positions_;
  Candidate best_;
};

// Occupied extent of the wall band around a flank endpoint, walked along the
// perpendicular axis. Always contains offset 0.
void band_extent(const BinaryGrid& b, int r, int c, int pr, int pc, int& lo, int& hi) {
  for (int o = 1; o <= kMaxBandHalfWidth; ++o) {
    if (!b.in_bounds(r + pr * o, c + pc * o) || !b.is_occupied(r + pr * o, c + pc * o)) break;
    hi = std::max(hi, o);
  }
  for (int o = 1; o <= kMaxBandHalfWidth; ++o) {
    if (!b.in_bounds(r - pr * o, c - pc * o) || !b.is_occupied(r - pr * o, c - pc * o)) break;
    lo = std::min(lo, -o);
  }
}

std::vector<std::uint8_t> rasterize_gap(const BinaryGrid& b, const Candidate& cand) {
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(kPatchSize) * kPatchSize, 0);
  const ScanDir& d = *cand.dir;
  auto line_cell = [&](int idx, int& r, int& c) {
    r = cand.origin_r + d.dr * idx;
    c = cand.origin_c + d.dc * idx;
  };
  int lo = 0, hi = 0;
  int r, c;
  line_cell(cand.flank_a_last, r, c);
  band_extent(b, r, c, d.pr, d.pc, lo, hi);
  line_cell(cand.flank_b_first, r, c);
  band_extent(b, r, c, d.pr, d.pc, lo, hi);
  for (int p = cand.gap_begin; p < cand.gap_end; ++p) {
    line_cell(p, r, c);
    for (int o = lo; o <= hi; ++o) {
      const int rr = r + d.pr * o;
      const int cc = c + d.pc * o;
      if (rr >= 0 && rr < kPatchSize && cc >= 0 && cc < kPatchSize)
        mask[static_cast<std::size_t>(rr) * kPatchSize + cc] = 1;
    }
  }
  return mask;
}

const double kDiagStep = kNormalizedResolution * std::sqrt(2.0);

DetectionBox oracle_detect(const Patch& patch, const GroundTruth& truth) {
  DetectionBox box;
  box.row = patch.row;
  box.col = patch.col;
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(kPatchSize) * kPatchSize, 0);
  bool hit = false;
  for (const DoorTruth& d : truth.doors) {
    if (!door_within_patch(d, patch.row, patch.col)) continue;
    hit = true;
    for (const Cell& cell : d.cells) {
      const int lr = cell.row - patch.row, lc = cell.col - patch.col;
      if (lr >= 0 && lr < kPatchSize && lc >= 0 && lc < kPatchSize)
        mask[static_cast<std::size_t>(lr) * kPatchSize + lc] = 1;
    }
  }
  if (hit) {
    box.confidence = 1.0;
    box.mask = std::move(mask);
  }
  return box;
}

}  // namespace

DetectionBox baseline_detect(const Patch& patch) {
  const BinaryGrid b = binarize_patch(patch);
  const ScanDir dirs[4] = {
      {0, 1, 1, 0, kNormalizedResolution, kAxisOffsets, 3},   // rows
      {1, 0, 0, 1, kNormalizedResolution, kAxisOffsets, 3},   // columns
      {1, 1, -1, 1, kDiagStep, kDiagOffsets, 2},              // down-right diagonal
      {-1, 1, 1, 1, kDiagStep, kDiagOffsets, 2},              // up-right diagonal
  };

  PatchScanner scanner(b);
  for (int r = 0; r < kPatchSize; ++r) scanner.scan_line(dirs[0], r, 0);
  for (int c = 0; c < kPatchSize; ++c) scanner.scan_line(dirs[1], 0, c);
  for (int c = 0; c < kPatchSize; ++c) scanner.scan_line(dirs[2], 0, c);
  for (int r = 1; r < kPatchSize; ++r) scanner.scan_line(dirs[2], r, 0);
  for (int c = 0; c < kPatchSize; ++c) scanner.scan_line(dirs[3], kPatchSize - 1, c);
  for (int r = 0; r < kPatchSize - 1; ++r) scanner.scan_line(dirs[3], r, 0);

  DetectionBox box;
  box.row = patch.row;
  box.col = patch.col;
  const Candidate best = scanner.best();
  if (best.valid) {
    box.confidence = best.confidence;
    box.mask = rasterize_gap(b, best);
  }
  return box;
}

std::vector<DetectionBox> detect(const std::vector<Patch>& patches,
                                 const DetectorConfig& cfg) {
  std::vector<DetectionBox> out(patches.size());
  switch (cfg.backend) {
    case DetectorBackend::Baseline:
      parallel_for(patches.size(), cfg.jobs,
                   [&](std::size_t i) { out[i] = baseline_detect(patches[i]); });
      break;
    case DetectorBackend::Oracle: {
      if (cfg.ground_truth == nullptr)
        throw std::invalid_argument("oracle backend requires ground truth");
      const GroundTruth& truth = *cfg.ground_truth;
      parallel_for(patches.size(), cfg.jobs,
                   [&](std::size_t i) { out[i] = oracle_detect(patches[i], truth); });
      break;
    }
    case DetectorBackend::Ingest: {
      out = read_detections(cfg.detections_path);
      if (out.size() != patches.size())
        throw std::runtime_error("detections file: record count " +
                                 std::to_string(out.size()) + " does not match window count " +
                                 std::to_string(patches.size()));
      for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i].row != patches[i].row || out[i].col != patches[i].col)
          throw std::runtime_error("detections file: record " + std::to_string(i) +
                                   " origin does not match window sequence");
      }
      break;
    }
  }
  return out;
}

std::vector<DetectionBox> filter_detections(const std::vector<DetectionBox>& boxes,
                                            double threshold) {
  std::vector<DetectionBox> kept;
  for (const DetectionBox& b : boxes)
    if (b.confidence >= threshold) kept.push_back(b);
  return kept;
}

void write_detections(const std::filesystem::path& path,
                      const std::vector<DetectionBox>& boxes) {
  nlohmann::ordered_json doc;
  doc["version"] = kSchemaVersion;
  doc["patch_size"] = kPatchSize;
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const DetectionBox& b : boxes) {
    nlohmann::ordered_json rec;
    rec["row"] = b.row;
    rec["col"] = b.col;
    rec["confidence"] = b.confidence;
    if (b.has_mask()) rec["mask_rle"] = rle_encode(b.mask);
    records.push_back(std::move(rec));
  }
  doc["detections"] = std::move(records);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

std::vector<DetectionBox> read_detections(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open detections file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("detections file " + path.string() + ": " + e.what());
  }
  if (!doc.contains("version"))
    throw std::runtime_error("detections file " + path.string() + ": missing version");
  if (doc["version"].get<int>() != kSchemaVersion)
    throw std::runtime_error("detections file " + path.string() + ": unsupported version");
  if (doc.value("patch_size", kPatchSize) != kPatchSize)
    throw std::runtime_error("detections file " + path.string() + ": unsupported patch size");
  std::vector<DetectionBox> out;
  for (const nlohmann::json& rec : doc.at("detections")) {
    DetectionBox b;
    b.row = rec.at("row").get<int>();
    b.col = rec.at("col").get<int>();
    b.confidence = rec.at("confidence").get<double>();
    if (b.confidence < 0.0 || b.confidence > 1.0)
      throw std::runtime_error("detections file: confidence outside [0, 1]");
    if (rec.contains("mask_rle"))
      b.mask = rle_decode(rec["mask_rle"].get<std::vector<int>>(),
                          static_cast<std::size_t>(kPatchSize) * kPatchSize);
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace roomgraph
