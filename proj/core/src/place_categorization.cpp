#include "roomgraph/place_categorization.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "roomgraph/version.hpp"

namespace roomgraph {

std::vector<int> door_counts(const std::vector<DoorAdjacency>& adjacency,
                             int segment_count) {
  std::vector<int> counts(static_cast<std::size_t>(segment_count) + 1, 0);
  for (const DoorAdjacency& a : adjacency) {
    if (a.segment_a >= 1 && a.segment_a <= segment_count) ++counts[a.segment_a];
    if (a.segment_b >= 1 && a.segment_b <= segment_count) ++counts[a.segment_b];
  }
  return counts;
}

std::vector<double> compute_pd(const std::vector<int>& counts) {
  std::vector<double> pd(counts.size(), 0.0);
  int max_count = 0;
  for (std::size_t i = 1; i < counts.size(); ++i) max_count = std::max(max_count, counts[i]);
  if (max_count == 0) return pd;
  for (std::size_t i = 1; i < counts.size(); ++i)
    pd[i] = static_cast<double>(counts[i]) / max_count;
  return pd;
}

SpinResult compute_spin(const std::vector<Cell>& cells, SpinMode mode) {
  if (cells.empty()) throw std::invalid_argument("compute_spin: empty segment");
  const double n = static_cast<double>(cells.size());
  double cx = 0.0, cy = 0.0;
  for (const Cell& c : cells) {
    const Vec2 p = cell_center(c);
    cx += p.x;
    cy += p.y;
  }
  cx /= n;
  cy /= n;

  double acc = 0.0;
  for (const Cell& c : cells) {
    const Vec2 p = cell_center(c);
    const double dx = p.x - cx, dy = p.y - cy;
    const double d2 = dx * dx + dy * dy;
    acc += mode == SpinMode::MeanSquared ? d2 : std::sqrt(d2);
  }

  SpinResult r;
  r.s = acc / n;
  const double r_eac = std::sqrt(n / kPi);
  r.s_eac = mode == SpinMode::MeanSquared ? 0.5 * r_eac * r_eac : (2.0 / 3.0) * r_eac;
  r.p_s = cells.size() == 1 ? 1.0 : std::min(1.0, r.s_eac / r.s);
  return r;
}

std::vector<EntityScore> score_segments(const SegmentLabelMap& labels,
                                        const std::vector<DoorAdjacency>& adjacency,
                                        SpinMode mode) {
  std::vector<std::vector<Cell>> cells(static_cast<std::size_t>(labels.count) + 1);
  for (int r = 0; r < labels.height; ++r)
    for (int c = 0; c < labels.width; ++c) {
      const std::int32_t l = labels.at(r, c);
      if (l > 0) cells[l].push_back(Cell{r, c});
    }

  const std::vector<int> counts = door_counts(adjacency, labels.count);
  const std::vector<double> pd = compute_pd(counts);

  std::vector<EntityScore> scores;
  scores.reserve(labels.count);
  for (int id = 1; id <= labels.count; ++id) {
    EntityScore s;
    s.segment_id = id;
    s.door_count = counts[id];
    s.door_score = pd[id];
    const SpinResult spin = compute_spin(cells[id], mode);
    s.spin_index = spin.s;
    s.eac_spin_index = spin.s_eac;
    s.normalized_spin = spin.p_s;
    scores.push_back(s);
  }
  combine_and_label(scores);
  return scores;
}

void combine_and_label(std::vector<EntityScore>& scores) {
  for (EntityScore& s : scores) {
    s.corridor_confidence = s.door_score * (1.0 - s.normalized_spin);
    s.uncertain = s.corridor_confidence >= kCorridorFallback &&
                  s.corridor_confidence < kCorridorThreshold;
  }
  // Strict maximum: no other segment reaches the same confidence.
  int best = -1;
  bool strict = false;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (best < 0 || scores[i].corridor_confidence > scores[best].corridor_confidence) {
      best = static_cast<int>(i);
      strict = true;
    } else if (scores[i].corridor_confidence == scores[best].corridor_confidence) {
      strict = false;
    }
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    EntityScore& s = scores[i];
    s.corridor = s.corridor_confidence >= kCorridorThreshold ||
                 (strict && static_cast<int>(i) == best &&
                  s.corridor_confidence >= kCorridorFallback);
  }
}

void write_scores(const std::filesystem::path& path,
                  const std::vector<EntityScore>& scores) {
  nlohmann::ordered_json doc;
  doc["version"] = kSchemaVersion;
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const EntityScore& s : scores) {
    nlohmann::ordered_json rec;
    rec["segment"] = s.segment_id;
    rec["doors"] = s.door_count;
    rec["p_d"] = s.door_score;
    rec["spin"] = s.spin_index;
    rec["spin_eac"] = s.eac_spin_index;
    rec["p_s"] = s.normalized_spin;
    rec["p_comb"] = s.corridor_confidence;
    rec["label"] = s.corridor ? "corridor" : "room";
    rec["uncertain"] = s.uncertain;
    list.push_back(std::move(rec));
  }
  doc["segments"] = std::move(list);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace roomgraph
