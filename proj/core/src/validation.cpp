#include "roomgraph/validation.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "roomgraph/parallel.hpp"
#include "roomgraph/version.hpp"

namespace roomgraph {
namespace {

std::vector<std::int64_t> label_sizes(const SegmentLabelMap& labels) {
  std::vector<std::int64_t> sizes(static_cast<std::size_t>(labels.count) + 1, 0);
  for (std::int32_t l : labels.labels) ++sizes[l];
  return sizes;
}

// Distinct nonzero labels around the cell set, largest two first. The probe
// reaches two cells out so the sealed rim a closed door leaves in the final
// label map does not hide the neighboring segments.
DoorAdjacency adjacent_segments(int door_id, const std::vector<Cell>& cells,
                                const SegmentLabelMap& labels,
                                const std::vector<std::int64_t>& sizes) {
  std::vector<std::int32_t> found;
  for (const Cell& c : cells) {
    for (int dr = -2; dr <= 2; ++dr) {
      for (int dc = -2; dc <= 2; ++dc) {
        const int r = c.row + dr, col = c.col + dc;
        if (r < 0 || col < 0 || r >= labels.height || col >= labels.width) continue;
        const std::int32_t l = labels.at(r, col);
        if (l != 0 && std::find(found.begin(), found.end(), l) == found.end())
          found.push_back(l);
      }
    }
  }
  std::sort(found.begin(), found.end(), [&](std::int32_t a, std::int32_t b) {
    if (sizes[a] != sizes[b]) return sizes[a] > sizes[b];
    return a < b;
  });
  DoorAdjacency adj;
  adj.door_id = door_id;
  adj.ambiguous = found.size() != 2;
  if (!found.empty()) adj.segment_a = found[0];
  if (found.size() > 1) adj.segment_b = found[1];
  if (adj.segment_a > adj.segment_b && adj.segment_b >= 0)
    std::swap(adj.segment_a, adj.segment_b);
  return adj;
}

const char* state_name(HypothesisState s) {
  switch (s) {
    case HypothesisState::Candidate: return "candidate";
    case HypothesisState::Valid: return "valid";
    case HypothesisState::Rejected: return "rejected";
  }
  return "candidate";
}

}  // namespace

ValidationResult validate(const BinaryGrid& b, std::vector<DoorHypothesis> hyps,
                          SegmentationMethod method, const SegmentationParams& params,
                          int jobs) {
  ValidationResult result;

  const BinaryGrid all_closed = close_doors(b, hyps, {});
  const int k0 = count_segments(all_closed, method, params);
  result.report.k_all_closed = k0;

  std::vector<int> k_open(hyps.size(), 0);
  parallel_for(hyps.size(), jobs, [&](std::size_t i) {
    const BinaryGrid opened = close_doors(b, hyps, {hyps[i].id});
    k_open[i] = count_segments(opened, method, params);
  });

  for (std::size_t i = 0; i < hyps.size(); ++i) {
    DoorHypothesis& h = hyps[i];
    if (k_open[i] == k0 - 1) {
      h.state = HypothesisState::Valid;
    } else if (k_open[i] >= k0) {
      h.state = HypothesisState::Rejected;
    } else {
      // One opening merged more than two segments: surfaced, not silently
      // resolved; the two largest merged segments get linked below.
      h.state = HypothesisState::Valid;
      h.ambiguous = true;
    }
  }

  // Final instance map: valid doors closed, rejected ones reverted to the
  // original occupancy (rejection means "not a door", not "wall").
  std::vector<int> rejected_ids;
  for (const DoorHypothesis& h : hyps)
    if (h.state != HypothesisState::Valid) rejected_ids.push_back(h.id);
  const BinaryGrid final_grid = close_doors(b, hyps, rejected_ids);
  result.labels = segment(final_grid, method, params);

  const std::vector<std::int64_t> sizes = label_sizes(result.labels);
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    DoorHypothesis& h = hyps[i];
    if (h.state == HypothesisState::Valid) {
      const DoorAdjacency adj = adjacent_segments(h.id, h.cells, result.labels, sizes);
      h.segment_a = adj.segment_a;
      h.segment_b = adj.segment_b;
      if (adj.ambiguous) h.ambiguous = true;
    }
    result.report.entries.push_back(ValidationEntry{h.id, k_open[i], h.state, h.ambiguous,
                                                    h.segment_a, h.segment_b});
  }
  result.hypotheses = std::move(hyps);
  return result;
}

std::vector<DoorAdjacency> associate_doors(const std::vector<DoorHypothesis>& valid,
                                           const SegmentLabelMap& labels) {
  const std::vector<std::int64_t> sizes = label_sizes(labels);
  std::vector<DoorAdjacency> out;
  out.reserve(valid.size());
  for (const DoorHypothesis& h : valid)
    out.push_back(adjacent_segments(h.id, h.cells, labels, sizes));
  return out;
}

void write_validation_report(const std::filesystem::path& path, const ValidationResult& r) {
  nlohmann::ordered_json doc;
  doc["version"] = kSchemaVersion;
  doc["k_all_closed"] = r.report.k_all_closed;
  doc["final_segments"] = r.labels.count;
  int n_valid = 0, n_rejected = 0, n_ambiguous = 0;
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const ValidationEntry& e : r.report.entries) {
    n_valid += e.state == HypothesisState::Valid;
    n_rejected += e.state == HypothesisState::Rejected;
    n_ambiguous += e.ambiguous;
    nlohmann::ordered_json rec;
    rec["id"] = e.id;
    rec["k_open"] = e.k_open;
    rec["state"] = state_name(e.state);
    rec["ambiguous"] = e.ambiguous;
    rec["segments"] = nlohmann::ordered_json::array({e.segment_a, e.segment_b});
    list.push_back(std::move(rec));
  }
  doc["valid"] = n_valid;
  doc["rejected"] = n_rejected;
  doc["ambiguous"] = n_ambiguous;
  doc["hypotheses"] = std::move(list);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace roomgraph
