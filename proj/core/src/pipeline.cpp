#include "roomgraph/pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "roomgraph/render.hpp"
#include "roomgraph/version.hpp"

namespace roomgraph {
namespace {

const char* backend_name(DetectorBackend b) {
  switch (b) {
    case DetectorBackend::Baseline: return "baseline";
    case DetectorBackend::Ingest: return "ingest";
    case DetectorBackend::Oracle: return "oracle";
  }
  return "baseline";
}

// Prefixes any stage failure with the stage name so callers can tell where a
// run broke.
template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string(name) + ": " + e.what());
  }
}

}  // namespace

PipelineResult run_pipeline_on_grid(const OccupancyGrid& raw, const PipelineConfig& cfg,
                                    const std::string& source_name) {
  PipelineResult r;
  r.normalized = stage("normalize", [&] { return normalize_resolution(raw); });
  r.binary = binarize(r.normalized);

  const std::vector<Patch> patches = sliding_windows(r.normalized, cfg.stride);
  DetectorConfig dcfg;
  dcfg.backend = cfg.backend;
  dcfg.confidence_threshold = cfg.confidence_threshold;
  dcfg.detections_path = cfg.detections_path;
  dcfg.ground_truth = cfg.ground_truth;
  dcfg.jobs = cfg.jobs;
  r.detections = stage("detect", [&] { return detect(patches, dcfg); });
  r.filtered = filter_detections(r.detections, cfg.confidence_threshold);

  std::vector<DoorHypothesis> hyps = stage(
      "cluster", [&] { return build_hypotheses(r.filtered, cfg.iou_threshold); });
  for (DoorHypothesis h : cfg.injected) {
    h.id = static_cast<int>(hyps.size());
    h.state = HypothesisState::Candidate;
    hyps.push_back(std::move(h));
  }

  r.validation = stage("validate", [&] {
    return validate(r.binary, std::move(hyps), cfg.method, cfg.seg_params, cfg.jobs);
  });
  for (const DoorHypothesis& h : r.validation.hypotheses)
    if (h.state == HypothesisState::Valid) r.valid_doors.push_back(h);
  r.adjacency = associate_doors(r.valid_doors, r.validation.labels);
  r.scores = stage("categorize", [&] {
    return score_segments(r.validation.labels, r.adjacency, cfg.spin_mode);
  });
  r.topomap = stage("topometric", [&] {
    return build_topometric(r.validation.labels, r.valid_doors, r.adjacency, r.scores,
                            r.normalized, source_name);
  });
  r.degenerate = r.valid_doors.empty();
  return r;
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  const OccupancyGrid grid = stage("load", [&] { return load_map(cfg.map_path); });
  return run_pipeline_on_grid(grid, cfg, cfg.map_path.filename().string());
}

void write_pipeline_outputs(const std::filesystem::path& out_dir,
                            const PipelineResult& result, const PipelineConfig& cfg) {
  std::filesystem::create_directories(out_dir);

  write_detections(out_dir / "detections.json", result.detections);
  HypothesisFile hf;
  hf.width = result.binary.width;
  hf.height = result.binary.height;
  hf.hypotheses = result.validation.hypotheses;
  write_hypotheses(out_dir / "hypotheses.json", hf);
  write_validation_report(out_dir / "validation.json", result.validation);
  write_scores(out_dir / "scores.json", result.scores);

  write_pgm(out_dir / "labels.pgm", label_index_image(result.validation.labels));
  write_ppm(out_dir / "labels.ppm", render_labels(result.validation.labels));
  write_ppm(out_dir / "entities.ppm",
            render_entities(result.validation.labels, result.scores, result.valid_doors));
  write_ppm(out_dir / "heatmap.ppm", render_heatmap(result.validation.labels, result.scores));

  {
    std::ofstream dot(out_dir / "topomap.dot", std::ios::binary);
    if (!dot) throw std::runtime_error("cannot write topomap.dot");
    dot << export_dot(result.topomap);
    std::ofstream js(out_dir / "topomap.json", std::ios::binary);
    if (!js) throw std::runtime_error("cannot write topomap.json");
    js << export_json(result.topomap);
  }

  nlohmann::ordered_json manifest;
  manifest["version"] = kVersion;
  manifest["schema"] = kSchemaVersion;
  nlohmann::ordered_json flags;
  flags["map"] = cfg.map_path.string();
  flags["backend"] = backend_name(cfg.backend);
  flags["confidence"] = cfg.confidence_threshold;
  flags["iou"] = cfg.iou_threshold;
  flags["stride"] = cfg.stride;
  flags["method"] =
      cfg.method == SegmentationMethod::Components ? "components" : "graph";
  flags["felz_k"] = cfg.seg_params.felz_k;
  flags["min_segment_size"] = cfg.seg_params.min_segment_size;
  flags["spin"] = cfg.spin_mode == SpinMode::MeanSquared ? "mean-squared" : "mean-absolute";
  if (!cfg.detections_path.empty()) flags["detections"] = cfg.detections_path.string();
  manifest["flags"] = std::move(flags);
  nlohmann::ordered_json inputs;
  if (!cfg.map_path.empty() && std::filesystem::exists(cfg.map_path))
    inputs[cfg.map_path.filename().string()] = hash_hex(file_hash(cfg.map_path));
  if (!cfg.detections_path.empty() && std::filesystem::exists(cfg.detections_path))
    inputs[cfg.detections_path.filename().string()] =
        hash_hex(file_hash(cfg.detections_path));
  manifest["inputs"] = std::move(inputs);
  manifest["outputs"] = nlohmann::ordered_json::array(
      {"detections.json", "hypotheses.json", "validation.json", "scores.json",
       "labels.pgm", "labels.ppm", "entities.ppm", "heatmap.ppm", "topomap.dot",
       "topomap.json"});
  manifest["degenerate"] = result.degenerate;
  manifest["valid_doors"] = static_cast<int>(result.valid_doors.size());
  manifest["segments"] = result.validation.labels.count;

  std::ofstream out(out_dir / "manifest.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest.json");
  out << manifest.dump(2) << '\n';
}

std::uint64_t file_hash(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot hash " + path.string());
  std::uint64_t h = 1469598103934665603ull;
  char buf[65536];
  while (in) {
    in.read(buf, sizeof(buf));
    const std::streamsize n = in.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace roomgraph
