// roomgraph command line: seeded floorplan simulation and the full
// map -> doors -> validated segments -> topometric graph pipeline.
//
// Exit codes: 0 success, 2 bad input (flags or files), 3 degenerate run
// (pipeline finished but found no valid doors; outputs are still written).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "roomgraph/occupancy_grid.hpp"
#include "roomgraph/parallel.hpp"
#include "roomgraph/pgm.hpp"
#include "roomgraph/pipeline.hpp"
#include "roomgraph/render.hpp"
#include "roomgraph/simulator.hpp"
#include "roomgraph/version.hpp"

namespace {

using namespace roomgraph;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;

// Decorrelates the noise stream from the layout stream of the same map seed.
constexpr std::uint64_t kNoiseSeedSalt = 0x9e3779b97f4a7c15ull;

std::string fmt(const char* pattern, std::size_t i) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, static_cast<unsigned long long>(i));
  return buf;
}

struct SimulateArgs {
  std::filesystem::path out;
  std::uint64_t seed = 1;
  int count = 1;
  NoiseKind noise_kind = NoiseKind::Combined;
  int noise_level = 0;
  int min_rooms = 4;
  int max_rooms = 10;
  bool no_patches = false;
  int jobs = 1;
};

GrayImage patch_image(const Patch& p) {
  GrayImage img;
  img.width = kPatchSize;
  img.height = kPatchSize;
  img.pixels.resize(static_cast<std::size_t>(kPatchSize) * kPatchSize);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    const double v = std::clamp(static_cast<double>(p.data[i]), 0.0, 1.0);
    img.pixels[i] = static_cast<std::uint8_t>(std::lround(255.0 * (1.0 - v)));
  }
  return img;
}

GrayImage mask_image(const std::vector<std::uint8_t>& mask) {
  GrayImage img;
  img.width = kPatchSize;
  img.height = kPatchSize;
  img.pixels.resize(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) img.pixels[i] = mask[i] ? 255 : 0;
  return img;
}

int run_simulate(const SimulateArgs& a) {
  if (a.min_rooms > a.max_rooms)
    throw std::runtime_error("--min-rooms must not exceed --max-rooms");
  std::filesystem::create_directories(a.out);

  struct Bundle {
    FloorplanMap fm;
    OccupancyGrid noisy;
    std::vector<TrainingSample> samples;
  };
  std::vector<Bundle> bundles(static_cast<std::size_t>(a.count));
  const NoiseSpec noise{a.noise_kind, a.noise_level};

  parallel_for(bundles.size(), a.jobs, [&](std::size_t i) {
    FloorplanSpec spec;
    spec.seed = a.seed + i;
    spec.room_count = {a.min_rooms, a.max_rooms};
    Bundle& b = bundles[i];
    b.fm = generate_floorplan(spec);
    b.noisy = apply_noise(b.fm.grid, noise, spec.seed ^ kNoiseSeedSalt);
    if (!a.no_patches) b.samples = extract_training_samples(b.noisy, b.fm.truth);
  });

  nlohmann::ordered_json manifest;
  manifest["version"] = kVersion;
  manifest["schema"] = kSchemaVersion;
  nlohmann::ordered_json flags;
  flags["seed"] = a.seed;
  flags["count"] = a.count;
  flags["noise_kind"] = a.noise_kind == NoiseKind::Gaussian ? "gaussian" : "combined";
  flags["noise_level"] = a.noise_level;
  flags["min_rooms"] = a.min_rooms;
  flags["max_rooms"] = a.max_rooms;
  flags["patches"] = !a.no_patches;
  manifest["flags"] = std::move(flags);
  nlohmann::ordered_json maps = nlohmann::ordered_json::array();

  for (std::size_t i = 0; i < bundles.size(); ++i) {
    const Bundle& b = bundles[i];
    std::vector<std::string> artifacts;
    const std::string map_yaml = fmt("map_%03llu.yaml", i);
    const std::string noisy_yaml = fmt("map_%03llu_noisy.yaml", i);
    const std::string truth_json = fmt("truth_%03llu.json", i);
    const std::string classes_pgm = fmt("classes_%03llu.pgm", i);
    const std::string classes_ppm = fmt("classes_%03llu.ppm", i);

    save_map(b.fm.grid, a.out / map_yaml);
    artifacts.push_back(map_yaml);
    artifacts.push_back(fmt("map_%03llu.pgm", i));
    save_map(b.noisy, a.out / noisy_yaml);
    artifacts.push_back(noisy_yaml);
    artifacts.push_back(fmt("map_%03llu_noisy.pgm", i));
    write_ground_truth(a.out / truth_json, b.fm.truth);
    artifacts.push_back(truth_json);
    write_pgm(a.out / classes_pgm, class_index_image(b.fm.truth));
    artifacts.push_back(classes_pgm);
    write_ppm(a.out / classes_ppm, render_classes(b.fm.truth));
    artifacts.push_back(classes_ppm);

    if (!a.no_patches) {
      const std::string patch_dir = fmt("patches_%03llu", i);
      std::filesystem::create_directories(a.out / patch_dir);
      nlohmann::ordered_json samples = nlohmann::ordered_json::array();
      for (std::size_t j = 0; j < b.samples.size(); ++j) {
        const TrainingSample& s = b.samples[j];
        const std::string patch_pgm = fmt("patch_%04llu.pgm", j);
        write_pgm(a.out / patch_dir / patch_pgm, patch_image(s.patch));
        artifacts.push_back(patch_dir + "/" + patch_pgm);
        nlohmann::ordered_json rec;
        rec["patch"] = patch_pgm;
        rec["row"] = s.patch.row;
        rec["col"] = s.patch.col;
        rec["door"] = s.is_door;
        if (s.is_door) {
          const std::string mask_pgm = fmt("mask_%04llu.pgm", j);
          write_pgm(a.out / patch_dir / mask_pgm, mask_image(s.mask));
          artifacts.push_back(patch_dir + "/" + mask_pgm);
          rec["mask"] = mask_pgm;
        }
        samples.push_back(std::move(rec));
      }
      nlohmann::ordered_json labels;
      labels["version"] = kVersion;
      labels["schema"] = kSchemaVersion;
      labels["count"] = b.samples.size();
      labels["samples"] = std::move(samples);
      const std::string labels_json = patch_dir + "/labels.json";
      {
        std::ofstream out(a.out / labels_json, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + labels_json);
        out << labels.dump(2) << '\n';
      }
      artifacts.push_back(labels_json);
    }

    nlohmann::ordered_json rec;
    rec["index"] = i;
    rec["seed"] = a.seed + i;
    rec["rooms"] = b.fm.truth.room_count;
    rec["doors"] = b.fm.truth.doors.size();
    rec["width"] = b.fm.truth.width;
    rec["height"] = b.fm.truth.height;
    nlohmann::ordered_json files;
    for (const std::string& rel : artifacts) files[rel] = hash_hex(file_hash(a.out / rel));
    rec["artifacts"] = std::move(files);
    maps.push_back(std::move(rec));
  }
  manifest["maps"] = std::move(maps);

  std::ofstream out(a.out / "manifest.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest.json");
  out << manifest.dump(2) << '\n';
  return kExitOk;
}

struct PipelineArgs {
  PipelineConfig cfg;
  std::filesystem::path out;
  std::filesystem::path truth;
};

int run_pipeline_cmd(PipelineArgs& a) {
  GroundTruth gt;
  if (a.cfg.backend == DetectorBackend::Oracle) {
    if (a.truth.empty())
      throw std::runtime_error("oracle backend requires --truth <ground-truth.json>");
    gt = read_ground_truth(a.truth);
    a.cfg.ground_truth = &gt;
  }
  if (a.cfg.backend == DetectorBackend::Ingest && a.cfg.detections_path.empty())
    throw std::runtime_error("ingest backend requires --detections <detections.json>");

  const PipelineResult result = run_pipeline(a.cfg);
  write_pipeline_outputs(a.out, result, a.cfg);
  if (result.degenerate) {
    std::fprintf(stderr, "no doors found\n");
    return kExitDegenerate;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Occupancy-grid door detection, segment validation, and topometric mapping"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Generate seeded floorplans with ground truth");
  simulate->add_option("--out", sim.out, "Output directory")->required();
  simulate->add_option("--seed", sim.seed, "Base seed; map i uses seed + i")
      ->capture_default_str();
  simulate->add_option("--count", sim.count, "Number of maps")
      ->check(CLI::Range(1, 1000000))
      ->capture_default_str();
  simulate
      ->add_option("--noise-kind", sim.noise_kind, "Noise model for the noisy copy")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, NoiseKind>{{"gaussian", NoiseKind::Gaussian},
                                           {"combined", NoiseKind::Combined}}))
      ->default_str("combined");
  simulate->add_option("--noise-level", sim.noise_level, "Noise level 0..10")
      ->check(CLI::Range(0, 10))
      ->capture_default_str();
  simulate->add_option("--min-rooms", sim.min_rooms, "Minimum rooms per map")
      ->check(CLI::Range(0, 1000))
      ->capture_default_str();
  simulate->add_option("--max-rooms", sim.max_rooms, "Maximum rooms per map")
      ->check(CLI::Range(0, 1000))
      ->capture_default_str();
  simulate->add_flag("--no-patches", sim.no_patches, "Skip training patch archives");
  simulate->add_option("--jobs", sim.jobs, "Worker threads")
      ->check(CLI::Range(1, 1024))
      ->capture_default_str();

  PipelineArgs pipe;
  CLI::App* pipeline =
      app.add_subcommand("pipeline", "Run detection, validation, and topometric mapping");
  pipeline->add_option("--map", pipe.cfg.map_path, "Map metadata file (.yaml)")
      ->required()
      ->check(CLI::ExistingFile);
  pipeline->add_option("--out", pipe.out, "Output directory")->required();
  pipeline->add_option("--backend", pipe.cfg.backend, "Detector backend")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, DetectorBackend>{{"baseline", DetectorBackend::Baseline},
                                                 {"ingest", DetectorBackend::Ingest},
                                                 {"oracle", DetectorBackend::Oracle}}))
      ->default_str("baseline");
  pipeline
      ->add_option("--detections", pipe.cfg.detections_path,
                   "Detections file for the ingest backend")
      ->check(CLI::ExistingFile);
  pipeline
      ->add_option("--truth", pipe.truth, "Ground-truth file for the oracle backend")
      ->check(CLI::ExistingFile);
  pipeline
      ->add_option("--confidence", pipe.cfg.confidence_threshold,
                   "Minimum detection confidence")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  pipeline->add_option("--iou", pipe.cfg.iou_threshold, "Mask IoU clustering threshold")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  pipeline->add_option("--stride", pipe.cfg.stride, "Sliding-window stride in cells")
      ->check(CLI::Range(1, kPatchSize))
      ->capture_default_str();
  pipeline->add_option("--method", pipe.cfg.method, "Segmentation method")
      ->transform(CLI::CheckedTransformer(std::map<std::string, SegmentationMethod>{
          {"components", SegmentationMethod::Components},
          {"graph", SegmentationMethod::Graph}}))
      ->default_str("components");
  pipeline->add_option("--felz-k", pipe.cfg.seg_params.felz_k, "Graph merge tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  pipeline
      ->add_option("--min-segment", pipe.cfg.seg_params.min_segment_size,
                   "Minimum segment size in cells")
      ->check(CLI::Range(0, 1 << 30))
      ->capture_default_str();
  pipeline->add_option("--spin", pipe.cfg.spin_mode, "Spin statistic convention")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, SpinMode>{{"squared", SpinMode::MeanSquared},
                                          {"absolute", SpinMode::MeanAbsolute}}))
      ->default_str("squared");
  pipeline->add_option("--jobs", pipe.cfg.jobs, "Worker threads")
      ->check(CLI::Range(1, 1024))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim);
    return run_pipeline_cmd(pipe);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  }
}
