#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "jenga/backends.hpp"
#include "jenga/raster.hpp"
#include "jenga/scoring.hpp"

namespace jenga::engine {

struct EngineConfig {
    int n = 16;
    std::uint64_t seed = 0;
    scoring::ScoreOptions score;
    int crop_resolution = scoring::kDefaultCropResolution;
    int max_steps = 0;  // 0: 3x the initial object count
    double min_area_fraction = 0.001;
    int mask_dilation = 0;  // extra pixels around the inpaint mask
    std::string prompt = backends::kDefaultPositivePrompt;
    std::string negative_prompt = backends::kDefaultNegativePrompt;
};

struct DetectedObject {
    std::string id;
    backends::PointPrompt point;
    BinaryMask mask;
};

struct ScoredObject {
    std::string id;
    backends::PointPrompt point;
    BinaryMask mask;
    scoring::DiversityScore score;
};

struct RemovalStep {
    int index = 0;
    std::string object_id;
    BinaryMask mask;
    bool tie_broken = false;
    std::vector<ScoredObject> score_table;  // all candidates, best first
    RasterImage after;
};

struct RemovalSequence {
    RasterImage initial;
    std::vector<RemovalStep> steps;
    std::string terminated;  // background_reached | max_steps | no_progress
    EngineConfig config;
};

/// Point, segment, and filter the object candidates of one image. Prompts
/// whose segmentation fails are skipped with a warning; specks below the
/// minimum area floor and near-duplicate masks (IoU >= 0.9) are dropped.
std::vector<DetectedObject> detect_objects(const RasterImage& image,
                                           const backends::BackendSuite& suite,
                                           const EngineConfig& cfg);

/// Scores every detected object by counterfactual inpainting diversity and
/// sorts best-removal-first (ties: smaller mask, then smaller id).
std::vector<ScoredObject> rank_objects(const RasterImage& image,
                                       const backends::BackendSuite& suite,
                                       const EngineConfig& cfg);

/// The decomposition loop: rank, remove the top object, repeat on the new
/// image. Stops on background_reached (no detections), no_progress (object
/// count failed to decrease twice in a row), or the step cap.
RemovalSequence decompose(const RasterImage& image,
                          const backends::BackendSuite& suite,
                          const EngineConfig& cfg);

/// Orders two given masks without detection. Both objects are scored with
/// seeds derived from (cfg.seed, mask content), so the result is a pure
/// function of the inputs and antisymmetric in its arguments.
scoring::PairwiseDecision decide_pair(const RasterImage& image,
                                      const BinaryMask& mask_a,
                                      const BinaryMask& mask_b,
                                      const backends::BackendSuite& suite,
                                      const EngineConfig& cfg);

/// Scores one given mask (the decide_pair primitive for a single object).
scoring::DiversityScore score_mask(const RasterImage& image,
                                   const BinaryMask& mask,
                                   const backends::BackendSuite& suite,
                                   const EngineConfig& cfg);

std::string config_to_json(const EngineConfig& cfg);

/// Directory layout: initial.png, step_<k>.png, step_<k>.mask.png,
/// sequence.json, gallery.html. The JSON carries per-step scores, the
/// config, and backend provenance so a run is reproducible.
void write_sequence_dir(const std::filesystem::path& dir,
                        const RemovalSequence& sequence,
                        const std::map<std::string, std::string>& provenance);

}  // namespace jenga::engine
