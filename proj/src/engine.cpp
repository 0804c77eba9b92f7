#include "jenga/engine.hpp"

#include <algorithm>
#include <iostream>

#include <json.hpp>

#include "jenga/errors.hpp"
#include "jenga/png_io.hpp"
#include "jenga/report_html.hpp"
#include "jenga/util.hpp"

namespace jenga::engine {
namespace {

using nlohmann::json;

std::uint64_t mask_seed(const EngineConfig& cfg, const BinaryMask& mask) {
    const int dims[2] = {mask.width, mask.height};
    const std::uint64_t dim_hash = fnv1a64(dims, sizeof dims);
    return mix_seed(cfg.seed, fnv1a64(mask.data.data(), mask.data.size(), dim_hash));
}

scoring::EmbedFn embed_fn(const std::shared_ptr<backends::Embedder>& embedder,
                          const char* slot) {
    return [embedder, slot](const scoring::SquareCrop& crop) {
        if (!embedder) {
            throw BackendUnavailableError(std::string("no embedder for slot ") +
                                          slot);
        }
        return embedder->embed(crop);
    };
}

bool ranks_before(const ScoredObject& a, const ScoredObject& b) {
    if (a.score.value != b.score.value) return a.score.value > b.score.value;
    const auto area_a = static_cast<long long>(a.mask.count());
    const auto area_b = static_cast<long long>(b.mask.count());
    if (area_a != area_b) return area_a < area_b;
    return a.id < b.id;
}


}  // namespace

std::vector<DetectedObject> detect_objects(const RasterImage& image,
                                           const backends::BackendSuite& suite,
                                           const EngineConfig& cfg) {
    if (!suite.pointer || !suite.segmenter) {
        throw BackendUnavailableError("detection requires pointer and segmenter");
    }
    const std::vector<backends::PointPrompt> points = backends::dedupe_points(
        suite.pointer->propose_points(image), image.width, image.height);

    const double min_area =
        cfg.min_area_fraction * static_cast<double>(image.width) * image.height;
    std::vector<DetectedObject> objects;
    for (const backends::PointPrompt& point : points) {
        BinaryMask mask;
        try {
            mask = suite.segmenter->segment(image, point);
        } catch (const EmptyMaskError& e) {
            std::cerr << "warning: segmentation failed at " << point.x << ","
                      << point.y << ": " << e.what() << "\n";
            continue;
        }
        if (mask.width != image.width || mask.height != image.height) {
            throw DimensionMismatchError("segment mask does not match image");
        }
        if (static_cast<double>(mask.count()) < min_area) continue;
        bool duplicate = false;
        for (const DetectedObject& kept : objects) {
            if (mask_iou(kept.mask, mask) >= 0.9) {
                duplicate = true;
                break;
            }
        }
        if (duplicate) continue;
        char name[16];
        std::snprintf(name, sizeof name, "o%02u", static_cast<unsigned>(objects.size()));
        objects.push_back(DetectedObject{name, point, std::move(mask)});
    }
    return objects;
}

scoring::DiversityScore score_mask(const RasterImage& image,
                                   const BinaryMask& mask,
                                   const backends::BackendSuite& suite,
                                   const EngineConfig& cfg) {
    if (!suite.inpainter) throw BackendUnavailableError("no inpainter");
    backends::InpaintRequest request;
    request.n = cfg.n;
    request.seed = mask_seed(cfg, mask);
    request.prompt = cfg.prompt;
    request.negative_prompt = cfg.negative_prompt;

    BinaryMask inpaint_mask =
        cfg.mask_dilation > 0 ? dilate_mask(mask, cfg.mask_dilation) : mask;
    std::vector<RasterImage> samples;
    try {
        samples = suite.inpainter->inpaint(image, inpaint_mask, request);
    } catch (const backends::PartialBatchError& e) {
        if (e.completed().empty()) throw;
        std::cerr << "warning: inpaint batch incomplete, continuing with "
                  << e.completed().size() << "/" << request.n << " samples\n";
        samples = e.completed();
    }

    const scoring::SquareCrop original =
        scoring::extract_crop(image, mask, cfg.crop_resolution);
    std::vector<scoring::SquareCrop> counterfactuals;
    counterfactuals.reserve(samples.size());
    for (const RasterImage& sample : samples) {
        counterfactuals.push_back(scoring::extract_crop_at(
            sample, mask, original.source_bounds, cfg.crop_resolution));
    }
    return scoring::diversity_score(original, counterfactuals,
                                    embed_fn(suite.embedder_s, "S"),
                                    embed_fn(suite.embedder_v, "V"), cfg.score);
}

std::vector<ScoredObject> rank_objects(const RasterImage& image,
                                       const backends::BackendSuite& suite,
                                       const EngineConfig& cfg) {
    std::vector<ScoredObject> scored;
    for (DetectedObject& object : detect_objects(image, suite, cfg)) {
        scoring::DiversityScore score =
            score_mask(image, object.mask, suite, cfg);
        scored.push_back(ScoredObject{std::move(object.id), object.point,
                                      std::move(object.mask), std::move(score)});
    }
    std::sort(scored.begin(), scored.end(), ranks_before);
    return scored;
}

RemovalSequence decompose(const RasterImage& image,
                          const backends::BackendSuite& suite,
                          const EngineConfig& cfg) {
    if (!suite.remover) throw BackendUnavailableError("no remover");
    RemovalSequence sequence;
    sequence.initial = image;
    sequence.config = cfg;

    RasterImage current = image;
    int max_steps = cfg.max_steps;
    int prev_count = -1;
    int stagnant = 0;
    while (true) {
        std::vector<ScoredObject> table = rank_objects(current, suite, cfg);
        const int count = static_cast<int>(table.size());
        if (count == 0) {
            sequence.terminated = "background_reached";
            break;
        }
        if (max_steps == 0) max_steps = 3 * count;
        if (prev_count >= 0 && count >= prev_count) {
            if (++stagnant >= 2) {
                sequence.terminated = "no_progress";
                break;
            }
        } else {
            stagnant = 0;
        }
        prev_count = count;
        if (static_cast<int>(sequence.steps.size()) >= max_steps) {
            sequence.terminated = "max_steps";
            break;
        }

        RemovalStep step;
        step.index = static_cast<int>(sequence.steps.size());
        step.object_id = table.front().id;
        step.mask = table.front().mask;
        step.tie_broken =
            count > 1 && table[0].score.value == table[1].score.value;
        step.after = suite.remover->remove(current, step.mask);
        step.score_table = std::move(table);
        current = step.after;
        sequence.steps.push_back(std::move(step));
    }
    return sequence;
}

scoring::PairwiseDecision decide_pair(const RasterImage& image,
                                      const BinaryMask& mask_a,
                                      const BinaryMask& mask_b,
                                      const backends::BackendSuite& suite,
                                      const EngineConfig& cfg) {
    for (const BinaryMask* mask : {&mask_a, &mask_b}) {
        if (mask->width != image.width || mask->height != image.height) {
            throw DimensionMismatchError("pair mask does not match image");
        }
        if (mask->empty()) throw EmptyMaskError("pair mask is empty");
    }
    const scoring::DiversityScore score_a = score_mask(image, mask_a, suite, cfg);
    const scoring::DiversityScore score_b = score_mask(image, mask_b, suite, cfg);
    return scoring::pairwise_order(score_a, score_b,
                                   static_cast<long long>(mask_a.count()),
                                   static_cast<long long>(mask_b.count()), "A",
                                   "B");
}

std::string config_to_json(const EngineConfig& cfg) {
    json doc{{"n", cfg.n},
             {"seed", cfg.seed},
             {"normalization", scoring::normalization_mode_name(cfg.score.mode)},
             {"slotS", cfg.score.use_slot_s},
             {"slotV", cfg.score.use_slot_v},
             {"cropResolution", cfg.crop_resolution},
             {"maxSteps", cfg.max_steps},
             {"minAreaFraction", cfg.min_area_fraction},
             {"maskDilation", cfg.mask_dilation},
             {"prompt", cfg.prompt},
             {"negativePrompt", cfg.negative_prompt}};
    return doc.dump(2) + "\n";
}

void write_sequence_dir(const std::filesystem::path& dir,
                        const RemovalSequence& sequence,
                        const std::map<std::string, std::string>& provenance) {
    std::filesystem::create_directories(dir);
    write_png(dir / "initial.png", sequence.initial);

    json steps = json::array();
    std::vector<report::GalleryStep> gallery;
    for (const RemovalStep& step : sequence.steps) {
        const std::string stem = "step_" + std::to_string(step.index);
        write_png(dir / (stem + ".png"), step.after);
        write_png(dir / (stem + ".mask.png"), step.mask);
        // Statically ordered sequences (heuristic replays) carry no table.
        const double value =
            step.score_table.empty() ? 0.0 : step.score_table.front().score.value;
        steps.push_back(json{{"index", step.index},
                             {"objectId", step.object_id},
                             {"score", value},
                             {"tieBroken", step.tie_broken}});
        gallery.push_back(report::GalleryStep{
            step.index, stem + ".png", stem + ".mask.png", step.object_id, value});
    }

    json doc{{"steps", steps},
             {"terminated", sequence.terminated},
             {"config", json::parse(config_to_json(sequence.config))},
             {"backendProvenance", provenance}};
    write_file(dir / "sequence.json", doc.dump(2) + "\n");
    write_file(dir / "gallery.html",
               report::render_gallery("Removal sequence", "initial.png", gallery,
                                      sequence.terminated));
}

}  // namespace jenga::engine
