#include "jenga/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "jenga/baselines.hpp"
#include "jenga/blocksworld.hpp"
#include "jenga/engine.hpp"
#include "jenga/errors.hpp"
#include "jenga/evaluation.hpp"
#include "jenga/http_backend.hpp"
#include "jenga/png_io.hpp"
#include "jenga/report_html.hpp"
#include "jenga/util.hpp"

namespace jenga::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::kEmptyMask: return "empty_mask";
        case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
        case ErrorCode::kSlotMismatch: return "slot_mismatch";
        case ErrorCode::kEmptySampleSet: return "empty_sample_set";
        case ErrorCode::kBackendUnavailable: return "backend";
        case ErrorCode::kMalformedResponse: return "malformed_response";
        case ErrorCode::kPartialBatch: return "partial_batch";
        case ErrorCode::kInfeasibleSpec: return "generation";
        case ErrorCode::kUnknownBlock: return "unknown_block";
        case ErrorCode::kNotAPermutation: return "not_a_permutation";
        case ErrorCode::kManifestError: return "manifest";
        case ErrorCode::kMethodFailure: return "method_failure";
        case ErrorCode::kUsage: return "usage";
        case ErrorCode::kIo: return "io";
    }
    return "internal";
}

int error_exit_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::kUsage: return 2;
        case ErrorCode::kManifestError: return 3;
        case ErrorCode::kInfeasibleSpec: return 4;
        case ErrorCode::kBackendUnavailable: return 5;
        default: return 1;
    }
}

void print_error(const std::string& code, const std::string& message) {
    const json doc{{"error", json{{"code", code}, {"message", message}}}};
    std::cerr << doc.dump() << "\n";
}

// Options shared by every command that runs the engine.
struct CommonOpts {
    std::string backend = "synthetic";
    std::string scene_path;
    std::uint64_t seed = 0;
    int n = 16;
    std::string normalization = "multiply";
    bool no_slot_s = false;
    bool no_slot_v = false;
    int resolution = scoring::kDefaultCropResolution;
    int max_steps = 0;
    double min_area = 0.001;
    int dilation = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--backend", o.backend, "Backend kind")
        ->check(CLI::IsMember({"synthetic", "http"}))
        ->capture_default_str();
    cmd->add_option("--scene", o.scene_path,
                    "Scene JSON to bind the synthetic backend to");
    cmd->add_option("--seed", o.seed, "Run seed")->capture_default_str();
    cmd->add_option("--n", o.n, "Counterfactual samples per object")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--normalization", o.normalization,
                    "Area-fraction normalization mode")
        ->check(CLI::IsMember({"multiply", "divide-clamped", "none"}))
        ->capture_default_str();
    cmd->add_flag("--no-slot-s", o.no_slot_s, "Disable the semantic slot");
    cmd->add_flag("--no-slot-v", o.no_slot_v, "Disable the structural slot");
    cmd->add_option("--resolution", o.resolution, "Square crop resolution")
        ->check(CLI::Range(32, 4096))
        ->capture_default_str();
    cmd->add_option("--max-steps", o.max_steps,
                    "Step cap (0: 3x initial object count)");
    cmd->add_option("--min-area", o.min_area,
                    "Minimum object area as a fraction of the image")
        ->capture_default_str();
    cmd->add_option("--dilate", o.dilation, "Inpaint mask dilation in pixels");
}

// Bad input paths on the command line are usage errors, not I/O failures.
void require_input_file(const std::string& path, const char* flag) {
    if (!path.empty() && !fs::exists(path)) {
        throw UsageError(std::string(flag) + " not found: " + path);
    }
}

engine::EngineConfig engine_config(const CommonOpts& o) {
    engine::EngineConfig cfg;
    cfg.n = o.n;
    cfg.seed = o.seed;
    cfg.score.mode = scoring::normalization_mode_from_name(o.normalization);
    cfg.score.use_slot_s = !o.no_slot_s;
    cfg.score.use_slot_v = !o.no_slot_v;
    cfg.crop_resolution = o.resolution;
    cfg.max_steps = o.max_steps;
    cfg.min_area_fraction = o.min_area;
    cfg.mask_dilation = o.dilation;
    return cfg;
}

json common_to_json(const CommonOpts& o, const engine::EngineConfig& cfg) {
    json doc = json::parse(engine::config_to_json(cfg));
    doc["backend"] = o.backend;
    if (!o.scene_path.empty()) doc["scene"] = o.scene_path;
    return doc;
}

void write_config_json(const fs::path& dir, json doc) {
    fs::create_directories(dir);
    write_file(dir / "config.json", doc.dump(2) + "\n");
}

// Scene sidecar convention: a synthetic render <stem>.png generated by
// gen-synth sits next to its <stem>.json scene file.
blocksworld::BlockScene scene_for_image(const fs::path& image_path,
                                        const RasterImage& image) {
    fs::path sidecar = image_path;
    sidecar.replace_extension(".json");
    if (fs::exists(sidecar)) {
        return blocksworld::scene_from_json(read_text_file(sidecar));
    }
    return blocksworld::scene_from_image(image);
}

backends::BackendSuite suite_for(const CommonOpts& o,
                                 const fs::path& image_path,
                                 const RasterImage& image) {
    if (o.backend == "http") {
        return backends::make_http_suite(backends::http_config_from_env());
    }
    if (!o.scene_path.empty()) {
        return blocksworld::make_synthetic_suite(
            blocksworld::scene_from_json(read_text_file(o.scene_path)));
    }
    if (!image_path.empty()) {
        return blocksworld::make_synthetic_suite(
            scene_for_image(image_path, image));
    }
    return blocksworld::make_synthetic_suite(
        blocksworld::scene_from_image(image));
}

evaluation::SuiteProvider suite_provider(const CommonOpts& o) {
    if (o.backend == "http") {
        auto suite = std::make_shared<backends::BackendSuite>(
            backends::make_http_suite(backends::http_config_from_env()));
        return [suite](const evaluation::PairwiseCase&, const RasterImage&) {
            return *suite;
        };
    }
    if (!o.scene_path.empty()) {
        auto suite =
            std::make_shared<backends::BackendSuite>(blocksworld::make_synthetic_suite(
                blocksworld::scene_from_json(read_text_file(o.scene_path))));
        return [suite](const evaluation::PairwiseCase&, const RasterImage&) {
            return *suite;
        };
    }
    return [](const evaluation::PairwiseCase& c, const RasterImage& image) {
        return blocksworld::make_synthetic_suite(scene_for_image(c.image, image));
    };
}

std::string zero_pad(int value, int width) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%0*d", width, value);
    return buf;
}

// ---------------------------------------------------------------- decompose

struct DecomposeOpts {
    CommonOpts common;
    std::string image_path;
    std::string out;
    int blocks = 4;
    int max_depth = 3;
    bool confounder = false;
};

int run_decompose(const DecomposeOpts& o) {
    require_input_file(o.image_path, "--image");
    require_input_file(o.common.scene_path, "--scene");
    RasterImage image;
    backends::BackendSuite suite;
    std::optional<blocksworld::BlockScene> generated;
    if (!o.image_path.empty()) {
        image = read_png_image(o.image_path);
        suite = suite_for(o.common, o.image_path, image);
    } else if (o.common.backend == "synthetic") {
        if (!o.common.scene_path.empty()) {
            const blocksworld::BlockScene scene = blocksworld::scene_from_json(
                read_text_file(o.common.scene_path));
            image = blocksworld::render_scene(scene);
            suite = blocksworld::make_synthetic_suite(scene);
        } else {
            blocksworld::SceneSpec spec;
            spec.num_blocks = o.blocks;
            spec.max_stack_depth = o.max_depth;
            spec.confounder_mode = o.confounder;
            generated = blocksworld::generate_scene(o.common.seed, spec);
            image = blocksworld::render_scene(*generated);
            suite = blocksworld::make_synthetic_suite(*generated);
        }
    } else {
        throw UsageError("--image is required with the http backend");
    }

    const engine::EngineConfig cfg = engine_config(o.common);
    const engine::RemovalSequence sequence = engine::decompose(image, suite, cfg);

    const fs::path out(o.out);
    engine::write_sequence_dir(out, sequence, suite.provenance);
    json config = common_to_json(o.common, cfg);
    config["command"] = "decompose";
    if (!o.image_path.empty()) config["image"] = o.image_path;
    if (generated) {
        config["blocks"] = o.blocks;
        config["maxDepth"] = o.max_depth;
        config["confounder"] = o.confounder;
        write_file(out / "scene.json", blocksworld::scene_to_json(*generated));
    }
    write_config_json(out, config);

    std::cout << json{{"out", o.out},
                      {"steps", sequence.steps.size()},
                      {"terminated", sequence.terminated}}
                     .dump()
              << "\n";
    return 0;
}

// --------------------------------------------------------------------- rank

struct RankOpts {
    CommonOpts common;
    std::string image_path;
    std::string out;
    int blocks = 4;
    int max_depth = 3;
    bool confounder = false;
};

int run_rank(const RankOpts& o) {
    require_input_file(o.image_path, "--image");
    require_input_file(o.common.scene_path, "--scene");
    RasterImage image;
    backends::BackendSuite suite;
    if (!o.image_path.empty()) {
        image = read_png_image(o.image_path);
        suite = suite_for(o.common, o.image_path, image);
    } else if (o.common.backend == "synthetic") {
        if (!o.common.scene_path.empty()) {
            const blocksworld::BlockScene scene = blocksworld::scene_from_json(
                read_text_file(o.common.scene_path));
            image = blocksworld::render_scene(scene);
            suite = blocksworld::make_synthetic_suite(scene);
        } else {
            blocksworld::SceneSpec spec;
            spec.num_blocks = o.blocks;
            spec.max_stack_depth = o.max_depth;
            spec.confounder_mode = o.confounder;
            const blocksworld::BlockScene scene =
                blocksworld::generate_scene(o.common.seed, spec);
            image = blocksworld::render_scene(scene);
            suite = blocksworld::make_synthetic_suite(scene);
        }
    } else {
        throw UsageError("--image is required with the http backend");
    }

    const engine::EngineConfig cfg = engine_config(o.common);
    const std::vector<engine::ScoredObject> table =
        engine::rank_objects(image, suite, cfg);

    json objects = json::array();
    for (const engine::ScoredObject& obj : table) {
        objects.push_back(
            json{{"id", obj.id},
                 {"point", json{{"x", obj.point.x}, {"y", obj.point.y}}},
                 {"maskArea", obj.mask.count()},
                 {"score", json{{"value", obj.score.value},
                                {"n", obj.score.n},
                                {"areaFraction", obj.score.area_fraction},
                                {"perSampleSimS", obj.score.per_sample_sim_s},
                                {"perSampleSimV", obj.score.per_sample_sim_v}}}});
    }
    const json doc{{"objects", objects}};
    std::cout << doc.dump(2) << "\n";
    if (!o.out.empty()) {
        const fs::path out(o.out);
        fs::create_directories(out);
        write_file(out / "ranking.json", doc.dump(2) + "\n");
        json config = common_to_json(o.common, cfg);
        config["command"] = "rank";
        if (!o.image_path.empty()) config["image"] = o.image_path;
        write_config_json(out, config);
    }
    return 0;
}

// ----------------------------------------------------------- eval-pairwise

struct EvalPairwiseOpts {
    CommonOpts common;
    std::string manifest;
    std::string method = "engine";
    std::string out;
};

evaluation::PairwiseMethod make_pairwise_method(
    const std::string& method, const CommonOpts& common,
    const engine::EngineConfig& cfg) {
    if (method == "engine") {
        return evaluation::engine_pairwise_method(cfg, suite_provider(common));
    }
    if (method == "top_to_bottom" || method == "small_to_large" ||
        method == "front_to_back") {
        const baselines::Heuristic heuristic =
            baselines::heuristic_from_name(method);
        const evaluation::SuiteProvider provider = suite_provider(common);
        return [heuristic, provider](const evaluation::PairwiseCase& c) {
            const RasterImage image = read_png_image(c.image);
            const std::vector<baselines::MaskEntry> entries{
                {"A", read_png_mask(c.mask_a)}, {"B", read_png_mask(c.mask_b)}};
            const backends::BackendSuite suite = provider(c, image);
            return baselines::order_masks(image, entries, heuristic, suite)
                .front();
        };
    }
    if (method.rfind("predictions:", 0) == 0) {
        const fs::path file = method.substr(std::string("predictions:").size());
        auto predictions = std::make_shared<
            std::map<std::string, evaluation::Prediction>>(
            evaluation::load_predictions(file));
        return [predictions](const evaluation::PairwiseCase& c) -> std::string {
            const auto it = predictions->find(c.id);
            if (it == predictions->end() || !it->second.first) {
                throw MethodFailureError("no prediction for case " + c.id);
            }
            return *it->second.first;
        };
    }
    throw UsageError("unknown method: " + method +
                     " (expected engine, top_to_bottom, small_to_large, "
                     "front_to_back, or predictions:<file>)");
}

int run_eval_pairwise(const EvalPairwiseOpts& o) {
    const std::vector<evaluation::PairwiseCase> cases =
        evaluation::load_pairwise_manifest(o.manifest);
    const engine::EngineConfig cfg = engine_config(o.common);
    const evaluation::PairwiseMethod method =
        make_pairwise_method(o.method, o.common, cfg);
    const evaluation::EvalReport report = evaluation::eval_pairwise(
        cases, method, o.method, fs::path(o.manifest).filename().string());

    const fs::path out(o.out);
    evaluation::write_report_files(out, report);
    json config = common_to_json(o.common, cfg);
    config["command"] = "eval-pairwise";
    config["manifest"] = o.manifest;
    config["method"] = o.method;
    write_config_json(out, config);

    std::cout << json{{"method", report.method},
                      {"correct", report.correct},
                      {"total", report.total},
                      {"accuracy", report.accuracy},
                      {"accuracyPercent", report.accuracy_percent()}}
                     .dump()
              << "\n";
    return 0;
}

// --------------------------------------------------------------- eval-full

struct EvalFullOpts {
    CommonOpts common;
    std::string manifest;
    std::string method = "engine";
    std::string judge = "oracle";
    std::string verdicts;
    std::string out;
};

// Baselines become sequences by ordering the initially detected masks and
// replaying that order through the remover (static ordering, no re-ranking).
engine::RemovalSequence baseline_sequence(const RasterImage& image,
                                          const backends::BackendSuite& suite,
                                          const engine::EngineConfig& cfg,
                                          baselines::Heuristic heuristic) {
    std::vector<engine::DetectedObject> detected =
        engine::detect_objects(image, suite, cfg);
    std::vector<baselines::MaskEntry> entries;
    for (const engine::DetectedObject& d : detected) {
        entries.push_back(baselines::MaskEntry{d.id, d.mask});
    }
    engine::RemovalSequence sequence;
    sequence.initial = image;
    sequence.config = cfg;
    if (entries.empty()) {
        sequence.terminated = "background_reached";
        return sequence;
    }
    RasterImage current = image;
    for (const std::string& id :
         baselines::order_masks(image, entries, heuristic, suite)) {
        const auto it = std::find_if(
            detected.begin(), detected.end(),
            [&](const engine::DetectedObject& d) { return d.id == id; });
        engine::RemovalStep step;
        step.index = static_cast<int>(sequence.steps.size());
        step.object_id = id;
        step.mask = it->mask;
        step.after = suite.remover->remove(current, step.mask);
        current = step.after;
        sequence.steps.push_back(std::move(step));
    }
    sequence.terminated = engine::detect_objects(current, suite, cfg).empty()
                              ? "background_reached"
                              : "no_progress";
    return sequence;
}

int run_eval_full(const EvalFullOpts& o) {
    const std::vector<evaluation::FullSceneCase> cases =
        evaluation::load_full_scene_manifest(o.manifest);
    const engine::EngineConfig cfg = engine_config(o.common);
    const fs::path out(o.out);
    const std::string dataset = fs::path(o.manifest).filename().string();

    evaluation::EvalReport report;
    if (o.judge == "human") {
        std::map<std::string, evaluation::VerdictEntry> verdicts;
        if (!o.verdicts.empty()) {
            verdicts = evaluation::load_verdicts(o.verdicts);
        }
        report = evaluation::eval_full_human(cases, verdicts, "human-judged",
                                             dataset);
    } else {
        std::optional<baselines::Heuristic> heuristic;
        if (o.method != "engine") {
            heuristic = baselines::heuristic_from_name(o.method);
        }
        const evaluation::FullSceneRunner runner =
            [&](const evaluation::FullSceneCase& c, const RasterImage& image) {
                backends::BackendSuite suite =
                    o.common.backend == "http"
                        ? backends::make_http_suite(
                              backends::http_config_from_env())
                        : blocksworld::make_synthetic_suite(
                              scene_for_image(c.image, image));
                engine::RemovalSequence sequence =
                    heuristic ? baseline_sequence(image, suite, cfg, *heuristic)
                              : engine::decompose(image, suite, cfg);
                engine::write_sequence_dir(out / "sequences" / c.id, sequence,
                                           suite.provenance);
                return sequence;
            };
        report = evaluation::eval_full_oracle(cases, runner, o.method, dataset);
    }

    evaluation::write_report_files(out, report);
    json config = common_to_json(o.common, cfg);
    config["command"] = "eval-full";
    config["manifest"] = o.manifest;
    config["method"] = o.method;
    config["judge"] = o.judge;
    if (!o.verdicts.empty()) config["verdicts"] = o.verdicts;
    write_config_json(out, config);

    std::cout << json{{"method", report.method},
                      {"correct", report.correct},
                      {"total", report.total},
                      {"excluded", report.excluded},
                      {"accuracy", report.accuracy},
                      {"accuracyPercent", report.accuracy_percent()}}
                     .dump()
              << "\n";
    return 0;
}

// ------------------------------------------------------------------ ablate

struct AblateOpts {
    CommonOpts common;
    std::string manifest;
    std::string out;
    std::string n_grid = "2,4,8,16";
    std::string slots = "s,v,both";
};

std::vector<int> parse_n_grid(const std::string& text) {
    std::vector<int> values;
    std::istringstream stream(text);
    std::string token;
    while (std::getline(stream, token, ',')) {
        try {
            const int v = std::stoi(token);
            if (v < 1) throw std::out_of_range("n");
            values.push_back(v);
        } catch (const std::exception&) {
            throw UsageError("bad --n-grid entry: " + token);
        }
    }
    return values;
}

std::vector<std::pair<bool, bool>> parse_slots(const std::string& text) {
    std::vector<std::pair<bool, bool>> configs;
    std::istringstream stream(text);
    std::string token;
    while (std::getline(stream, token, ',')) {
        if (token == "s" || token == "S") configs.emplace_back(true, false);
        else if (token == "v" || token == "V") configs.emplace_back(false, true);
        else if (token == "both") configs.emplace_back(true, true);
        else throw UsageError("bad --slots entry: " + token +
                              " (expected s, v, or both)");
    }
    return configs;
}

int run_ablate(const AblateOpts& o) {
    const std::vector<evaluation::PairwiseCase> cases =
        evaluation::load_pairwise_manifest(o.manifest);
    const engine::EngineConfig cfg = engine_config(o.common);
    const std::string dataset = fs::path(o.manifest).filename().string();
    const std::vector<evaluation::AblationCell> cells = evaluation::run_ablation(
        cases, parse_n_grid(o.n_grid), parse_slots(o.slots), cfg,
        suite_provider(o.common), dataset);

    const fs::path out(o.out);
    json summary = json::array();
    std::vector<report::ReportRow> rows;
    for (const evaluation::AblationCell& cell : cells) {
        const std::string slots =
            cell.slot_s && cell.slot_v ? "both" : (cell.slot_s ? "s" : "v");
        const std::string name = "n" + std::to_string(cell.n) + "_" + slots;
        evaluation::write_report_files(out / name, cell.report);
        summary.push_back(json{{"cell", name},
                               {"n", cell.n},
                               {"slots", slots},
                               {"correct", cell.report.correct},
                               {"total", cell.report.total},
                               {"accuracy", cell.report.accuracy},
                               {"accuracyPercent", cell.report.accuracy_percent()}});
        rows.push_back(report::ReportRow{
            name, "", cell.report.accuracy_percent(), true,
            std::to_string(cell.report.correct) + "/" +
                std::to_string(cell.report.total)});
    }
    fs::create_directories(out);
    write_file(out / "summary.json", summary.dump(2) + "\n");
    write_file(out / "report.html",
               report::render_eval_report("Ablation grid", "engine", dataset,
                                          std::to_string(cells.size()) +
                                              " grid cell(s)",
                                          rows));
    json config = common_to_json(o.common, cfg);
    config["command"] = "ablate";
    config["manifest"] = o.manifest;
    config["nGrid"] = o.n_grid;
    config["slots"] = o.slots;
    write_config_json(out, config);

    std::cout << summary.dump(2) << "\n";
    return 0;
}

// --------------------------------------------------------------- gen-synth

struct GenSynthOpts {
    std::string out;
    int pairs = 0;
    int scenes = 0;
    std::uint64_t seed = 0;
    int blocks = 4;
    int max_depth = 3;
    bool confounder = false;
};

// Deterministically finds a generated scene that actually contains support
// edges (all-singles layouts have none to ask about).
blocksworld::BlockScene scene_with_edges(std::uint64_t seed,
                                         const blocksworld::SceneSpec& spec) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        const blocksworld::BlockScene scene = blocksworld::generate_scene(
            mix_seed(seed, static_cast<std::uint64_t>(attempt)), spec);
        if (!blocksworld::support_graph(scene).edges.empty()) return scene;
    }
    throw InfeasibleSpecError("no support pairs producible for this spec");
}

int run_gen_synth(const GenSynthOpts& o) {
    if (o.pairs < 0 || o.scenes < 0 || o.pairs + o.scenes < 1) {
        throw UsageError("need --pairs and/or --scenes counts >= 1");
    }
    blocksworld::SceneSpec spec;
    spec.num_blocks = o.blocks;
    spec.max_stack_depth = o.max_depth;
    spec.confounder_mode = o.confounder;

    const fs::path out(o.out);
    fs::create_directories(out);

    if (o.pairs > 0) {
        fs::create_directories(out / "pairs");
        std::ostringstream manifest;
        for (int k = 0; k < o.pairs; ++k) {
            const blocksworld::BlockScene scene = scene_with_edges(
                mix_seed(o.seed, 0x70610000ULL + static_cast<std::uint64_t>(k)),
                spec);
            const blocksworld::SupportGraph graph =
                blocksworld::support_graph(scene);
            Rng rng(mix_seed(o.seed, 0x51de0000ULL + static_cast<std::uint64_t>(k)));
            // Sample only edges whose dependent carries nothing itself: when
            // both members are load-bearing, counterfactuals of either are
            // dominated by forced supporter fills and the ordering question
            // loses its one-sided answer. Every stack's top block qualifies,
            // so the filter is always satisfiable.
            std::vector<blocksworld::SupportEdge> candidates;
            for (const blocksworld::SupportEdge& e : graph.edges) {
                bool carries = false;
                for (const blocksworld::SupportEdge& other : graph.edges) {
                    if (other.supporter == e.dependent) carries = true;
                }
                if (!carries) candidates.push_back(e);
            }
            const blocksworld::SupportEdge edge = candidates[rng.uniform_int(
                0, static_cast<int>(candidates.size()) - 1)];
            const blocksworld::Block* dep = scene.find(edge.dependent);
            const blocksworld::Block* sup = scene.find(edge.supporter);
            const bool dep_is_a = rng.bernoulli(0.5);

            const std::string stem = "pair_" + zero_pad(k, 4);
            const RasterImage image = blocksworld::render_scene(scene);
            write_png(out / "pairs" / (stem + ".png"), image);
            write_file(out / "pairs" / (stem + ".json"),
                       blocksworld::scene_to_json(scene));
            const BinaryMask dep_mask =
                mask_from_rect(scene.canvas_w, scene.canvas_h, dep->rect);
            const BinaryMask sup_mask =
                mask_from_rect(scene.canvas_w, scene.canvas_h, sup->rect);
            write_png(out / "pairs" / (stem + ".a.png"),
                      dep_is_a ? dep_mask : sup_mask);
            write_png(out / "pairs" / (stem + ".b.png"),
                      dep_is_a ? sup_mask : dep_mask);

            manifest << json{{"id", stem},
                             {"image", "pairs/" + stem + ".png"},
                             {"mask_a", "pairs/" + stem + ".a.png"},
                             {"mask_b", "pairs/" + stem + ".b.png"},
                             {"first", dep_is_a ? "A" : "B"},
                             {"source", "synthetic"}}
                            .dump()
                     << "\n";
        }
        write_file(out / "pairwise.jsonl", manifest.str());
    }

    if (o.scenes > 0) {
        fs::create_directories(out / "scenes");
        std::ostringstream manifest;
        for (int i = 0; i < o.scenes; ++i) {
            const blocksworld::BlockScene scene = blocksworld::generate_scene(
                mix_seed(o.seed, 0x5ce70000ULL + static_cast<std::uint64_t>(i)),
                spec);
            const std::string stem = "scene_" + zero_pad(i, 4);
            write_png(out / "scenes" / (stem + ".png"),
                      blocksworld::render_scene(scene));
            write_file(out / "scenes" / (stem + ".json"),
                       blocksworld::scene_to_json(scene));
            manifest << json{{"id", stem},
                             {"image", "scenes/" + stem + ".png"},
                             {"verdict_source", "oracle"}}
                            .dump()
                     << "\n";
        }
        write_file(out / "fullscene.jsonl", manifest.str());
    }

    write_config_json(out, json{{"command", "gen-synth"},
                                {"pairs", o.pairs},
                                {"scenes", o.scenes},
                                {"seed", o.seed},
                                {"blocks", o.blocks},
                                {"maxDepth", o.max_depth},
                                {"confounder", o.confounder}});

    std::cout << json{{"out", o.out}, {"pairs", o.pairs}, {"scenes", o.scenes}}
                     .dump()
              << "\n";
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Object removal ordering via counterfactual inpainting"};
    app.require_subcommand(1);

    DecomposeOpts dec;
    CLI::App* cmd_dec = app.add_subcommand(
        "decompose", "Remove objects one by one until background remains");
    add_common(cmd_dec, dec.common);
    cmd_dec->add_option("--image", dec.image_path, "Input image (PNG)");
    cmd_dec->add_option("--out", dec.out, "Output directory")->required();
    cmd_dec->add_option("--blocks", dec.blocks, "Synthetic block count")
        ->capture_default_str();
    cmd_dec->add_option("--max-depth", dec.max_depth, "Synthetic stack depth cap")
        ->capture_default_str();
    cmd_dec->add_flag("--confounder", dec.confounder,
                      "Synthetic pedestal-under-slab scenes");

    RankOpts rank;
    CLI::App* cmd_rank =
        app.add_subcommand("rank", "Score and order the objects of one image");
    add_common(cmd_rank, rank.common);
    cmd_rank->add_option("--image", rank.image_path, "Input image (PNG)");
    cmd_rank->add_option("--out", rank.out, "Optional output directory");
    cmd_rank->add_option("--blocks", rank.blocks, "Synthetic block count")
        ->capture_default_str();
    cmd_rank->add_option("--max-depth", rank.max_depth,
                         "Synthetic stack depth cap")
        ->capture_default_str();
    cmd_rank->add_flag("--confounder", rank.confounder,
                       "Synthetic pedestal-under-slab scenes");

    EvalPairwiseOpts evp;
    CLI::App* cmd_evp = app.add_subcommand(
        "eval-pairwise", "Which-goes-first accuracy against a manifest");
    add_common(cmd_evp, evp.common);
    cmd_evp->add_option("--manifest", evp.manifest, "Pairwise manifest (JSONL)")
        ->required();
    cmd_evp->add_option("--method", evp.method,
                        "engine, top_to_bottom, small_to_large, front_to_back, "
                        "or predictions:<file>")
        ->capture_default_str();
    cmd_evp->add_option("--out", evp.out, "Output directory")->required();

    EvalFullOpts evf;
    CLI::App* cmd_evf = app.add_subcommand(
        "eval-full", "Whole-sequence pass rate against a manifest");
    add_common(cmd_evf, evf.common);
    cmd_evf->add_option("--manifest", evf.manifest,
                        "Full-scene manifest (JSONL)")
        ->required();
    cmd_evf->add_option("--method", evf.method,
                        "engine, top_to_bottom, small_to_large, front_to_back")
        ->capture_default_str();
    cmd_evf->add_option("--judge", evf.judge, "oracle or human")
        ->check(CLI::IsMember({"oracle", "human"}))
        ->capture_default_str();
    cmd_evf->add_option("--verdicts", evf.verdicts,
                        "Verdict manifest for human judging");
    cmd_evf->add_option("--out", evf.out, "Output directory")->required();

    AblateOpts abl;
    CLI::App* cmd_abl = app.add_subcommand(
        "ablate", "Sample-count and slot grid over a pairwise manifest");
    add_common(cmd_abl, abl.common);
    cmd_abl->add_option("--manifest", abl.manifest, "Pairwise manifest (JSONL)")
        ->required();
    cmd_abl->add_option("--out", abl.out, "Output directory")->required();
    cmd_abl->add_option("--n-grid", abl.n_grid, "Comma-separated sample counts")
        ->capture_default_str();
    cmd_abl->add_option("--slots", abl.slots, "Comma-separated of s, v, both")
        ->capture_default_str();

    GenSynthOpts gen;
    CLI::App* cmd_gen = app.add_subcommand(
        "gen-synth", "Generate synthetic scenes, masks, and manifests");
    cmd_gen->add_option("--out", gen.out, "Output directory")->required();
    cmd_gen->add_option("--pairs", gen.pairs, "Pairwise case count")
        ->capture_default_str();
    cmd_gen->add_option("--scenes", gen.scenes, "Full-scene case count")
        ->capture_default_str();
    cmd_gen->add_option("--seed", gen.seed, "Batch seed")->capture_default_str();
    cmd_gen->add_option("--blocks", gen.blocks, "Blocks per scene")
        ->capture_default_str();
    cmd_gen->add_option("--max-depth", gen.max_depth, "Stack depth cap")
        ->capture_default_str();
    cmd_gen->add_flag("--confounder", gen.confounder,
                      "Pedestal-under-slab scenes");

    try {
        app.parse(argc, argv);
        if (cmd_dec->parsed()) return run_decompose(dec);
        if (cmd_rank->parsed()) return run_rank(rank);
        if (cmd_evp->parsed()) return run_eval_pairwise(evp);
        if (cmd_evf->parsed()) return run_eval_full(evf);
        if (cmd_abl->parsed()) return run_ablate(abl);
        if (cmd_gen->parsed()) return run_gen_synth(gen);
        throw UsageError("no command given");
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        print_error("usage", e.what());
        return 2;
    } catch (const Error& e) {
        print_error(error_code_name(e.code()), e.what());
        return error_exit_code(e.code());
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return 1;
    }
}

}  // namespace jenga::cli
