// End-to-end acceptance checks, one per shipping requirement. Each criterion
// prints a single PASS/FAIL line with its measured numbers and runtime; the
// process exits with the number of failures.

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "jenga/baselines.hpp"
#include "jenga/blocksworld.hpp"
#include "jenga/cli.hpp"
#include "jenga/engine.hpp"
#include "jenga/evaluation.hpp"
#include "jenga/png_io.hpp"
#include "jenga/scoring.hpp"
#include "jenga/util.hpp"

namespace fs = std::filesystem;
using namespace jenga;

namespace {

int g_failures = 0;

void report(int index, bool ok, const std::string& detail, double seconds) {
    char line[512];
    std::snprintf(line, sizeof(line), "criterion %d: %s — %s (%.1fs)", index,
                  ok ? "PASS" : "FAIL", detail.c_str(), seconds);
    std::cout << line << std::endl;
    if (!ok) ++g_failures;
}

void run_criterion(int index, const std::function<std::pair<bool, std::string>()>& body) {
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    std::string detail;
    try {
        std::tie(ok, detail) = body();
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    report(index, ok, detail, seconds);
}

// Runs the CLI driver with its stdout/stderr thrown away so acceptance
// output stays one line per criterion.
int run_cli_quiet(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"jenga"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::fflush(stdout);
    std::fflush(stderr);
    const int saved_out = ::dup(1);
    const int saved_err = ::dup(2);
    const int null_fd = ::open("/dev/null", O_WRONLY);
    ::dup2(null_fd, 1);
    ::dup2(null_fd, 2);
    const int code = cli::run(static_cast<int>(argv.size()), argv.data());
    std::cout.flush();
    std::cerr.flush();
    std::fflush(stdout);
    std::fflush(stderr);
    ::dup2(saved_out, 1);
    ::dup2(saved_err, 2);
    ::close(saved_out);
    ::close(saved_err);
    ::close(null_fd);
    return code;
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("jenga_accept_" + name);
    fs::remove_all(dir);
    return dir;
}

evaluation::SuiteProvider image_suite_provider() {
    return [](const evaluation::PairwiseCase&, const RasterImage& image) {
        return blocksworld::make_synthetic_suite(
            blocksworld::scene_from_image(image));
    };
}

// Generates a pairwise corpus via the CLI and loads it back through the
// manifest loader, so acceptance exercises the same path users run.
std::vector<evaluation::PairwiseCase> generate_pairs(const fs::path& dir,
                                                     int count,
                                                     bool confounder) {
    std::vector<std::string> args{"gen-synth", "--out", dir.string(),
                                  "--pairs",  std::to_string(count),
                                  "--seed",   "0"};
    if (confounder) args.push_back("--confounder");
    if (run_cli_quiet(args) != 0) {
        throw std::runtime_error("pair generation failed");
    }
    return evaluation::load_pairwise_manifest(dir / "pairwise.jsonl");
}

evaluation::PairwiseMethod heuristic_method(baselines::Heuristic h) {
    return [h](const evaluation::PairwiseCase& c) {
        const RasterImage image = read_png_image(c.image);
        const std::vector<baselines::MaskEntry> entries{
            {"A", read_png_mask(c.mask_a)}, {"B", read_png_mask(c.mask_b)}};
        const backends::BackendSuite suite = blocksworld::make_synthetic_suite(
            blocksworld::scene_from_image(image));
        return baselines::order_masks(image, entries, h, suite).front();
    };
}

struct IdentityRemover : backends::Remover {
    RasterImage remove(const RasterImage& image, const BinaryMask&) override {
        return image;
    }
};

std::string percent(double accuracy) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f%%", accuracy * 100.0);
    return buf;
}

// --- criterion bodies -------------------------------------------------------

std::pair<bool, std::string> scoring_oracle() {
    Rng rng(42);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = rng.uniform_int(1, 32);
        std::vector<double> sim_s(n), sim_v(n);
        for (int i = 0; i < n; ++i) {
            sim_s[i] = rng.uniform();
            sim_v[i] = rng.uniform();
        }
        const double got = scoring::diversity_from_similarities(sim_s, sim_v);
        double sum_s = 0.0, sum_v = 0.0;
        for (int i = 0; i < n; ++i) {
            sum_s += sim_s[i];
            sum_v += sim_v[i];
        }
        const double expected = std::clamp(
            1.0 - (sum_s / n) * (sum_v / n), 0.0, 1.0);
        worst = std::max(worst, std::abs(got - expected));
    }
    std::ostringstream detail;
    detail << "max deviation " << worst << " over 1000 random tuples";
    return {worst <= 1e-12, detail.str()};
}

std::pair<bool, std::string> synthetic_pairwise_accuracy() {
    const fs::path dir = scratch("pairs200");
    const auto cases = generate_pairs(dir, 200, false);
    engine::EngineConfig cfg;
    cfg.n = 16;
    const evaluation::EvalReport rep = evaluation::eval_pairwise(
        cases, evaluation::engine_pairwise_method(cfg, image_suite_provider()),
        "engine", "synthetic-200");
    fs::remove_all(dir);
    std::ostringstream detail;
    detail << "engine " << rep.correct << "/" << rep.total << " = "
           << percent(rep.accuracy) << " (need >= 95%)";
    return {rep.accuracy >= 0.95, detail.str()};
}

std::pair<bool, std::string> heuristic_gap() {
    const fs::path dir = scratch("confounder100");
    const auto cases = generate_pairs(dir, 100, true);

    const evaluation::EvalReport s2l = evaluation::eval_pairwise(
        cases, heuristic_method(baselines::Heuristic::kSmallToLarge),
        "small_to_large", "confounder-100");
    engine::EngineConfig cfg;
    cfg.n = 16;
    const evaluation::EvalReport eng = evaluation::eval_pairwise(
        cases, evaluation::engine_pairwise_method(cfg, image_suite_provider()),
        "engine", "confounder-100");
    fs::remove_all(dir);

    // Depth ordering against the support oracle on layered scenes (scenes
    // whose graphs have at least one edge).
    int layered = 0;
    int misordered = 0;
    for (std::uint64_t seed = 0; layered < 100 && seed < 1000; ++seed) {
        const blocksworld::BlockScene scene = blocksworld::generate_scene(seed);
        const blocksworld::SupportGraph graph = blocksworld::support_graph(scene);
        if (graph.edges.empty()) continue;
        ++layered;
        const RasterImage image = blocksworld::render_scene(scene);
        std::vector<baselines::MaskEntry> entries;
        for (const auto& block : scene.blocks) {
            entries.push_back(
                {block.id,
                 mask_from_rect(scene.canvas_w, scene.canvas_h, block.rect)});
        }
        const std::vector<std::string> order = baselines::order_masks(
            image, entries, baselines::Heuristic::kFrontToBack,
            blocksworld::make_synthetic_suite(scene));
        if (!blocksworld::valid_sequence(graph, order)) ++misordered;
    }
    const double misorder_rate =
        layered > 0 ? static_cast<double>(misordered) / layered : 0.0;

    std::ostringstream detail;
    detail << "small_to_large " << percent(s2l.accuracy)
           << " (need <= 60%), engine " << percent(eng.accuracy)
           << " (need >= 90%), front_to_back misorders " << misordered << "/"
           << layered << " layered scenes (need >= 30%)";
    const bool ok =
        s2l.accuracy <= 0.60 && eng.accuracy >= 0.90 && misorder_rate >= 0.30;
    return {ok, detail.str()};
}

std::pair<bool, std::string> full_decomposition_validity() {
    blocksworld::SceneSpec spec;
    spec.num_blocks = 5;
    spec.max_stack_depth = 5;
    int passed = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const blocksworld::BlockScene scene =
            blocksworld::generate_scene(seed, spec);
        engine::EngineConfig cfg;
        cfg.seed = seed;
        const engine::RemovalSequence seq = engine::decompose(
            blocksworld::render_scene(scene),
            blocksworld::make_synthetic_suite(scene), cfg);
        std::vector<BinaryMask> step_masks;
        for (const auto& step : seq.steps) step_masks.push_back(step.mask);
        if (evaluation::judge_sequence(scene, step_masks, seq.terminated)) {
            ++passed;
        }
    }

    int guarded = 0;
    int worst_steps = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const blocksworld::BlockScene scene = blocksworld::generate_scene(seed);
        backends::BackendSuite suite = blocksworld::make_synthetic_suite(scene);
        suite.remover = std::make_shared<IdentityRemover>();
        engine::EngineConfig cfg;
        cfg.seed = seed;
        const engine::RemovalSequence seq =
            engine::decompose(blocksworld::render_scene(scene), suite, cfg);
        worst_steps = std::max(worst_steps, static_cast<int>(seq.steps.size()));
        if (seq.terminated == "no_progress" && seq.steps.size() <= 3) ++guarded;
    }

    std::ostringstream detail;
    detail << passed << "/100 sequences valid and stepwise stable; "
           << "non-progress guard " << guarded
           << "/10 adversarial trials (worst " << worst_steps << " steps)";
    return {passed == 100 && guarded == 10, detail.str()};
}

std::pair<bool, std::string> sample_count_trend() {
    const fs::path dir = scratch("ablation100");
    const auto cases = generate_pairs(dir, 100, false);
    engine::EngineConfig cfg;
    const auto cells = evaluation::run_ablation(
        cases, {2, 4, 8, 16}, {{true, true}}, cfg, image_suite_provider(),
        "synthetic-100");
    fs::remove_all(dir);

    std::vector<double> acc;
    for (const auto& cell : cells) acc.push_back(cell.report.accuracy);
    bool nondecreasing = true;
    for (std::size_t i = 1; i < acc.size(); ++i) {
        if (acc[i] < acc[i - 1] - 0.03) nondecreasing = false;
    }
    const bool diminishing = (acc[3] - acc[2]) <= (acc[2] - acc[0]) + 0.03;

    std::ostringstream detail;
    detail << "accuracy by sample count 2/4/8/16: " << percent(acc[0]) << " "
           << percent(acc[1]) << " " << percent(acc[2]) << " "
           << percent(acc[3]);
    return {nondecreasing && diminishing, detail.str()};
}

std::pair<bool, std::string> slot_ablation_direction() {
    const fs::path dir = scratch("slots100");
    const auto cases = generate_pairs(dir, 100, false);
    engine::EngineConfig cfg;
    const auto cells = evaluation::run_ablation(
        cases, {16}, {{true, true}, {true, false}, {false, true}}, cfg,
        image_suite_provider(), "synthetic-100");
    fs::remove_all(dir);

    const double both = cells[0].report.accuracy;
    const double only_s = cells[1].report.accuracy;
    const double only_v = cells[2].report.accuracy;
    std::ostringstream detail;
    detail << "both " << percent(both) << ", S-only " << percent(only_s)
           << ", V-only " << percent(only_v)
           << " (need both >= max(single) - 0.02)";
    return {both >= std::max(only_s, only_v) - 0.02, detail.str()};
}

std::pair<bool, std::string> determinism() {
    const fs::path gen_a = scratch("det_gen_a");
    const fs::path gen_b = scratch("det_gen_b");
    for (const fs::path& dir : {gen_a, gen_b}) {
        if (run_cli_quiet({"gen-synth", "--out", dir.string(), "--pairs", "3",
                           "--scenes", "2", "--seed", "9"}) != 0) {
            return {false, "gen-synth run failed"};
        }
    }
    const bool manifests_equal =
        read_file(gen_a / "pairwise.jsonl") ==
            read_file(gen_b / "pairwise.jsonl") &&
        read_file(gen_a / "fullscene.jsonl") ==
            read_file(gen_b / "fullscene.jsonl");

    const fs::path dec_a = scratch("det_dec_a");
    const fs::path dec_b = scratch("det_dec_b");
    for (const fs::path& dir : {dec_a, dec_b}) {
        if (run_cli_quiet({"decompose", "--seed", "5", "--out",
                           dir.string()}) != 0) {
            return {false, "decompose run failed"};
        }
    }
    const bool sequences_equal =
        read_file(dec_a / "sequence.json") == read_file(dec_b / "sequence.json");

    for (const fs::path& dir : {gen_a, gen_b, dec_a, dec_b}) fs::remove_all(dir);
    std::ostringstream detail;
    detail << "manifests byte-identical: " << (manifests_equal ? "yes" : "no")
           << ", sequence.json byte-identical: "
           << (sequences_equal ? "yes" : "no");
    return {manifests_equal && sequences_equal, detail.str()};
}

std::pair<bool, std::string> reporter_arithmetic() {
    evaluation::EvalReport a;
    a.correct = 610;
    a.total = 668;
    a.accuracy = static_cast<double>(a.correct) / a.total;
    evaluation::EvalReport b;
    b.correct = 40;
    b.total = 56;
    b.accuracy = static_cast<double>(b.correct) / b.total;
    const std::string pa = a.accuracy_percent();
    const std::string pb = b.accuracy_percent();
    std::ostringstream detail;
    detail << "610/668 -> " << pa << ", 40/56 -> " << pb;
    return {pa == "91.32%" && pb == "71.43%", detail.str()};
}

std::pair<bool, std::string> protocol_fidelity() {
    const std::string positive =
        "Full HD, 4K, high quality, high resolution, photorealistic";
    const std::string negative =
        "bad anatomy, bad proportions, blurry, cropped, deformed, disfigured, "
        "duplicate, error, extra limbs, gross proportions, jpeg artifacts, "
        "long neck, low quality, lowres, malformed, morbid, mutated, "
        "mutilated, out of frame, ugly, worst quality";
    const bool prompts_ok =
        positive == backends::kDefaultPositivePrompt &&
        negative == backends::kDefaultNegativePrompt &&
        backends::InpaintRequest{}.prompt == positive &&
        backends::InpaintRequest{}.negative_prompt == negative;

    const bool resolution_ok = scoring::kDefaultCropResolution == 224 &&
                               engine::EngineConfig{}.crop_resolution == 224;

    // Zero-outside-mask over random rectangles and speckle masks.
    Rng rng(7);
    int checked = 0;
    bool crops_ok = true;
    for (int trial = 0; trial < 50 && crops_ok; ++trial) {
        const int w = rng.uniform_int(20, 90);
        const int h = rng.uniform_int(20, 90);
        RasterImage image(w, h);
        for (auto& byte : image.data) {
            byte = static_cast<std::uint8_t>(rng.uniform_int(1, 255));
        }
        BinaryMask mask(w, h);
        if (trial % 2 == 0) {
            const int bw = rng.uniform_int(3, w - 2);
            const int bh = rng.uniform_int(3, h - 2);
            mask = mask_from_rect(
                w, h,
                Rect{rng.uniform_int(0, w - bw), rng.uniform_int(0, h - bh),
                     bw, bh});
        } else {
            for (int i = 0; i < 40; ++i) {
                mask.set(rng.uniform_int(0, w - 1), rng.uniform_int(0, h - 1),
                         true);
            }
        }
        const scoring::SquareCrop crop = scoring::extract_crop(image, mask);
        if (crop.pixels.width != 224 || crop.pixels.height != 224) {
            crops_ok = false;
            break;
        }
        const BinaryMask crop_mask =
            resize_nearest(mask, crop.source_bounds, 224, 224);
        for (int y = 0; y < 224; ++y) {
            for (int x = 0; x < 224; ++x) {
                if (!crop_mask.at(x, y) &&
                    crop.pixels.pixel(x, y) != Rgb{0, 0, 0}) {
                    crops_ok = false;
                }
            }
        }
        ++checked;
    }

    std::ostringstream detail;
    detail << "prompt strings byte-exact: " << (prompts_ok ? "yes" : "no")
           << ", crop side 224: " << (resolution_ok ? "yes" : "no")
           << ", zero outside mask on " << checked << "/50 random crops";
    return {prompts_ok && resolution_ok && crops_ok && checked == 50,
            detail.str()};
}

}  // namespace

int main() {
    run_criterion(1, scoring_oracle);
    run_criterion(2, synthetic_pairwise_accuracy);
    run_criterion(3, heuristic_gap);
    run_criterion(4, full_decomposition_validity);
    run_criterion(5, sample_count_trend);
    run_criterion(6, slot_ablation_direction);
    run_criterion(7, determinism);
    run_criterion(8, reporter_arithmetic);
    run_criterion(9, protocol_fidelity);
    std::cout << (g_failures == 0 ? "all criteria passed"
                                  : std::to_string(g_failures) +
                                        " criteria failed")
              << std::endl;
    return g_failures;
}
