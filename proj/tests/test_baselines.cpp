#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "jenga/baselines.hpp"
#include "jenga/blocksworld.hpp"
#include "jenga/errors.hpp"

using namespace jenga;
using namespace jenga::baselines;
using jenga::blocksworld::Block;
using jenga::blocksworld::BlockScene;

namespace {

MaskEntry entry(const std::string& id, int w, int h, const Rect& r) {
    return MaskEntry{id, mask_from_rect(w, h, r)};
}

}  // namespace

TEST_CASE("top to bottom ordering and ties") {
    const std::vector<MaskEntry> entries{
        entry("low", 40, 40, Rect{2, 20, 10, 10}),
        entry("high", 40, 40, Rect{25, 2, 10, 10}),
        entry("mid", 40, 40, Rect{14, 10, 10, 10})};
    CHECK(top_to_bottom(entries) ==
          std::vector<std::string>{"high", "mid", "low"});

    // Same top row: the smaller area goes first; same area: id order.
    const std::vector<MaskEntry> tied{
        entry("big", 40, 40, Rect{0, 5, 12, 12}),
        entry("small", 40, 40, Rect{20, 5, 6, 6}),
        entry("also", 40, 40, Rect{30, 5, 6, 6})};
    CHECK(top_to_bottom(tied) ==
          std::vector<std::string>{"also", "small", "big"});

    // Centroid variant can disagree with min-row: a tall sliver tops a
    // high-but-shallow shape by min row, not by centroid.
    const std::vector<MaskEntry> cent{
        entry("tall", 40, 40, Rect{0, 4, 4, 30}),
        entry("shallow", 40, 40, Rect{10, 6, 10, 4})};
    CHECK(top_to_bottom(cent) == std::vector<std::string>{"tall", "shallow"});
    CHECK(top_to_bottom(cent, true) ==
          std::vector<std::string>{"shallow", "tall"});
}

TEST_CASE("small to large ordering and ties") {
    const std::vector<MaskEntry> entries{
        entry("big", 40, 40, Rect{0, 0, 12, 12}),
        entry("tiny", 40, 40, Rect{20, 30, 3, 3}),
        entry("mid", 40, 40, Rect{14, 10, 7, 7})};
    CHECK(small_to_large(entries) ==
          std::vector<std::string>{"tiny", "mid", "big"});

    // Equal areas: the higher one goes first, then id.
    const std::vector<MaskEntry> tied{
        entry("lower", 40, 40, Rect{0, 20, 5, 5}),
        entry("upper", 40, 40, Rect{10, 2, 5, 5})};
    CHECK(small_to_large(tied) == std::vector<std::string>{"upper", "lower"});
}

TEST_CASE("front to back follows mean depth, nearest first") {
    backends::DepthMap depth;
    depth.width = 20;
    depth.height = 20;
    depth.values.assign(400, 10.0f);
    // Near object: depth 2 in its footprint; far object: depth 7.
    for (int y = 2; y < 8; ++y) {
        for (int x = 2; x < 8; ++x) depth.values[y * 20 + x] = 2.0f;
    }
    for (int y = 10; y < 16; ++y) {
        for (int x = 10; x < 16; ++x) depth.values[y * 20 + x] = 7.0f;
    }
    const std::vector<MaskEntry> entries{
        entry("far", 20, 20, Rect{10, 10, 6, 6}),
        entry("near", 20, 20, Rect{2, 2, 6, 6})};
    CHECK(front_to_back(entries, depth) ==
          std::vector<std::string>{"near", "far"});

    backends::DepthMap wrong;
    wrong.width = 4;
    wrong.height = 4;
    wrong.values.assign(16, 0.0f);
    CHECK_THROWS_AS(front_to_back(entries, wrong), DimensionMismatchError);

    const std::vector<MaskEntry> with_empty{
        entry("ok", 20, 20, Rect{0, 0, 2, 2}), {"empty", BinaryMask(20, 20)}};
    CHECK_THROWS_AS(front_to_back(with_empty, depth), EmptyMaskError);
}

TEST_CASE("orderings are permutations and deterministic") {
    const BlockScene scene = blocksworld::generate_scene(17);
    std::vector<MaskEntry> entries;
    for (const Block& blk : scene.blocks) {
        entries.push_back(
            entry(blk.id, scene.canvas_w, scene.canvas_h, blk.rect));
    }
    const auto suite = blocksworld::make_synthetic_suite(scene);
    const RasterImage image = blocksworld::render_scene(scene);

    for (const Heuristic h : {Heuristic::kTopToBottom, Heuristic::kSmallToLarge,
                              Heuristic::kFrontToBack}) {
        const auto order = order_masks(image, entries, h, suite);
        CHECK(order == order_masks(image, entries, h, suite));
        auto sorted = order;
        std::sort(sorted.begin(), sorted.end());
        std::vector<std::string> want;
        for (const auto& e : entries) want.push_back(e.id);
        std::sort(want.begin(), want.end());
        CHECK(sorted == want);
    }
}

TEST_CASE("front to back mirrors the draw order on a layered scene") {
    // The synthetic depth oracle makes later-drawn blocks nearer, so the
    // heuristic must return the reverse of draw order.
    const BlockScene scene = blocksworld::generate_scene(29);
    std::vector<MaskEntry> entries;
    for (const Block& blk : scene.blocks) {
        entries.push_back(
            entry(blk.id, scene.canvas_w, scene.canvas_h, blk.rect));
    }
    const auto suite = blocksworld::make_synthetic_suite(scene);
    const auto order = order_masks(blocksworld::render_scene(scene), entries,
                                   Heuristic::kFrontToBack, suite);
    std::vector<std::string> reverse_draw;
    for (auto it = scene.blocks.rbegin(); it != scene.blocks.rend(); ++it) {
        reverse_draw.push_back(it->id);
    }
    CHECK(order == reverse_draw);
}

TEST_CASE("size order disagrees with the dependency order on pedestal scenes") {
    blocksworld::SceneSpec spec;
    spec.confounder_mode = true;
    const BlockScene scene = blocksworld::generate_scene(3, spec);
    const auto graph = blocksworld::support_graph(scene);
    REQUIRE_FALSE(graph.edges.empty());

    std::vector<MaskEntry> entries;
    for (const Block& blk : scene.blocks) {
        entries.push_back(
            entry(blk.id, scene.canvas_w, scene.canvas_h, blk.rect));
    }
    const auto order = small_to_large(entries);
    auto pos = [&](const std::string& id) {
        return std::find(order.begin(), order.end(), id) - order.begin();
    };
    // Pedestals are smaller than what they carry, so small_to_large removes
    // at least one supporter before its dependent.
    bool violated = false;
    for (const auto& e : graph.edges) {
        if (pos(e.supporter) < pos(e.dependent)) violated = true;
    }
    CHECK(violated);
    CHECK_FALSE(blocksworld::valid_sequence(graph, order));
}

TEST_CASE("heuristic names round trip") {
    for (const Heuristic h : {Heuristic::kTopToBottom, Heuristic::kSmallToLarge,
                              Heuristic::kFrontToBack}) {
        CHECK(heuristic_from_name(heuristic_name(h)) == h);
    }
    CHECK(heuristic_name(Heuristic::kTopToBottom) == "top_to_bottom");
    CHECK(heuristic_name(Heuristic::kSmallToLarge) == "small_to_large");
    CHECK(heuristic_name(Heuristic::kFrontToBack) == "front_to_back");
    CHECK_THROWS_AS(heuristic_from_name("sideways"), UsageError);
}
