#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "jenga/backends.hpp"
#include "jenga/raster.hpp"
#include "jenga/scoring.hpp"

namespace jenga::blocksworld {

inline constexpr Rgb kBackground{236, 236, 236};

struct Block {
    std::string id;
    Rect rect;
    Rgb color;

    bool operator==(const Block&) const = default;
};

/// Synthetic stacking scene. Blocks are axis-aligned, non-overlapping solid
/// rectangles; each rests exactly on the ground line (bottom == groundY) or
/// on another block's top edge. Array order is draw order: later blocks are
/// nearer to the viewer (smaller relative depth).
struct BlockScene {
    std::uint64_t seed = 0;
    int canvas_w = 0;
    int canvas_h = 0;
    int ground_y = 0;
    std::vector<Block> blocks;

    const Block* find(const std::string& id) const;
    bool operator==(const BlockScene&) const = default;
};

/// Dependency edges point from the resting block to what holds it up.
struct SupportEdge {
    std::string dependent;
    std::string supporter;

    bool operator==(const SupportEdge&) const = default;
};

struct SupportGraph {
    std::vector<std::string> nodes;
    std::vector<SupportEdge> edges;

    std::vector<std::string> supporters_of(const std::string& id) const;
    std::vector<std::string> dependents_of(const std::string& id) const;
};

struct SceneSpec {
    int num_blocks = 4;
    int max_stack_depth = 3;
    bool confounder_mode = false;
};

/// Deterministic scene synthesis; throws InfeasibleSpecError when the spec
/// cannot be placed after bounded retries. In confounder mode every support
/// pair has area(supporter) < area(dependent).
BlockScene generate_scene(std::uint64_t seed, const SceneSpec& spec = {});

/// Uniform background, one solid color region per block, no other marks.
RasterImage render_scene(const BlockScene& scene);

SupportGraph support_graph(const BlockScene& scene);

/// Static stability: every block rests on the ground or has supporters whose
/// contact intervals jointly cover its horizontal center.
bool is_stable(const BlockScene& scene);

/// True iff `order` (a permutation of the graph's nodes, else
/// NotAPermutationError) removes every dependent before each of its
/// supporters.
bool valid_sequence(const SupportGraph& graph,
                    const std::vector<std::string>& order);

/// Scene minus one block; throws UnknownBlockError for foreign ids.
BlockScene remove_block(const BlockScene& scene, const std::string& id);

/// Counterfactual fills of the target's region. Pixels outside the target's
/// footprint are exactly the untouched render. If deleting the target leaves
/// some block unsupported, every sample draws a supporter rectangle across
/// the needed contact span with jittered height/color (low diversity);
/// otherwise samples come from the free-fill distribution: empty background
/// with probability 0.5, else a random smaller rectangle (high diversity).
std::vector<RasterImage> synthetic_inpaint(const BlockScene& scene,
                                           const std::string& target_id, int n,
                                           std::uint64_t seed);

/// Deterministic stand-in features. Slot S is a soft 4x4x4 color histogram
/// over the crop's nonzero pixels (semantic analog); slot V is an 8x8
/// occupancy grid of chromatic pixels (structural analog). Each carries one
/// extra empty-indicator dimension used as the all-empty fallback basis.
scoring::EmbeddingVector synthetic_embed(const scoring::SquareCrop& crop,
                                         scoring::EmbeddingSlot slot);

struct ParsedBlock {
    Rect rect;
    Rgb color;
};

/// Recovers the solid rectangles of a rendered scene (any uniform
/// non-background 4-connected component). Throws MalformedResponseError if a
/// component is not a solid rectangle.
std::vector<ParsedBlock> parse_blocks(const RasterImage& image);

std::string scene_to_json(const BlockScene& scene);
BlockScene scene_from_json(const std::string& text);

/// Reconstructs scene geometry from a render alone (ids assigned in scan
/// order, ground line at the lowest block bottom). Good enough for the
/// stability oracle; draw order is lost.
BlockScene scene_from_image(const RasterImage& image);

/// Backend suite bound to a scene: capabilities parse the current image, so
/// they stay consistent after removals; ground line and depth order come
/// from the bound scene.
backends::BackendSuite make_synthetic_suite(const BlockScene& scene);

}  // namespace jenga::blocksworld
