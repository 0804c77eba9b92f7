#include "jenga/blocksworld.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "jenga/errors.hpp"
#include "jenga/util.hpp"

namespace jenga::blocksworld {
namespace {

using nlohmann::json;

constexpr int kSideMargin = 12;
constexpr int kTopMargin = 20;
constexpr int kBelowGround = 12;

std::uint32_t color_key(Rgb c) {
    return (static_cast<std::uint32_t>(c.r) << 16) |
           (static_cast<std::uint32_t>(c.g) << 8) | c.b;
}

int channel_spread(Rgb c) {
    const int hi = std::max({int(c.r), int(c.g), int(c.b)});
    const int lo = std::min({int(c.r), int(c.g), int(c.b)});
    return hi - lo;
}

// Chromatic block palette: 5 levels per channel, pure grays dropped so that
// blocks stay distinguishable from the gray background and from resampling
// blends (which are gray mixtures of block colors with black or background).
std::vector<Rgb> block_palette() {
    static const int levels[5] = {36, 66, 96, 126, 156};
    std::vector<Rgb> palette;
    for (int r : levels)
        for (int g : levels)
            for (int b : levels) {
                const Rgb c{static_cast<std::uint8_t>(r),
                            static_cast<std::uint8_t>(g),
                            static_cast<std::uint8_t>(b)};
                if (channel_spread(c) >= 30) palette.push_back(c);
            }
    return palette;
}

template <typename T>
void shuffle_in_place(std::vector<T>& items, Rng& rng) {
    for (int i = static_cast<int>(items.size()) - 1; i > 0; --i) {
        std::swap(items[i], items[rng.uniform_int(0, i)]);
    }
}

bool rects_contact(const Rect& upper, const Rect& lower) {
    if (upper.bottom() != lower.y) return false;
    return std::min(upper.right(), lower.right()) -
               std::max(upper.x, lower.x) >=
           1;
}

// Center-over-contact stability of one rectangle among `rects`.
bool rect_stable(const Rect& r, const std::vector<Rect>& rects, int ground_y) {
    if (r.bottom() == ground_y) return true;
    const double cx = r.x + r.w / 2.0;
    for (const Rect& s : rects) {
        if (s == r) continue;
        if (!rects_contact(r, s)) continue;
        const double lo = std::max(r.x, s.x);
        const double hi = std::min(r.right(), s.right());
        if (cx >= lo && cx <= hi) return true;
    }
    return false;
}

struct StackPlan {
    std::vector<Rect> rects;  // bottom first, relative x
};

// Normal stacks: upper blocks no wider than their supporter and fully over
// it, aspect ratios near square so area-fraction normalization cannot invert
// the free/load-bearing score gap.
StackPlan build_normal_stack(int height, Rng& rng) {
    StackPlan plan;
    int w = rng.uniform_int(26, 40);
    int h = rng.uniform_int((4 * w + 4) / 5, (5 * w) / 4);
    int x = 0;
    int bottom = 0;
    plan.rects.push_back(Rect{x, bottom - h, w, h});
    for (int level = 1; level < height; ++level) {
        const int below_w = w;
        w = rng.uniform_int((72 * below_w + 99) / 100, below_w);
        h = rng.uniform_int((4 * w + 4) / 5, (5 * w) / 4);
        x += rng.uniform_int(0, below_w - w);
        bottom = plan.rects.back().y;
        plan.rects.push_back(Rect{x, bottom - h, w, h});
    }
    return plan;
}

// Confounder stacks: every supporter strictly smaller in area than what it
// carries (squat pedestal under a wider slab), which makes smallest-first
// removal invalid by construction.
StackPlan build_confounder_stack(int height, Rng& rng) {
    StackPlan plan;
    int w = rng.uniform_int(18, 24);
    int h = rng.uniform_int(w - 2, w + 2);
    int x = 0;
    int bottom = 0;
    plan.rects.push_back(Rect{x, bottom - h, w, h});
    for (int level = 1; level < height; ++level) {
        const Rect below = plan.rects.back();
        const int w_lo = below.w + 6;
        const int w_hi = std::min(2 * below.w, 64);
        if (w_lo > w_hi) throw InfeasibleSpecError("confounder stack too deep");
        w = rng.uniform_int(w_lo, w_hi);
        const long long below_area = below.area();
        const int h_lo = std::max((10 * w + 21) / 22,
                                  static_cast<int>(below_area / w) + 1);
        h = rng.uniform_int(std::min(h_lo, w), w);
        x = below.x - rng.uniform_int(0, w - below.w);
        plan.rects.push_back(Rect{x, below.y - h, w, h});
    }
    return plan;
}

BlockScene assemble_scene(std::uint64_t seed, const SceneSpec& spec, Rng& rng) {
    std::vector<int> heights;
    int remaining = spec.num_blocks;
    while (remaining > 0) {
        const int cap = std::min(spec.max_stack_depth, remaining);
        int lo = 1;
        if (spec.confounder_mode && remaining >= 2) {
            if (cap < 2) throw InfeasibleSpecError("confounder needs depth >= 2");
            lo = 2;
        }
        const int h = rng.uniform_int(lo, cap);
        heights.push_back(h);
        remaining -= h;
    }

    std::vector<StackPlan> stacks;
    stacks.reserve(heights.size());
    for (int h : heights) {
        stacks.push_back(spec.confounder_mode ? build_confounder_stack(h, rng)
                                              : build_normal_stack(h, rng));
    }

    // Lay stacks out left to right with gaps, then translate onto the canvas.
    std::vector<Rect> placed;
    int cursor = kSideMargin;
    int min_y = 0;
    for (std::size_t s = 0; s < stacks.size(); ++s) {
        if (s > 0) cursor += rng.uniform_int(8, 16);
        int lo_x = stacks[s].rects.front().x;
        int hi_x = stacks[s].rects.front().right();
        for (const Rect& r : stacks[s].rects) {
            lo_x = std::min(lo_x, r.x);
            hi_x = std::max(hi_x, r.right());
        }
        for (const Rect& r : stacks[s].rects) {
            Rect shifted = r;
            shifted.x += cursor - lo_x;
            placed.push_back(shifted);
            min_y = std::min(min_y, shifted.y);
        }
        cursor += hi_x - lo_x;
    }

    BlockScene scene;
    scene.seed = seed;
    scene.canvas_w = cursor + kSideMargin;
    scene.canvas_h = (0 - min_y) + kTopMargin + kBelowGround;
    scene.ground_y = scene.canvas_h - kBelowGround;

    std::vector<Rgb> palette = block_palette();
    if (static_cast<int>(palette.size()) < spec.num_blocks) {
        throw InfeasibleSpecError("not enough distinct block colors");
    }
    shuffle_in_place(palette, rng);

    // Draw order (= depth order) is shuffled so nearness carries no
    // information about the stacking structure.
    std::vector<int> order(placed.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    shuffle_in_place(order, rng);

    for (std::size_t i = 0; i < placed.size(); ++i) {
        Rect r = placed[order[i]];
        r.y += scene.ground_y;
        char name[16];
        std::snprintf(name, sizeof name, "b%02u", static_cast<unsigned>(i));
        scene.blocks.push_back(Block{name, r, palette[i]});
    }
    return scene;
}

struct FillPlan {
    bool load_bearing = false;
    Rect span;       // load-bearing: contact span to cover, top at mask top
    Rgb base_color;  // load-bearing: color to jitter
};

// Shared fill grammar. `rng` must be consumed identically by both the
// scene-level and the image-level inpainter so the two stay bit-compatible.
void draw_fill(RasterImage& image, const BinaryMask& mask, const Rect& bbox,
               const FillPlan& plan, Rng& rng) {
    const auto paint = [&](const Rect& r, Rgb color) {
        const Rect clipped = intersect(r, Rect{0, 0, image.width, image.height});
        for (int y = clipped.y; y < clipped.bottom(); ++y)
            for (int x = clipped.x; x < clipped.right(); ++x)
                if (mask.at(x, y)) image.set_pixel(x, y, color);
    };

    if (plan.load_bearing) {
        const double f = rng.uniform(0.82, 1.0);
        const int height = std::max(1, static_cast<int>(std::lround(f * bbox.h)));
        Rgb color = plan.base_color;
        const auto jitter = [&](std::uint8_t c) {
            const int v = int(c) + rng.uniform_int(-12, 12);
            return static_cast<std::uint8_t>(std::clamp(v, 0, 255));
        };
        color = Rgb{jitter(color.r), jitter(color.g), jitter(color.b)};
        paint(Rect{plan.span.x, bbox.y, plan.span.w, height}, color);
        return;
    }
    if (rng.bernoulli(0.5)) return;  // empty background
    const int rw = std::max(1, static_cast<int>(std::lround(
                                   rng.uniform(0.3, 0.7) * bbox.w)));
    const int rh = std::max(1, static_cast<int>(std::lround(
                                   rng.uniform(0.3, 0.7) * bbox.h)));
    const int rx = bbox.x + rng.uniform_int(0, std::max(0, bbox.w - rw));
    const int ry = bbox.y + rng.uniform_int(0, std::max(0, bbox.h - rh));
    const Rgb color{static_cast<std::uint8_t>(rng.uniform_int(8, 215)),
                    static_cast<std::uint8_t>(rng.uniform_int(8, 215)),
                    static_cast<std::uint8_t>(rng.uniform_int(8, 215))};
    paint(Rect{rx, ry, rw, rh}, color);
}

// Decides between supporter fill and free fill for erasing `target_rects`
// from the rectangle population, and computes the contact span to cover.
FillPlan plan_fill(const std::vector<Rect>& all, const std::vector<Rect>& targets,
                   Rgb target_color, const Rect& bbox, int ground_y) {
    std::vector<Rect> residual;
    for (const Rect& r : all) {
        if (std::find(targets.begin(), targets.end(), r) == targets.end())
            residual.push_back(r);
    }
    FillPlan plan;
    plan.base_color = target_color;
    int span_lo = 0;
    int span_hi = 0;
    for (const Rect& r : residual) {
        if (rect_stable(r, residual, ground_y)) continue;
        if (!rect_stable(r, all, ground_y)) continue;  // was already loose
        const int lo = std::max(r.x, bbox.x);
        const int hi = std::min(r.right(), bbox.right());
        if (lo >= hi) continue;
        if (!plan.load_bearing) {
            span_lo = lo;
            span_hi = hi;
            plan.load_bearing = true;
        } else {
            span_lo = std::min(span_lo, lo);
            span_hi = std::max(span_hi, hi);
        }
    }
    if (plan.load_bearing) plan.span = Rect{span_lo, bbox.y, span_hi - span_lo, 0};
    return plan;
}

}  // namespace

const Block* BlockScene::find(const std::string& id) const {
    for (const Block& b : blocks)
        if (b.id == id) return &b;
    return nullptr;
}

std::vector<std::string> SupportGraph::supporters_of(const std::string& id) const {
    std::vector<std::string> out;
    for (const SupportEdge& e : edges)
        if (e.dependent == id) out.push_back(e.supporter);
    return out;
}

std::vector<std::string> SupportGraph::dependents_of(const std::string& id) const {
    std::vector<std::string> out;
    for (const SupportEdge& e : edges)
        if (e.supporter == id) out.push_back(e.dependent);
    return out;
}

BlockScene generate_scene(std::uint64_t seed, const SceneSpec& spec) {
    if (spec.num_blocks < 1) throw InfeasibleSpecError("numBlocks must be >= 1");
    if (spec.max_stack_depth < 1)
        throw InfeasibleSpecError("maxStackDepth must be >= 1");
    for (int attempt = 0; attempt < 32; ++attempt) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(attempt)));
        try {
            BlockScene scene = assemble_scene(seed, spec, rng);
            if (!is_stable(scene)) continue;
            return scene;
        } catch (const InfeasibleSpecError&) {
            continue;
        }
    }
    throw InfeasibleSpecError("could not place scene after bounded retries");
}

RasterImage render_scene(const BlockScene& scene) {
    RasterImage image(scene.canvas_w, scene.canvas_h, kBackground);
    for (const Block& b : scene.blocks) image.fill_rect(b.rect, b.color);
    return image;
}

SupportGraph support_graph(const BlockScene& scene) {
    SupportGraph graph;
    for (const Block& b : scene.blocks) graph.nodes.push_back(b.id);
    for (const Block& upper : scene.blocks) {
        if (upper.rect.bottom() == scene.ground_y) continue;
        for (const Block& lower : scene.blocks) {
            if (&upper == &lower) continue;
            if (rects_contact(upper.rect, lower.rect)) {
                graph.edges.push_back(SupportEdge{upper.id, lower.id});
            }
        }
    }
    return graph;
}

bool is_stable(const BlockScene& scene) {
    std::vector<Rect> rects;
    rects.reserve(scene.blocks.size());
    for (const Block& b : scene.blocks) rects.push_back(b.rect);
    for (const Rect& r : rects) {
        if (!rect_stable(r, rects, scene.ground_y)) return false;
    }
    return true;
}

bool valid_sequence(const SupportGraph& graph,
                    const std::vector<std::string>& order) {
    std::set<std::string> nodes(graph.nodes.begin(), graph.nodes.end());
    std::set<std::string> seen;
    for (const std::string& id : order) {
        if (!nodes.count(id) || !seen.insert(id).second) {
            throw NotAPermutationError("order is not a permutation of nodes: " +
                                       id);
        }
    }
    if (seen.size() != nodes.size()) {
        throw NotAPermutationError("order omits nodes");
    }
    std::unordered_map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    for (const SupportEdge& e : graph.edges) {
        if (pos[e.dependent] >= pos[e.supporter]) return false;
    }
    return true;
}

BlockScene remove_block(const BlockScene& scene, const std::string& id) {
    if (!scene.find(id)) throw UnknownBlockError("no block with id " + id);
    BlockScene out = scene;
    out.blocks.clear();
    for (const Block& b : scene.blocks)
        if (b.id != id) out.blocks.push_back(b);
    return out;
}

std::vector<RasterImage> synthetic_inpaint(const BlockScene& scene,
                                           const std::string& target_id, int n,
                                           std::uint64_t seed) {
    const Block* target = scene.find(target_id);
    if (!target) throw UnknownBlockError("no block with id " + target_id);
    if (n < 1) throw UsageError("sample count must be >= 1");

    std::vector<Rect> all;
    for (const Block& b : scene.blocks) all.push_back(b.rect);
    const FillPlan plan = plan_fill(all, {target->rect}, target->color,
                                    target->rect, scene.ground_y);

    const RasterImage base = render_scene(remove_block(scene, target_id));
    const BinaryMask mask =
        mask_from_rect(scene.canvas_w, scene.canvas_h, target->rect);
    std::vector<RasterImage> samples;
    samples.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
        RasterImage sample = base;
        draw_fill(sample, mask, target->rect, plan, rng);
        samples.push_back(std::move(sample));
    }
    return samples;
}

scoring::EmbeddingVector synthetic_embed(const scoring::SquareCrop& crop,
                                         scoring::EmbeddingSlot slot) {
    const RasterImage& img = crop.pixels;
    std::vector<double> values(65, 0.0);

    if (slot == scoring::EmbeddingSlot::S) {
        // Soft 4x4x4 histogram over nonzero pixels; zero pixels are the
        // outside-mask padding by the crop contract.
        bool any = false;
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                const Rgb px = img.pixel(x, y);
                if (px.r == 0 && px.g == 0 && px.b == 0) continue;
                any = true;
                double coord[3];
                int lo[3];
                double frac[3];
                const int ch[3] = {px.r, px.g, px.b};
                for (int c = 0; c < 3; ++c) {
                    coord[c] = std::clamp(ch[c] / 64.0 - 0.5, 0.0, 3.0);
                    lo[c] = static_cast<int>(coord[c]);
                    frac[c] = coord[c] - lo[c];
                }
                for (int dr = 0; dr < 2; ++dr)
                    for (int dg = 0; dg < 2; ++dg)
                        for (int db = 0; db < 2; ++db) {
                            const double w = (dr ? frac[0] : 1 - frac[0]) *
                                             (dg ? frac[1] : 1 - frac[1]) *
                                             (db ? frac[2] : 1 - frac[2]);
                            if (w == 0.0) continue;
                            const int r = std::min(lo[0] + dr, 3);
                            const int g = std::min(lo[1] + dg, 3);
                            const int b = std::min(lo[2] + db, 3);
                            values[(r * 4 + g) * 4 + b] += w;
                        }
            }
        }
        if (!any) values[64] = 1.0;
    } else {
        // 8x8 occupancy of chromatic pixels. Background, black padding, and
        // their resampling blends are gray and stay out of the grid.
        bool any = false;
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                if (channel_spread(img.pixel(x, y)) < 12) continue;
                any = true;
                const int gx = std::min(x * 8 / std::max(1, img.width), 7);
                const int gy = std::min(y * 8 / std::max(1, img.height), 7);
                values[gy * 8 + gx] += 1.0;
            }
        }
        if (!any) values[64] = 1.0;
    }

    double norm2 = 0.0;
    for (double v : values) norm2 += v * v;
    const double norm = std::sqrt(norm2);
    for (double& v : values) v /= norm;
    return scoring::EmbeddingVector::make(std::move(values), slot);
}

std::vector<ParsedBlock> parse_blocks(const RasterImage& image) {
    std::vector<ParsedBlock> blocks;
    std::vector<std::uint8_t> visited(
        static_cast<std::size_t>(image.width) * image.height, 0);
    const auto idx = [&](int x, int y) {
        return static_cast<std::size_t>(y) * image.width + x;
    };
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            if (visited[idx(x, y)]) continue;
            const Rgb color = image.pixel(x, y);
            if (color == kBackground) continue;
            // Flood the same-color 4-connected component.
            std::deque<std::pair<int, int>> queue{{x, y}};
            visited[idx(x, y)] = 1;
            long long count = 0;
            int min_x = x, max_x = x, min_y = y, max_y = y;
            while (!queue.empty()) {
                const auto [cx, cy] = queue.front();
                queue.pop_front();
                ++count;
                min_x = std::min(min_x, cx);
                max_x = std::max(max_x, cx);
                min_y = std::min(min_y, cy);
                max_y = std::max(max_y, cy);
                const int nx[4] = {cx - 1, cx + 1, cx, cx};
                const int ny[4] = {cy, cy, cy - 1, cy + 1};
                for (int k = 0; k < 4; ++k) {
                    if (!image.in_bounds(nx[k], ny[k])) continue;
                    if (visited[idx(nx[k], ny[k])]) continue;
                    if (!(image.pixel(nx[k], ny[k]) == color)) continue;
                    visited[idx(nx[k], ny[k])] = 1;
                    queue.emplace_back(nx[k], ny[k]);
                }
            }
            const Rect bbox{min_x, min_y, max_x - min_x + 1, max_y - min_y + 1};
            if (count != bbox.area()) {
                throw MalformedResponseError(
                    "non-rectangular region at " + std::to_string(min_x) + "," +
                    std::to_string(min_y));
            }
            blocks.push_back(ParsedBlock{bbox, color});
        }
    }
    return blocks;
}

std::string scene_to_json(const BlockScene& scene) {
    json doc;
    doc["seed"] = scene.seed;
    doc["canvas"] = {{"w", scene.canvas_w}, {"h", scene.canvas_h}};
    doc["groundY"] = scene.ground_y;
    doc["blocks"] = json::array();
    for (const Block& b : scene.blocks) {
        doc["blocks"].push_back({{"id", b.id},
                                 {"x", b.rect.x},
                                 {"y", b.rect.y},
                                 {"w", b.rect.w},
                                 {"h", b.rect.h},
                                 {"color", rgb_to_hex(b.color)}});
    }
    return doc.dump(2) + "\n";
}

BlockScene scene_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
        BlockScene scene;
        scene.seed = doc.at("seed").get<std::uint64_t>();
        scene.canvas_w = doc.at("canvas").at("w").get<int>();
        scene.canvas_h = doc.at("canvas").at("h").get<int>();
        scene.ground_y = doc.at("groundY").get<int>();
        for (const json& jb : doc.at("blocks")) {
            Block b;
            b.id = jb.at("id").get<std::string>();
            b.rect = Rect{jb.at("x").get<int>(), jb.at("y").get<int>(),
                          jb.at("w").get<int>(), jb.at("h").get<int>()};
            b.color = rgb_from_hex(jb.at("color").get<std::string>());
            scene.blocks.push_back(std::move(b));
        }
        return scene;
    } catch (const json::exception& e) {
        throw IoError(std::string("bad scene json: ") + e.what());
    }
}

BlockScene scene_from_image(const RasterImage& image) {
    BlockScene scene;
    scene.canvas_w = image.width;
    scene.canvas_h = image.height;
    int ground = image.height - kBelowGround;
    const std::vector<ParsedBlock> parsed = parse_blocks(image);
    for (const ParsedBlock& p : parsed) ground = std::max(ground, p.rect.bottom());
    scene.ground_y = ground;
    for (std::size_t i = 0; i < parsed.size(); ++i) {
        char name[16];
        std::snprintf(name, sizeof name, "p%02u", static_cast<unsigned>(i));
        scene.blocks.push_back(Block{name, parsed[i].rect, parsed[i].color});
    }
    return scene;
}

namespace {

struct SceneContext {
    int ground_y = 0;
    int num_blocks = 0;
    std::unordered_map<std::uint32_t, int> depth_rank;  // color -> draw index
};

std::vector<Rect> majority_overlap_targets(const std::vector<ParsedBlock>& blocks,
                                           const BinaryMask& mask,
                                           Rgb* dominant_color) {
    std::vector<Rect> targets;
    long long best_overlap = 0;
    for (const ParsedBlock& b : blocks) {
        long long overlap = 0;
        for (int y = b.rect.y; y < b.rect.bottom(); ++y)
            for (int x = b.rect.x; x < b.rect.right(); ++x)
                if (mask.in_bounds(x, y) && mask.at(x, y)) ++overlap;
        if (2 * overlap > b.rect.area()) {
            targets.push_back(b.rect);
            if (overlap > best_overlap) {
                best_overlap = overlap;
                if (dominant_color) *dominant_color = b.color;
            }
        }
    }
    return targets;
}

class SyntheticPointer : public backends::Pointer {
public:
    std::vector<backends::PointPrompt> propose_points(
        const RasterImage& image) override {
        std::vector<backends::PointPrompt> points;
        for (const ParsedBlock& b : parse_blocks(image)) {
            points.push_back(backends::PointPrompt{b.rect.x + b.rect.w / 2,
                                                   b.rect.y + b.rect.h / 2,
                                                   std::nullopt});
        }
        return points;
    }
};

class SyntheticSegmenter : public backends::Segmenter {
public:
    BinaryMask segment(const RasterImage& image,
                       backends::PointPrompt point) override {
        for (const ParsedBlock& b : parse_blocks(image)) {
            if (b.rect.contains(point.x, point.y)) {
                return mask_from_rect(image.width, image.height, b.rect);
            }
        }
        throw EmptyMaskError("no object at point " + std::to_string(point.x) +
                             "," + std::to_string(point.y));
    }
};

class SyntheticInpainter : public backends::Inpainter {
public:
    explicit SyntheticInpainter(std::shared_ptr<const SceneContext> ctx)
        : ctx_(std::move(ctx)) {}

    std::vector<RasterImage> inpaint(const RasterImage& image,
                                     const BinaryMask& mask,
                                     const backends::InpaintRequest& request) override {
        if (request.n < 1) throw UsageError("sample count must be >= 1");
        if (mask.width != image.width || mask.height != image.height) {
            throw DimensionMismatchError("mask does not match image");
        }
        if (mask.empty()) throw EmptyMaskError("inpaint mask is empty");

        const std::vector<ParsedBlock> blocks = parse_blocks(image);
        std::vector<Rect> all;
        for (const ParsedBlock& b : blocks) all.push_back(b.rect);
        Rgb dominant = kBackground;
        const std::vector<Rect> targets =
            majority_overlap_targets(blocks, mask, &dominant);
        const Rect bbox = mask.bounding_box();
        const FillPlan plan =
            plan_fill(all, targets, dominant, bbox, ctx_->ground_y);

        // Base sample: the masked region erased to background.
        RasterImage base = image;
        for (int y = bbox.y; y < bbox.bottom(); ++y)
            for (int x = bbox.x; x < bbox.right(); ++x)
                if (mask.at(x, y)) base.set_pixel(x, y, kBackground);

        std::vector<RasterImage> samples;
        samples.reserve(static_cast<std::size_t>(request.n));
        for (int i = 0; i < request.n; ++i) {
            Rng rng(mix_seed(request.seed, static_cast<std::uint64_t>(i)));
            RasterImage sample = base;
            draw_fill(sample, mask, bbox, plan, rng);
            samples.push_back(std::move(sample));
        }
        return samples;
    }

private:
    std::shared_ptr<const SceneContext> ctx_;
};

class SyntheticRemover : public backends::Remover {
public:
    RasterImage remove(const RasterImage& image,
                       const BinaryMask& mask) override {
        if (mask.empty()) throw EmptyMaskError("remove mask is empty");
        const std::vector<ParsedBlock> blocks = parse_blocks(image);
        const std::vector<Rect> targets =
            majority_overlap_targets(blocks, mask, nullptr);
        RasterImage out = image;
        for (const Rect& r : targets) out.fill_rect(r, kBackground);
        return out;
    }
};

class SyntheticEmbedder : public backends::Embedder {
public:
    explicit SyntheticEmbedder(scoring::EmbeddingSlot slot) : slot_(slot) {}

    scoring::EmbeddingVector embed(const scoring::SquareCrop& crop) override {
        return synthetic_embed(crop, slot_);
    }

    int dimension() const override { return 65; }

private:
    scoring::EmbeddingSlot slot_;
};

class SyntheticDepth : public backends::DepthEstimator {
public:
    explicit SyntheticDepth(std::shared_ptr<const SceneContext> ctx)
        : ctx_(std::move(ctx)) {}

    backends::DepthMap estimate(const RasterImage& image) override {
        backends::DepthMap map;
        map.width = image.width;
        map.height = image.height;
        const float far = static_cast<float>(ctx_->num_blocks + 1);
        map.values.assign(
            static_cast<std::size_t>(image.width) * image.height, far);
        for (const ParsedBlock& b : parse_blocks(image)) {
            const auto it = ctx_->depth_rank.find(color_key(b.color));
            // Blocks drawn later sit nearer the viewer (smaller depth).
            const float d = it == ctx_->depth_rank.end()
                                ? far
                                : static_cast<float>(ctx_->num_blocks - it->second);
            for (int y = b.rect.y; y < b.rect.bottom(); ++y)
                for (int x = b.rect.x; x < b.rect.right(); ++x)
                    map.values[static_cast<std::size_t>(y) * map.width + x] = d;
        }
        return map;
    }

private:
    std::shared_ptr<const SceneContext> ctx_;
};

}  // namespace

backends::BackendSuite make_synthetic_suite(const BlockScene& scene) {
    auto ctx = std::make_shared<SceneContext>();
    ctx->ground_y = scene.ground_y;
    ctx->num_blocks = static_cast<int>(scene.blocks.size());
    for (std::size_t i = 0; i < scene.blocks.size(); ++i) {
        ctx->depth_rank[color_key(scene.blocks[i].color)] = static_cast<int>(i);
    }

    backends::BackendSuite suite;
    suite.pointer = std::make_shared<SyntheticPointer>();
    suite.segmenter = std::make_shared<SyntheticSegmenter>();
    suite.inpainter = std::make_shared<SyntheticInpainter>(ctx);
    suite.embedder_s =
        std::make_shared<SyntheticEmbedder>(scoring::EmbeddingSlot::S);
    suite.embedder_v =
        std::make_shared<SyntheticEmbedder>(scoring::EmbeddingSlot::V);
    suite.remover = std::make_shared<SyntheticRemover>();
    suite.depth = std::make_shared<SyntheticDepth>(ctx);
    const std::string tag = "synthetic blocksworld, scene seed " +
                            std::to_string(scene.seed);
    for (const char* cap : {"pointer", "segmenter", "inpainter", "embedder_s",
                            "embedder_v", "remover", "depth"}) {
        suite.provenance[cap] = tag;
    }
    return suite;
}

}  // namespace jenga::blocksworld
