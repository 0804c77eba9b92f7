#include "jenga/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "jenga/errors.hpp"

namespace jenga::baselines {
namespace {

struct Keyed {
    const MaskEntry* entry;
    double primary = 0.0;
    double secondary = 0.0;
};

std::vector<std::string> sort_keyed(std::vector<Keyed> keyed) {
    std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
        if (a.primary != b.primary) return a.primary < b.primary;
        if (a.secondary != b.secondary) return a.secondary < b.secondary;
        return a.entry->id < b.entry->id;
    });
    std::vector<std::string> order;
    order.reserve(keyed.size());
    for (const Keyed& k : keyed) order.push_back(k.entry->id);
    return order;
}

double centroid_row(const BinaryMask& mask) {
    double sum = 0.0;
    long long count = 0;
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            if (mask.at(x, y)) {
                sum += y;
                ++count;
            }
    return sum / static_cast<double>(count);
}

}  // namespace

std::string heuristic_name(Heuristic h) {
    switch (h) {
        case Heuristic::kTopToBottom: return "top_to_bottom";
        case Heuristic::kSmallToLarge: return "small_to_large";
        case Heuristic::kFrontToBack: return "front_to_back";
    }
    return "unknown";
}

Heuristic heuristic_from_name(const std::string& name) {
    if (name == "top_to_bottom") return Heuristic::kTopToBottom;
    if (name == "small_to_large") return Heuristic::kSmallToLarge;
    if (name == "front_to_back") return Heuristic::kFrontToBack;
    throw UsageError("unknown heuristic: " + name);
}

std::vector<std::string> top_to_bottom(const std::vector<MaskEntry>& entries,
                                       bool use_centroid) {
    std::vector<Keyed> keyed;
    for (const MaskEntry& e : entries) {
        const Rect bbox = e.mask.bounding_box();  // throws on empty mask
        const double row = use_centroid ? centroid_row(e.mask) : bbox.y;
        keyed.push_back(Keyed{&e, row, static_cast<double>(e.mask.count())});
    }
    return sort_keyed(std::move(keyed));
}

std::vector<std::string> small_to_large(const std::vector<MaskEntry>& entries) {
    std::vector<Keyed> keyed;
    for (const MaskEntry& e : entries) {
        const Rect bbox = e.mask.bounding_box();
        keyed.push_back(Keyed{&e, static_cast<double>(e.mask.count()),
                              static_cast<double>(bbox.y)});
    }
    return sort_keyed(std::move(keyed));
}

std::vector<std::string> front_to_back(const std::vector<MaskEntry>& entries,
                                       const backends::DepthMap& depth) {
    std::vector<Keyed> keyed;
    for (const MaskEntry& e : entries) {
        if (e.mask.width != depth.width || e.mask.height != depth.height) {
            throw DimensionMismatchError("depth map does not match mask " + e.id);
        }
        if (e.mask.empty()) throw EmptyMaskError("empty mask " + e.id);
        double sum = 0.0;
        long long count = 0;
        for (int y = 0; y < e.mask.height; ++y)
            for (int x = 0; x < e.mask.width; ++x)
                if (e.mask.at(x, y)) {
                    sum += depth.at(x, y);
                    ++count;
                }
        keyed.push_back(Keyed{&e, sum / static_cast<double>(count),
                              static_cast<double>(e.mask.count())});
    }
    return sort_keyed(std::move(keyed));
}

std::vector<std::string> order_masks(const RasterImage& image,
                                     const std::vector<MaskEntry>& entries,
                                     Heuristic heuristic,
                                     const backends::BackendSuite& suite,
                                     bool use_centroid) {
    switch (heuristic) {
        case Heuristic::kTopToBottom:
            return top_to_bottom(entries, use_centroid);
        case Heuristic::kSmallToLarge:
            return small_to_large(entries);
        case Heuristic::kFrontToBack: {
            if (!suite.depth) throw BackendUnavailableError("no depth backend");
            return front_to_back(entries, suite.depth->estimate(image));
        }
    }
    throw UsageError("unknown heuristic");
}

}  // namespace jenga::baselines
