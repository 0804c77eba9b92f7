#pragma once

#include <string>
#include <vector>

#include "jenga/backends.hpp"
#include "jenga/raster.hpp"

namespace jenga::baselines {

enum class Heuristic { kTopToBottom, kSmallToLarge, kFrontToBack };

std::string heuristic_name(Heuristic h);
Heuristic heuristic_from_name(const std::string& name);

struct MaskEntry {
    std::string id;
    BinaryMask mask;
};

/// Topmost first: ascending minimum row (or centroid row with
/// `use_centroid`); ties by smaller area, then id.
std::vector<std::string> top_to_bottom(const std::vector<MaskEntry>& entries,
                                       bool use_centroid = false);

/// Smallest pixel area first; ties by topmost row, then id.
std::vector<std::string> small_to_large(const std::vector<MaskEntry>& entries);

/// Nearest first: ascending mean depth over the mask; ties by smaller area,
/// then id. Depth map dimensions must match the masks.
std::vector<std::string> front_to_back(const std::vector<MaskEntry>& entries,
                                       const backends::DepthMap& depth);

/// Applies one heuristic as a static full ordering (no re-detection) over
/// the given masks, pulling a depth map from the suite when needed.
std::vector<std::string> order_masks(const RasterImage& image,
                                     const std::vector<MaskEntry>& entries,
                                     Heuristic heuristic,
                                     const backends::BackendSuite& suite,
                                     bool use_centroid = false);

}  // namespace jenga::baselines
