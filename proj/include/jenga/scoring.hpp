#pragma once

#include <functional>
#include <string>
#include <vector>

#include "jenga/raster.hpp"

namespace jenga::scoring {

inline constexpr int kDefaultCropResolution = 224;

/// Square, fixed-resolution object crop. Pixels outside the mask region are
/// zero-valued; area_fraction is the share of source-bounds pixels that lie
/// inside the mask.
struct SquareCrop {
    RasterImage pixels;
    double area_fraction = 0.0;
    Rect source_bounds;
};

enum class EmbeddingSlot { S, V };

std::string slot_name(EmbeddingSlot slot);

/// Unit-norm feature vector (tolerance 1e-6, checked at construction).
struct EmbeddingVector {
    std::vector<double> values;
    EmbeddingSlot slot = EmbeddingSlot::S;

    static EmbeddingVector make(std::vector<double> values, EmbeddingSlot slot);
};

using EmbedFn = std::function<EmbeddingVector(const SquareCrop&)>;

enum class NormalizationMode { kMultiply, kDivideClamped, kNone };

std::string normalization_mode_name(NormalizationMode mode);
NormalizationMode normalization_mode_from_name(const std::string& name);

struct ScoreOptions {
    NormalizationMode mode = NormalizationMode::kMultiply;
    bool use_slot_s = true;
    bool use_slot_v = true;
};

struct DiversityScore {
    double value = 0.0;
    std::vector<double> per_sample_sim_s;
    std::vector<double> per_sample_sim_v;
    int n = 0;
    double area_fraction = 0.0;
};

struct PairwiseDecision {
    std::string first;
    DiversityScore score_first;
    DiversityScore score_second;
    bool tie_broken = false;
};

/// Expands a tight bounding box to a square about its center, clipping at the
/// image border and shifting inward when clipped. When the square side exceeds
/// an image dimension the result is clamped to that dimension.
Rect expand_to_square(const Rect& bbox, int image_w, int image_h);

/// Crop protocol: tight mask bbox, square expansion, resample to
/// `resolution`, zero everything outside the mask.
SquareCrop extract_crop(const RasterImage& image, const BinaryMask& mask,
                        int resolution = kDefaultCropResolution);

/// Same protocol with precomputed source bounds, used to crop counterfactual
/// fills at the original object's location with the original mask.
SquareCrop extract_crop_at(const RasterImage& image, const BinaryMask& mask,
                           const Rect& source_bounds,
                           int resolution = kDefaultCropResolution);

/// Cosine similarity mapped to [0,1] via (cos+1)/2, then combined with the
/// crop's area fraction according to `mode`, clamped to [0,1].
double normalized_similarity(const EmbeddingVector& a, const EmbeddingVector& b,
                             double area_fraction,
                             NormalizationMode mode = NormalizationMode::kMultiply);

/// 1 - mean(sim_s) * mean(sim_v), clamped to [0,1].
double diversity_from_similarities(const std::vector<double>& sim_s,
                                   const std::vector<double>& sim_v);

/// Scores how replaceable the original crop is given N counterfactual crops
/// of the same region. A disabled slot contributes a fixed factor of 1 and
/// its per-sample similarities are recorded as 1.
DiversityScore diversity_score(const SquareCrop& original,
                               const std::vector<SquareCrop>& counterfactuals,
                               const EmbedFn& embed_s, const EmbedFn& embed_v,
                               const ScoreOptions& options = {});

/// Removal decision: higher diversity first; exact ties fall back to smaller
/// mask area, then lexicographically smaller identifier.
PairwiseDecision pairwise_order(const DiversityScore& score_a,
                                const DiversityScore& score_b,
                                long long area_a, long long area_b,
                                const std::string& id_a, const std::string& id_b);

}  // namespace jenga::scoring
