#include "jenga/scoring.hpp"

#include <algorithm>
#include <cmath>

#include "jenga/errors.hpp"
#include "jenga/util.hpp"

namespace jenga::scoring {

std::string slot_name(EmbeddingSlot slot) {
    return slot == EmbeddingSlot::S ? "S" : "V";
}

EmbeddingVector EmbeddingVector::make(std::vector<double> values,
                                      EmbeddingSlot slot) {
    double norm_sq = 0.0;
    for (double v : values) norm_sq += v * v;
    const double norm = std::sqrt(norm_sq);
    if (std::abs(norm - 1.0) > 1e-6) {
        throw MalformedResponseError("embedding norm " + std::to_string(norm) +
                                     " violates unit-norm contract");
    }
    return EmbeddingVector{std::move(values), slot};
}

std::string normalization_mode_name(NormalizationMode mode) {
    switch (mode) {
        case NormalizationMode::kMultiply: return "multiply";
        case NormalizationMode::kDivideClamped: return "divide-clamped";
        case NormalizationMode::kNone: return "none";
    }
    return "multiply";
}

NormalizationMode normalization_mode_from_name(const std::string& name) {
    if (name == "multiply") return NormalizationMode::kMultiply;
    if (name == "divide-clamped") return NormalizationMode::kDivideClamped;
    if (name == "none") return NormalizationMode::kNone;
    throw UsageError("unknown normalization mode: " + name);
}

Rect expand_to_square(const Rect& bbox, int image_w, int image_h) {
    const int side = std::max(bbox.w, bbox.h);

    auto place = [](int center2, int side_len, int limit) {
        // center2 is twice the box center so the arithmetic stays integral.
        int origin = (center2 - side_len) / 2;
        origin = std::min(origin, limit - side_len);
        origin = std::max(origin, 0);
        return origin;
    };

    Rect out;
    out.w = std::min(side, image_w);
    out.h = std::min(side, image_h);
    out.x = place(2 * bbox.x + bbox.w, out.w, image_w);
    out.y = place(2 * bbox.y + bbox.h, out.h, image_h);
    return out;
}

namespace {

SquareCrop crop_impl(const RasterImage& image, const BinaryMask& mask,
                     const Rect& bounds, int resolution) {
    // Zero outside the mask before resampling so boundary interpolation never
    // pulls in non-object pixels.
    RasterImage masked(image.width, image.height);
    std::size_t inside = 0;
    for (int y = bounds.y; y < bounds.bottom(); ++y) {
        for (int x = bounds.x; x < bounds.right(); ++x) {
            if (mask.at(x, y)) {
                masked.set_pixel(x, y, image.pixel(x, y));
                ++inside;
            }
        }
    }

    SquareCrop crop;
    crop.source_bounds = bounds;
    crop.area_fraction = static_cast<double>(inside) / static_cast<double>(bounds.area());
    crop.pixels = resize_bilinear(masked, bounds, resolution, resolution);

    // Crop-space mask via nearest sampling defines the zero region exactly.
    const BinaryMask crop_mask = resize_nearest(mask, bounds, resolution, resolution);
    for (int y = 0; y < resolution; ++y) {
        for (int x = 0; x < resolution; ++x) {
            if (!crop_mask.at(x, y)) crop.pixels.set_pixel(x, y, Rgb{0, 0, 0});
        }
    }
    return crop;
}

}  // namespace

SquareCrop extract_crop(const RasterImage& image, const BinaryMask& mask,
                        int resolution) {
    if (mask.width != image.width || mask.height != image.height) {
        throw DimensionMismatchError("extract_crop: mask/image shape mismatch");
    }
    const Rect bbox = mask.bounding_box();  // throws EmptyMaskError
    const Rect bounds = expand_to_square(bbox, image.width, image.height);
    return crop_impl(image, mask, bounds, resolution);
}

SquareCrop extract_crop_at(const RasterImage& image, const BinaryMask& mask,
                           const Rect& source_bounds, int resolution) {
    if (mask.width != image.width || mask.height != image.height) {
        throw DimensionMismatchError("extract_crop_at: mask/image shape mismatch");
    }
    if (mask.empty()) throw EmptyMaskError("extract_crop_at: empty mask");
    return crop_impl(image, mask, source_bounds, resolution);
}

double normalized_similarity(const EmbeddingVector& a, const EmbeddingVector& b,
                             double area_fraction, NormalizationMode mode) {
    if (a.slot != b.slot) {
        throw SlotMismatchError("normalized_similarity: slot " + slot_name(a.slot) +
                                " vs " + slot_name(b.slot));
    }
    if (a.values.size() != b.values.size()) {
        throw DimensionMismatchError("normalized_similarity: dimension " +
                                     std::to_string(a.values.size()) + " vs " +
                                     std::to_string(b.values.size()));
    }
    double dot = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        dot += a.values[i] * b.values[i];
    }
    const double cosine = std::clamp(dot, -1.0, 1.0);
    const double base = (cosine + 1.0) / 2.0;
    switch (mode) {
        case NormalizationMode::kMultiply:
            return clamp01(base * area_fraction);
        case NormalizationMode::kDivideClamped:
            return clamp01(base / area_fraction);
        case NormalizationMode::kNone:
            return clamp01(base);
    }
    return clamp01(base * area_fraction);
}

double diversity_from_similarities(const std::vector<double>& sim_s,
                                   const std::vector<double>& sim_v) {
    if (sim_s.size() != sim_v.size()) {
        throw DimensionMismatchError(
            "diversity_from_similarities: slot sample counts differ");
    }
    if (sim_s.empty()) {
        throw EmptySampleSetError("diversity_from_similarities: need N >= 1 samples");
    }
    double sum_s = 0.0;
    double sum_v = 0.0;
    for (double v : sim_s) sum_s += v;
    for (double v : sim_v) sum_v += v;
    const double n = static_cast<double>(sim_s.size());
    return clamp01(1.0 - (sum_s / n) * (sum_v / n));
}

DiversityScore diversity_score(const SquareCrop& original,
                               const std::vector<SquareCrop>& counterfactuals,
                               const EmbedFn& embed_s, const EmbedFn& embed_v,
                               const ScoreOptions& options) {
    if (counterfactuals.empty()) {
        throw EmptySampleSetError("diversity_score: N = 0");
    }
    for (const SquareCrop& c : counterfactuals) {
        if (c.pixels.width != original.pixels.width ||
            c.pixels.height != original.pixels.height) {
            throw DimensionMismatchError("diversity_score: crop resolution mismatch");
        }
    }

    DiversityScore score;
    score.n = static_cast<int>(counterfactuals.size());
    score.area_fraction = original.area_fraction;

    const EmbeddingVector orig_s = options.use_slot_s ? embed_s(original) : EmbeddingVector{};
    const EmbeddingVector orig_v = options.use_slot_v ? embed_v(original) : EmbeddingVector{};

    score.per_sample_sim_s.reserve(counterfactuals.size());
    score.per_sample_sim_v.reserve(counterfactuals.size());
    for (const SquareCrop& sample : counterfactuals) {
        score.per_sample_sim_s.push_back(
            options.use_slot_s
                ? normalized_similarity(orig_s, embed_s(sample),
                                        original.area_fraction, options.mode)
                : 1.0);
        score.per_sample_sim_v.push_back(
            options.use_slot_v
                ? normalized_similarity(orig_v, embed_v(sample),
                                        original.area_fraction, options.mode)
                : 1.0);
    }
    score.value = diversity_from_similarities(score.per_sample_sim_s,
                                              score.per_sample_sim_v);
    return score;
}

PairwiseDecision pairwise_order(const DiversityScore& score_a,
                                const DiversityScore& score_b,
                                long long area_a, long long area_b,
                                const std::string& id_a, const std::string& id_b) {
    bool a_first;
    bool tie = false;
    if (score_a.value != score_b.value) {
        a_first = score_a.value > score_b.value;
    } else {
        tie = true;
        if (area_a != area_b) {
            a_first = area_a < area_b;
        } else {
            a_first = id_a <= id_b;
        }
    }
    PairwiseDecision decision;
    decision.first = a_first ? id_a : id_b;
    decision.score_first = a_first ? score_a : score_b;
    decision.score_second = a_first ? score_b : score_a;
    decision.tie_broken = tie;
    return decision;
}

}  // namespace jenga::scoring
