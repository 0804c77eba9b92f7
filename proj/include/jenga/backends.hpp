#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "jenga/errors.hpp"
#include "jenga/raster.hpp"
#include "jenga/scoring.hpp"

namespace jenga::backends {

// Default conditioning text for generative fill, shared by every inpainting
// backend unless a caller overrides it.
inline constexpr const char* kDefaultPositivePrompt =
    "Full HD, 4K, high quality, high resolution, photorealistic";
inline constexpr const char* kDefaultNegativePrompt =
    "bad anatomy, bad proportions, blurry, cropped, deformed, disfigured, "
    "duplicate, error, extra limbs, gross proportions, jpeg artifacts, "
    "long neck, low quality, lowres, malformed, morbid, mutated, mutilated, "
    "out of frame, ugly, worst quality";

struct PointPrompt {
    int x = 0;
    int y = 0;
    std::optional<double> confidence;

    bool operator==(const PointPrompt&) const = default;
};

/// Candidate object locations, roughly one per salient object.
class Pointer {
public:
    virtual ~Pointer() = default;
    virtual std::vector<PointPrompt> propose_points(const RasterImage& image) = 0;
};

/// Point-prompted instance segmentation. Throws EmptyMaskError when there is
/// no object at the point; callers skip the prompt with a warning.
class Segmenter {
public:
    virtual ~Segmenter() = default;
    virtual BinaryMask segment(const RasterImage& image, PointPrompt point) = 0;
};

struct InpaintRequest {
    int n = 16;
    std::uint64_t seed = 0;
    std::string prompt = kDefaultPositivePrompt;
    std::string negative_prompt = kDefaultNegativePrompt;
};

/// Raised when a generative backend produced only some of the requested
/// samples; the successes ride along so callers may still use them.
class PartialBatchError : public Error {
public:
    PartialBatchError(std::string message, std::vector<RasterImage> completed)
        : Error(ErrorCode::kPartialBatch, std::move(message)),
          completed_(std::move(completed)) {}

    const std::vector<RasterImage>& completed() const { return completed_; }

private:
    std::vector<RasterImage> completed_;
};

/// Mask-conditioned generative fill. Returns request.n images of the input
/// size; pixels outside the mask are preserved verbatim.
class Inpainter {
public:
    virtual ~Inpainter() = default;
    virtual std::vector<RasterImage> inpaint(const RasterImage& image,
                                             const BinaryMask& mask,
                                             const InpaintRequest& request) = 0;
};

/// Crop embedding for one similarity slot; the output dimension is fixed per
/// embedder instance.
class Embedder {
public:
    virtual ~Embedder() = default;
    virtual scoring::EmbeddingVector embed(const scoring::SquareCrop& crop) = 0;
    virtual int dimension() const = 0;
};

/// Object removal: erase the masked region and leave a plausible background.
/// One image out, not a distribution.
class Remover {
public:
    virtual ~Remover() = default;
    virtual RasterImage remove(const RasterImage& image,
                               const BinaryMask& mask) = 0;
};

/// Relative depth, one value per pixel; smaller means nearer to the camera.
struct DepthMap {
    int width = 0;
    int height = 0;
    std::vector<float> values;

    float at(int x, int y) const {
        return values[static_cast<std::size_t>(y) * width + x];
    }
};

class DepthEstimator {
public:
    virtual ~DepthEstimator() = default;
    virtual DepthMap estimate(const RasterImage& image) = 0;
};

/// One handle per capability plus provenance notes (model name, endpoint,
/// scene seed, ...) recorded into run artifacts. Handles may be null when a
/// capability is unavailable; call sites check before use.
struct BackendSuite {
    std::shared_ptr<Pointer> pointer;
    std::shared_ptr<Segmenter> segmenter;
    std::shared_ptr<Inpainter> inpainter;
    std::shared_ptr<Embedder> embedder_s;
    std::shared_ptr<Embedder> embedder_v;
    std::shared_ptr<Remover> remover;
    std::shared_ptr<DepthEstimator> depth;
    std::map<std::string, std::string> provenance;
};

/// Collapses near-duplicate point prompts: a point closer than 1% of the
/// image diagonal to an already kept point is dropped (input order wins).
std::vector<PointPrompt> dedupe_points(const std::vector<PointPrompt>& points,
                                       int width, int height);

}  // namespace jenga::backends
