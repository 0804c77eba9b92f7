#include "jenga/http_backend.hpp"

#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <mutex>

#include <httplib.h>
#include <json.hpp>

#include "jenga/png_io.hpp"
#include "jenga/util.hpp"

namespace jenga::backends {
namespace {

using nlohmann::json;

// Counting gate bounding concurrent requests across all capabilities.
class InFlightGate {
public:
    explicit InFlightGate(int limit) : available_(limit) {}

    void acquire() {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [&] { return available_ > 0; });
        --available_;
    }

    void release() {
        {
            const std::lock_guard lock(mutex_);
            ++available_;
        }
        cv_.notify_one();
    }

private:
    std::mutex mutex_;
    std::condition_variable cv_;
    int available_;
};

class GateGuard {
public:
    explicit GateGuard(InFlightGate& gate) : gate_(gate) { gate_.acquire(); }
    ~GateGuard() { gate_.release(); }
    GateGuard(const GateGuard&) = delete;
    GateGuard& operator=(const GateGuard&) = delete;

private:
    InFlightGate& gate_;
};

class Transport {
public:
    explicit Transport(HttpConfig config)
        : config_(std::move(config)),
          gate_(std::max(1, config_.max_in_flight)) {}

    json post(const std::string& capability, const json& body) {
        const auto it = config_.urls.find(capability);
        if (it == config_.urls.end() || it->second.empty()) {
            std::string env = capability;
            for (char& c : env) c = static_cast<char>(std::toupper(c));
            throw BackendUnavailableError("no backend url for " + capability +
                                          "; set JENGA_BACKEND_URL_" + env);
        }
        const std::string path = "/" + capability;
        const std::string payload = body.dump();

        std::filesystem::path cache_file;
        if (!config_.cache_dir.empty()) {
            char key[32];
            std::snprintf(key, sizeof key, "%016llx",
                          static_cast<unsigned long long>(fnv1a64(
                              payload.data(), payload.size(),
                              fnv1a64(path.data(), path.size()))));
            cache_file = config_.cache_dir / (capability + "-" + key + ".json");
            if (std::filesystem::exists(cache_file)) {
                return parse_response(read_text_file(cache_file), capability);
            }
        }

        const GateGuard guard(gate_);
        httplib::Client client(it->second);
        const auto seconds = static_cast<time_t>(config_.timeout_s);
        const auto micros = static_cast<time_t>(
            (config_.timeout_s - static_cast<double>(seconds)) * 1e6);
        client.set_connection_timeout(seconds, micros);
        client.set_read_timeout(seconds, micros);
        client.set_write_timeout(seconds, micros);

        const httplib::Result result =
            client.Post(path, payload, "application/json");
        if (!result) {
            throw BackendUnavailableError(capability + " request failed: " +
                                          httplib::to_string(result.error()));
        }
        if (result->status != 200) {
            throw BackendUnavailableError(capability + " returned status " +
                                          std::to_string(result->status));
        }
        if (!cache_file.empty()) {
            std::filesystem::create_directories(config_.cache_dir);
            write_file(cache_file, result->body);
        }
        return parse_response(result->body, capability);
    }

private:
    static json parse_response(const std::string& body,
                               const std::string& capability) {
        try {
            return json::parse(body);
        } catch (const json::exception& e) {
            throw MalformedResponseError(capability + " response is not JSON: " +
                                         e.what());
        }
    }

    HttpConfig config_;
    InFlightGate gate_;
};

std::string image_b64(const RasterImage& image) {
    return base64_encode(encode_png(image));
}

std::string mask_b64(const BinaryMask& mask) {
    return base64_encode(encode_png(mask));
}

RasterImage image_from_b64(const json& value, const std::string& capability) {
    if (!value.is_string()) {
        throw MalformedResponseError(capability + ": image field is not a string");
    }
    try {
        return decode_png_image(base64_decode(value.get<std::string>()));
    } catch (const Error& e) {
        throw MalformedResponseError(capability + ": bad image payload: " +
                                     e.what());
    }
}

class HttpPointer : public Pointer {
public:
    explicit HttpPointer(std::shared_ptr<Transport> transport)
        : transport_(std::move(transport)) {}

    std::vector<PointPrompt> propose_points(const RasterImage& image) override {
        const json resp =
            transport_->post("point", json{{"image", image_b64(image)}});
        if (!resp.contains("points") || !resp["points"].is_array()) {
            throw MalformedResponseError("point: missing 'points' list");
        }
        std::vector<PointPrompt> points;
        for (const json& jp : resp["points"]) {
            if (!jp.contains("x") || !jp.contains("y") ||
                !jp["x"].is_number() || !jp["y"].is_number()) {
                throw MalformedResponseError("point: entry without x/y");
            }
            PointPrompt p;
            p.x = jp["x"].get<int>();
            p.y = jp["y"].get<int>();
            if (jp.contains("confidence")) {
                p.confidence = jp["confidence"].get<double>();
            }
            if (!image.in_bounds(p.x, p.y)) {
                throw MalformedResponseError(
                    "point: out-of-bounds point " + std::to_string(p.x) + "," +
                    std::to_string(p.y));
            }
            points.push_back(p);
        }
        return points;
    }

private:
    std::shared_ptr<Transport> transport_;
};

class HttpSegmenter : public Segmenter {
public:
    explicit HttpSegmenter(std::shared_ptr<Transport> transport)
        : transport_(std::move(transport)) {}

    BinaryMask segment(const RasterImage& image, PointPrompt point) override {
        const json resp = transport_->post(
            "segment", json{{"image", image_b64(image)},
                            {"point", json{{"x", point.x}, {"y", point.y}}}});
        if (!resp.contains("mask") || !resp["mask"].is_string()) {
            throw MalformedResponseError("segment: missing 'mask'");
        }
        BinaryMask mask;
        try {
            mask = decode_png_mask(base64_decode(resp["mask"].get<std::string>()));
        } catch (const Error& e) {
            throw MalformedResponseError(std::string("segment: bad mask: ") +
                                         e.what());
        }
        if (mask.width != image.width || mask.height != image.height) {
            throw MalformedResponseError("segment: mask dimensions mismatch");
        }
        if (mask.empty()) {
            throw EmptyMaskError("segment backend found no object at " +
                                 std::to_string(point.x) + "," +
                                 std::to_string(point.y));
        }
        return mask;
    }

private:
    std::shared_ptr<Transport> transport_;
};

class HttpInpainter : public Inpainter {
public:
    explicit HttpInpainter(std::shared_ptr<Transport> transport)
        : transport_(std::move(transport)) {}

    std::vector<RasterImage> inpaint(const RasterImage& image,
                                     const BinaryMask& mask,
                                     const InpaintRequest& request) override {
        const json resp = transport_->post(
            "inpaint", json{{"image", image_b64(image)},
                            {"mask", mask_b64(mask)},
                            {"n", request.n},
                            {"seed", request.seed},
                            {"prompt", request.prompt},
                            {"negative_prompt", request.negative_prompt}});
        if (!resp.contains("images") || !resp["images"].is_array()) {
            throw MalformedResponseError("inpaint: missing 'images' list");
        }
        std::vector<RasterImage> samples;
        for (const json& jimg : resp["images"]) {
            RasterImage sample = image_from_b64(jimg, "inpaint");
            if (sample.width != image.width || sample.height != image.height) {
                throw MalformedResponseError("inpaint: sample dimensions mismatch");
            }
            samples.push_back(std::move(sample));
        }
        if (static_cast<int>(samples.size()) > request.n) {
            throw MalformedResponseError("inpaint: more samples than requested");
        }
        if (static_cast<int>(samples.size()) < request.n) {
            throw PartialBatchError(
                "inpaint returned " + std::to_string(samples.size()) + " of " +
                    std::to_string(request.n) + " samples",
                std::move(samples));
        }
        return samples;
    }

private:
    std::shared_ptr<Transport> transport_;
};

class HttpRemover : public Remover {
public:
    explicit HttpRemover(std::shared_ptr<Transport> transport)
        : transport_(std::move(transport)) {}

    RasterImage remove(const RasterImage& image,
                       const BinaryMask& mask) override {
        const json resp = transport_->post(
            "remove",
            json{{"image", image_b64(image)}, {"mask", mask_b64(mask)}});
        if (!resp.contains("image")) {
            throw MalformedResponseError("remove: missing 'image'");
        }
        RasterImage out = image_from_b64(resp["image"], "remove");
        if (out.width != image.width || out.height != image.height) {
            throw MalformedResponseError("remove: output dimensions mismatch");
        }
        return out;
    }

private:
    std::shared_ptr<Transport> transport_;
};

class HttpEmbedder : public Embedder {
public:
    HttpEmbedder(std::shared_ptr<Transport> transport,
                 scoring::EmbeddingSlot slot)
        : transport_(std::move(transport)), slot_(slot) {}

    scoring::EmbeddingVector embed(const scoring::SquareCrop& crop) override {
        const json resp = transport_->post(
            "embed", json{{"crop", image_b64(crop.pixels)},
                          {"slot", scoring::slot_name(slot_)}});
        if (!resp.contains("embedding") || !resp["embedding"].is_array()) {
            throw MalformedResponseError("embed: missing 'embedding' list");
        }
        std::vector<double> values;
        for (const json& v : resp["embedding"]) {
            if (!v.is_number()) {
                throw MalformedResponseError("embed: non-numeric component");
            }
            values.push_back(v.get<double>());
        }
        if (dimension_ == 0) {
            dimension_ = static_cast<int>(values.size());
        } else if (dimension_ != static_cast<int>(values.size())) {
            throw MalformedResponseError("embed: dimension changed between calls");
        }
        return scoring::EmbeddingVector::make(std::move(values), slot_);
    }

    int dimension() const override { return dimension_; }

private:
    std::shared_ptr<Transport> transport_;
    scoring::EmbeddingSlot slot_;
    int dimension_ = 0;
};

class HttpDepth : public DepthEstimator {
public:
    explicit HttpDepth(std::shared_ptr<Transport> transport)
        : transport_(std::move(transport)) {}

    DepthMap estimate(const RasterImage& image) override {
        const json resp =
            transport_->post("depth", json{{"image", image_b64(image)}});
        if (!resp.contains("width") || !resp.contains("height") ||
            !resp.contains("values") || !resp["values"].is_array()) {
            throw MalformedResponseError("depth: missing width/height/values");
        }
        DepthMap map;
        map.width = resp["width"].get<int>();
        map.height = resp["height"].get<int>();
        if (map.width != image.width || map.height != image.height) {
            throw MalformedResponseError("depth: dimensions mismatch");
        }
        for (const json& v : resp["values"]) {
            if (!v.is_number()) {
                throw MalformedResponseError("depth: non-numeric value");
            }
            map.values.push_back(v.get<float>());
        }
        if (map.values.size() !=
            static_cast<std::size_t>(map.width) * map.height) {
            throw MalformedResponseError("depth: value count mismatch");
        }
        return map;
    }

private:
    std::shared_ptr<Transport> transport_;
};

}  // namespace

HttpConfig http_config_from_env() {
    HttpConfig config;
    const struct {
        const char* capability;
        const char* var;
    } vars[] = {{"point", "JENGA_BACKEND_URL_POINT"},
                {"segment", "JENGA_BACKEND_URL_SEGMENT"},
                {"inpaint", "JENGA_BACKEND_URL_INPAINT"},
                {"remove", "JENGA_BACKEND_URL_REMOVE"},
                {"embed", "JENGA_BACKEND_URL_EMBED"},
                {"depth", "JENGA_BACKEND_URL_DEPTH"}};
    for (const auto& v : vars) {
        if (const char* url = std::getenv(v.var)) config.urls[v.capability] = url;
    }
    if (const char* timeout = std::getenv("JENGA_HTTP_TIMEOUT_S")) {
        config.timeout_s = std::atof(timeout);
    }
    if (const char* cache = std::getenv("JENGA_HTTP_CACHE_DIR")) {
        config.cache_dir = cache;
    }
    return config;
}

BackendSuite make_http_suite(const HttpConfig& config) {
    auto transport = std::make_shared<Transport>(config);
    BackendSuite suite;
    suite.pointer = std::make_shared<HttpPointer>(transport);
    suite.segmenter = std::make_shared<HttpSegmenter>(transport);
    suite.inpainter = std::make_shared<HttpInpainter>(transport);
    suite.embedder_s =
        std::make_shared<HttpEmbedder>(transport, scoring::EmbeddingSlot::S);
    suite.embedder_v =
        std::make_shared<HttpEmbedder>(transport, scoring::EmbeddingSlot::V);
    suite.remover = std::make_shared<HttpRemover>(transport);
    suite.depth = std::make_shared<HttpDepth>(transport);
    for (const auto& [capability, url] : config.urls) {
        suite.provenance[capability] = url;
    }
    return suite;
}

}  // namespace jenga::backends
