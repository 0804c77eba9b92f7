#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "jenga/backends.hpp"

namespace jenga::backends {

/// Connection settings for service-backed capabilities. `urls` maps
/// capability names (point, segment, inpaint, remove, embed, depth) to base
/// URLs; capabilities without a URL raise BackendUnavailableError on use.
struct HttpConfig {
    std::map<std::string, std::string> urls;
    double timeout_s = 120.0;
    int max_in_flight = 4;
    std::filesystem::path cache_dir;  // empty: no response cache
};

/// Reads JENGA_BACKEND_URL_<CAPABILITY> (POINT, SEGMENT, INPAINT, REMOVE,
/// EMBED, DEPTH), JENGA_HTTP_TIMEOUT_S, JENGA_HTTP_CACHE_DIR.
HttpConfig http_config_from_env();

/// Adapters speaking JSON over HTTP: POST /point {image}, /segment
/// {image, point}, /inpaint {image, mask, n, seed, prompt, negative_prompt},
/// /remove {image, mask}, /embed {crop, slot}, /depth {image}. Images and
/// masks travel as base64 PNG. Responses are validated (bounds, dimensions,
/// unit norm); violations raise MalformedResponseError.
BackendSuite make_http_suite(const HttpConfig& config);

}  // namespace jenga::backends
