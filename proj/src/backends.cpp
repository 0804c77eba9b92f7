#include "jenga/backends.hpp"

#include <cmath>

namespace jenga::backends {

std::vector<PointPrompt> dedupe_points(const std::vector<PointPrompt>& points,
                                       int width, int height) {
    const double radius =
        0.01 * std::sqrt(static_cast<double>(width) * width +
                         static_cast<double>(height) * height);
    const double r2 = radius * radius;
    std::vector<PointPrompt> kept;
    kept.reserve(points.size());
    for (const PointPrompt& p : points) {
        bool duplicate = false;
        for (const PointPrompt& q : kept) {
            const double dx = p.x - q.x;
            const double dy = p.y - q.y;
            if (dx * dx + dy * dy < r2) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) kept.push_back(p);
    }
    return kept;
}

}  // namespace jenga::backends
