#include "jenga/raster.hpp"

#include <cmath>
#include <cstdio>

#include "jenga/errors.hpp"

namespace jenga {

Rgb rgb_from_hex(const std::string& hex) {
    if (hex.size() != 7 || hex[0] != '#') {
        throw IoError("bad color literal: " + hex);
    }
    unsigned v = 0;
    for (std::size_t i = 1; i < hex.size(); ++i) {
        const char c = hex[i];
        unsigned d = 0;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (c >= 'a' && c <= 'f') d = 10 + (c - 'a');
        else if (c >= 'A' && c <= 'F') d = 10 + (c - 'A');
        else throw IoError("bad color literal: " + hex);
        v = v * 16 + d;
    }
    return Rgb{static_cast<std::uint8_t>((v >> 16) & 0xff),
               static_cast<std::uint8_t>((v >> 8) & 0xff),
               static_cast<std::uint8_t>(v & 0xff)};
}

std::string rgb_to_hex(Rgb c) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

Rect intersect(const Rect& a, const Rect& b) {
    const int x0 = std::max(a.x, b.x);
    const int y0 = std::max(a.y, b.y);
    const int x1 = std::min(a.right(), b.right());
    const int y1 = std::min(a.bottom(), b.bottom());
    if (x1 <= x0 || y1 <= y0) return Rect{};
    return Rect{x0, y0, x1 - x0, y1 - y0};
}

RasterImage::RasterImage(int w, int h, Rgb fill)
    : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3) {
    for (std::size_t i = 0; i < data.size(); i += 3) {
        data[i] = fill.r;
        data[i + 1] = fill.g;
        data[i + 2] = fill.b;
    }
}

void RasterImage::fill_rect(const Rect& r, Rgb c) {
    const Rect clipped = intersect(r, Rect{0, 0, width, height});
    for (int y = clipped.y; y < clipped.bottom(); ++y) {
        for (int x = clipped.x; x < clipped.right(); ++x) {
            set_pixel(x, y, c);
        }
    }
}

BinaryMask::BinaryMask(int w, int h, bool value)
    : width(w), height(h),
      data(static_cast<std::size_t>(w) * h, value ? 1 : 0) {}

std::size_t BinaryMask::count() const {
    std::size_t n = 0;
    for (std::uint8_t v : data) n += (v != 0);
    return n;
}

Rect BinaryMask::bounding_box() const {
    int x0 = width, y0 = height, x1 = -1, y1 = -1;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            if (!at(x, y)) continue;
            x0 = std::min(x0, x);
            y0 = std::min(y0, y);
            x1 = std::max(x1, x);
            y1 = std::max(y1, y);
        }
    }
    if (x1 < 0) throw EmptyMaskError("bounding_box of empty mask");
    return Rect{x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

BinaryMask mask_from_rect(int width, int height, const Rect& r) {
    BinaryMask m(width, height);
    const Rect clipped = intersect(r, Rect{0, 0, width, height});
    for (int y = clipped.y; y < clipped.bottom(); ++y) {
        for (int x = clipped.x; x < clipped.right(); ++x) {
            m.set(x, y, true);
        }
    }
    return m;
}

double mask_iou(const BinaryMask& a, const BinaryMask& b) {
    if (a.width != b.width || a.height != b.height) {
        throw DimensionMismatchError("mask_iou: shape mismatch");
    }
    std::size_t inter = 0, uni = 0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const bool pa = a.data[i] != 0;
        const bool pb = b.data[i] != 0;
        inter += (pa && pb);
        uni += (pa || pb);
    }
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

BinaryMask dilate_mask(const BinaryMask& mask, int radius) {
    if (radius <= 0) return mask;
    BinaryMask out(mask.width, mask.height);
    const int r2 = radius * radius;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            bool hit = false;
            for (int dy = -radius; dy <= radius && !hit; ++dy) {
                const int yy = y + dy;
                if (yy < 0 || yy >= mask.height) continue;
                for (int dx = -radius; dx <= radius; ++dx) {
                    const int xx = x + dx;
                    if (xx < 0 || xx >= mask.width) continue;
                    if (dx * dx + dy * dy > r2) continue;
                    if (mask.at(xx, yy)) {
                        hit = true;
                        break;
                    }
                }
            }
            out.set(x, y, hit);
        }
    }
    return out;
}

namespace {

// Pixel-center mapping from output to source-rect coordinates.
inline double src_coord(int dst, int dst_size, int src_origin, int src_size) {
    const double scale = static_cast<double>(src_size) / dst_size;
    return src_origin + (dst + 0.5) * scale - 0.5;
}

}  // namespace

RasterImage resize_bilinear(const RasterImage& src, const Rect& src_rect,
                            int out_w, int out_h) {
    RasterImage out(out_w, out_h);
    const int rx0 = src_rect.x;
    const int ry0 = src_rect.y;
    const int rx1 = src_rect.right() - 1;
    const int ry1 = src_rect.bottom() - 1;
    for (int y = 0; y < out_h; ++y) {
        const double sy = src_coord(y, out_h, src_rect.y, src_rect.h);
        const int y0 = std::clamp(static_cast<int>(std::floor(sy)), ry0, ry1);
        const int y1 = std::min(y0 + 1, ry1);
        const double fy = std::clamp(sy - y0, 0.0, 1.0);
        for (int x = 0; x < out_w; ++x) {
            const double sx = src_coord(x, out_w, src_rect.x, src_rect.w);
            const int x0 = std::clamp(static_cast<int>(std::floor(sx)), rx0, rx1);
            const int x1 = std::min(x0 + 1, rx1);
            const double fx = std::clamp(sx - x0, 0.0, 1.0);

            const Rgb p00 = src.pixel(x0, y0);
            const Rgb p10 = src.pixel(x1, y0);
            const Rgb p01 = src.pixel(x0, y1);
            const Rgb p11 = src.pixel(x1, y1);
            const double w00 = (1.0 - fx) * (1.0 - fy);
            const double w10 = fx * (1.0 - fy);
            const double w01 = (1.0 - fx) * fy;
            const double w11 = fx * fy;

            auto mix = [&](std::uint8_t a, std::uint8_t b, std::uint8_t c,
                           std::uint8_t d) {
                const double v = w00 * a + w10 * b + w01 * c + w11 * d;
                return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
            };
            out.set_pixel(x, y,
                          Rgb{mix(p00.r, p10.r, p01.r, p11.r),
                              mix(p00.g, p10.g, p01.g, p11.g),
                              mix(p00.b, p10.b, p01.b, p11.b)});
        }
    }
    return out;
}

BinaryMask resize_nearest(const BinaryMask& src, const Rect& src_rect,
                          int out_w, int out_h) {
    BinaryMask out(out_w, out_h);
    const int rx0 = src_rect.x;
    const int ry0 = src_rect.y;
    const int rx1 = src_rect.right() - 1;
    const int ry1 = src_rect.bottom() - 1;
    for (int y = 0; y < out_h; ++y) {
        const double sy = src_coord(y, out_h, src_rect.y, src_rect.h);
        const int ny = std::clamp(static_cast<int>(std::lround(sy)), ry0, ry1);
        for (int x = 0; x < out_w; ++x) {
            const double sx = src_coord(x, out_w, src_rect.x, src_rect.w);
            const int nx = std::clamp(static_cast<int>(std::lround(sx)), rx0, rx1);
            out.set(x, y, src.at(nx, ny));
        }
    }
    return out;
}

}  // namespace jenga
