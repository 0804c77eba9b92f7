#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace jenga {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    bool operator==(const Rgb&) const = default;
};

/// Parses "#RRGGBB"; throws IoError on malformed input.
Rgb rgb_from_hex(const std::string& hex);
std::string rgb_to_hex(Rgb c);

struct Rect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    int right() const { return x + w; }
    int bottom() const { return y + h; }
    long long area() const { return static_cast<long long>(w) * h; }
    bool contains(int px, int py) const {
        return px >= x && px < right() && py >= y && py < bottom();
    }

    bool operator==(const Rect&) const = default;
};

/// Intersection; empty rect (w=h=0) when disjoint.
Rect intersect(const Rect& a, const Rect& b);

/// Row-major interleaved RGB, 8 bits per channel. Row 0 is the image top.
struct RasterImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    RasterImage() = default;
    RasterImage(int w, int h, Rgb fill = Rgb{});

    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height;
    }
    Rgb pixel(int x, int y) const {
        const std::size_t i = 3 * (static_cast<std::size_t>(y) * width + x);
        return Rgb{data[i], data[i + 1], data[i + 2]};
    }
    void set_pixel(int x, int y, Rgb c) {
        const std::size_t i = 3 * (static_cast<std::size_t>(y) * width + x);
        data[i] = c.r;
        data[i + 1] = c.g;
        data[i + 2] = c.b;
    }
    void fill_rect(const Rect& r, Rgb c);

    bool operator==(const RasterImage&) const = default;
};

/// Per-pixel membership, 0/1, same layout as RasterImage rows.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    BinaryMask() = default;
    BinaryMask(int w, int h, bool value = false);

    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height;
    }
    bool at(int x, int y) const {
        return data[static_cast<std::size_t>(y) * width + x] != 0;
    }
    void set(int x, int y, bool value) {
        data[static_cast<std::size_t>(y) * width + x] = value ? 1 : 0;
    }

    std::size_t count() const;
    bool empty() const { return count() == 0; }

    /// Tight bounding box of true pixels; throws EmptyMaskError when empty.
    Rect bounding_box() const;

    bool operator==(const BinaryMask&) const = default;
};

BinaryMask mask_from_rect(int width, int height, const Rect& r);

/// Fraction of mask pixels of `a` and `b` in common over their union.
double mask_iou(const BinaryMask& a, const BinaryMask& b);

BinaryMask dilate_mask(const BinaryMask& mask, int radius);

/// Bilinear resample of `src_rect` (clamped sampling at the rect edge) into
/// an out_w x out_h image. Sampling uses pixel-center alignment.
RasterImage resize_bilinear(const RasterImage& src, const Rect& src_rect,
                            int out_w, int out_h);

/// Nearest-neighbor resample of a mask region, same alignment as above.
BinaryMask resize_nearest(const BinaryMask& src, const Rect& src_rect,
                          int out_w, int out_h);

}  // namespace jenga
