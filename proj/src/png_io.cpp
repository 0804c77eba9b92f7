#include "jenga/png_io.hpp"

#include <png.h>

#include <cstring>
#include <fstream>

#include "jenga/errors.hpp"

namespace jenga {

namespace {

struct ByteSink {
    std::vector<std::uint8_t>* out;
};

void sink_write(png_structp png, png_bytep data, png_size_t len) {
    auto* sink = static_cast<ByteSink*>(png_get_io_ptr(png));
    sink->out->insert(sink->out->end(), data, data + len);
}

void sink_flush(png_structp) {}

struct ByteSource {
    const std::uint8_t* data;
    std::size_t size;
    std::size_t pos;
};

void source_read(png_structp png, png_bytep out, png_size_t len) {
    auto* src = static_cast<ByteSource*>(png_get_io_ptr(png));
    if (src->pos + len > src->size) {
        png_error(png, "truncated PNG stream");
    }
    std::memcpy(out, src->data + src->pos, len);
    src->pos += len;
}

std::vector<std::uint8_t> encode_gray_or_rgb(const std::uint8_t* pixels,
                                             int width, int height,
                                             bool rgb) {
    std::vector<std::uint8_t> out;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                              nullptr, nullptr);
    if (!png) throw IoError("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("png_create_info_struct failed");
    }
    std::vector<png_bytep> rows(static_cast<std::size_t>(height));
    const std::size_t stride = static_cast<std::size_t>(width) * (rgb ? 3 : 1);
    for (int y = 0; y < height; ++y) {
        rows[y] = const_cast<png_bytep>(pixels + y * stride);
    }
    ByteSink sink{&out};
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("png encode failed");
    }
    png_set_write_fn(png, &sink, sink_write, sink_flush);
    png_set_IHDR(png, info, width, height, 8,
                 rgb ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

RasterImage decode_rgb(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
        throw IoError("not a PNG stream");
    }
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                             nullptr, nullptr);
    if (!png) throw IoError("png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("png_create_info_struct failed");
    }
    RasterImage img;
    std::vector<png_bytep> rows;
    ByteSource src{bytes.data(), bytes.size(), 0};
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("png decode failed");
    }
    png_set_read_fn(png, &src, source_read);
    png_read_info(png, info);

    png_set_expand(png);
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    png_set_gray_to_rgb(png);
    png_read_update_info(png, info);

    img.width = static_cast<int>(png_get_image_width(png, info));
    img.height = static_cast<int>(png_get_image_height(png, info));
    img.data.resize(static_cast<std::size_t>(img.width) * img.height * 3);
    rows.resize(static_cast<std::size_t>(img.height));
    for (int y = 0; y < img.height; ++y) {
        rows[y] = img.data.data() + static_cast<std::size_t>(y) * img.width * 3;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

}  // namespace

std::vector<std::uint8_t> encode_png(const RasterImage& image) {
    return encode_gray_or_rgb(image.data.data(), image.width, image.height, true);
}

std::vector<std::uint8_t> encode_png(const BinaryMask& mask) {
    std::vector<std::uint8_t> gray(mask.data.size());
    for (std::size_t i = 0; i < mask.data.size(); ++i) {
        gray[i] = mask.data[i] ? 255 : 0;
    }
    return encode_gray_or_rgb(gray.data(), mask.width, mask.height, false);
}

RasterImage decode_png_image(const std::vector<std::uint8_t>& bytes) {
    return decode_rgb(bytes);
}

BinaryMask decode_png_mask(const std::vector<std::uint8_t>& bytes) {
    const RasterImage img = decode_rgb(bytes);
    BinaryMask mask(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const Rgb p = img.pixel(x, y);
            mask.set(x, y, p.r != 0 || p.g != 0 || p.b != 0);
        }
    }
    return mask;
}

void write_file(const std::filesystem::path& path,
                const std::vector<std::uint8_t>& bytes) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for write: " + path.string());
    f.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
    if (!f) throw IoError("write failed: " + path.string());
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for write: " + path.string());
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) throw IoError("write failed: " + path.string());
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary | std::ios::ate);
    if (!f) throw IoError("cannot open: " + path.string());
    const std::streamsize size = f.tellg();
    f.seekg(0);
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
    f.read(reinterpret_cast<char*>(bytes.data()), size);
    if (!f) throw IoError("read failed: " + path.string());
    return bytes;
}

std::string read_text_file(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    return std::string(bytes.begin(), bytes.end());
}

}  // namespace jenga
