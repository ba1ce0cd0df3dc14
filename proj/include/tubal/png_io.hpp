#pragma once

// 8-bit PNG ingestion and emission on top of libpng. Grayscale maps to a
// single frontal slice, RGB to three; palette and 16-bit inputs are
// normalized to 8-bit, alpha is dropped. Targets including this header must
// link against libpng.

#include <png.h>

#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <vector>

#include "tubal/errors.hpp"
#include "tubal/tensor3.hpp"

namespace tubal {

struct ImageU8 {
    int height = 0;
    int width = 0;
    int channels = 0;  // 1 (gray) or 3 (RGB)
    std::vector<std::uint8_t> pixels;  // row-major, interleaved channels
};

namespace detail {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace detail

inline ImageU8 read_png(const std::filesystem::path& path) {
    detail::FilePtr fp(std::fopen(path.string().c_str(), "rb"));
    if (!fp) throw IoError("cannot open image: " + path.string());

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("png: allocation failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("png: allocation failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("unreadable or unsupported image: " + path.string());
    }

    png_init_io(png, fp.get());
    png_read_info(png, info);

    png_set_palette_to_rgb(png);
    png_set_expand_gray_1_2_4_to_8(png);
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    const png_uint_32 width = png_get_image_width(png, info);
    const png_uint_32 height = png_get_image_height(png, info);
    const png_byte color = png_get_color_type(png, info);
    const png_byte depth = png_get_bit_depth(png, info);
    const int channels = png_get_channels(png, info);

    if (depth != 8 || (color != PNG_COLOR_TYPE_GRAY && color != PNG_COLOR_TYPE_RGB) ||
        (channels != 1 && channels != 3)) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("unsupported image format: " + path.string());
    }

    ImageU8 img;
    img.height = static_cast<int>(height);
    img.width = static_cast<int>(width);
    img.channels = channels;
    img.pixels.resize(static_cast<std::size_t>(height) * width * channels);

    std::vector<png_bytep> rows(height);
    const std::size_t row_bytes = static_cast<std::size_t>(width) * channels;
    for (png_uint_32 r = 0; r < height; ++r) rows[r] = img.pixels.data() + r * row_bytes;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

inline void write_png(const std::filesystem::path& path, const ImageU8& img) {
    if (img.channels != 1 && img.channels != 3)
        throw InvalidParam("write_png: channels must be 1 or 3");
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        detail::FilePtr fp(std::fopen(tmp.string().c_str(), "wb"));
        if (!fp) throw IoError("cannot open for writing: " + tmp.string());

        png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (!png) throw IoError("png: allocation failed");
        png_infop info = png_create_info_struct(png);
        if (!info) {
            png_destroy_write_struct(&png, nullptr);
            throw IoError("png: allocation failed");
        }
        if (setjmp(png_jmpbuf(png))) {
            png_destroy_write_struct(&png, &info);
            std::filesystem::remove(tmp);
            throw IoError("png write failed: " + path.string());
        }
        png_init_io(png, fp.get());
        png_set_IHDR(png, info, img.width, img.height, 8,
                     img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                     PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
        png_write_info(png, info);
        const std::size_t row_bytes = static_cast<std::size_t>(img.width) * img.channels;
        for (int r = 0; r < img.height; ++r)
            png_write_row(png, const_cast<png_bytep>(img.pixels.data() + r * row_bytes));
        png_write_end(png, nullptr);
        png_destroy_write_struct(&png, &info);
    }
    std::filesystem::rename(tmp, path);
}

// Channels become frontal slices; values scale to [0, 1].
inline Tensor3 image_to_tensor(const ImageU8& img) {
    Tensor3 t(img.height, img.width, img.channels);
    for (int i = 0; i < img.height; ++i)
        for (int j = 0; j < img.width; ++j)
            for (int c = 0; c < img.channels; ++c)
                t(i, j, c) =
                    img.pixels[(static_cast<std::size_t>(i) * img.width + j) * img.channels + c] /
                    255.0;
    return t;
}

// Clamps to [0, 1] and quantizes to 8 bits.
inline ImageU8 tensor_to_image(const Tensor3& t) {
    if (t.n3() != 1 && t.n3() != 3)
        throw InvalidParam("tensor_to_image: need 1 or 3 frontal slices");
    ImageU8 img;
    img.height = t.n1();
    img.width = t.n2();
    img.channels = t.n3();
    img.pixels.resize(t.size());
    for (int i = 0; i < img.height; ++i)
        for (int j = 0; j < img.width; ++j)
            for (int c = 0; c < img.channels; ++c) {
                double v = t(i, j, c);
                v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
                img.pixels[(static_cast<std::size_t>(i) * img.width + j) * img.channels + c] =
                    static_cast<std::uint8_t>(v * 255.0 + 0.5);
            }
    return img;
}

}  // namespace tubal
