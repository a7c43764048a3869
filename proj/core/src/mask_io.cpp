#include "routebench/mask_io.hpp"

#include <cstdio>
#include <cstring>
#include <memory>

#include <png.h>

namespace routebench::mask {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

constexpr char kRawMagic[4] = {'N', 'S', 'R', 'M'};

void check_class_range(const SemanticMask& m, const std::string& path) {
    for (std::uint8_t c : m.cells)
        if (c >= kb::kNumClasses)
            throw MaskFormatError(path + ": pixel value " + std::to_string(c) +
                                  " is not a land-cover class id");
}

SemanticMask load_png(const std::string& path, std::FILE* fp) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw MaskFormatError(path + ": libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw MaskFormatError(path + ": libpng init failed");
    }

    SemanticMask mask;
    std::vector<png_bytep> rows;
    bool bad_format = false;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw MaskFormatError(path + ": not a decodable PNG");
    }

    png_init_io(png, fp);
    png_read_info(png, info);
    const png_uint_32 width = png_get_image_width(png, info);
    const png_uint_32 height = png_get_image_height(png, info);
    const int color_type = png_get_color_type(png, info);
    const int bit_depth = png_get_bit_depth(png, info);

    if (color_type != PNG_COLOR_TYPE_GRAY || width == 0 || height == 0) {
        bad_format = true;
    } else {
        if (bit_depth == 16) png_set_strip_16(png);
        if (bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
        png_read_update_info(png, info);

        mask.width = static_cast<int>(width);
        mask.height = static_cast<int>(height);
        mask.cells.resize(static_cast<std::size_t>(width) * height);
        rows.resize(height);
        for (png_uint_32 r = 0; r < height; ++r)
            rows[r] = mask.cells.data() + static_cast<std::size_t>(r) * width;
        png_read_image(png, rows.data());
        png_read_end(png, nullptr);
    }
    png_destroy_read_struct(&png, &info, nullptr);

    if (bad_format)
        throw MaskFormatError(path + ": expected a nonempty 8-bit single-channel PNG");
    check_class_range(mask, path);
    return mask;
}

SemanticMask load_nsrm(const std::string& path, std::FILE* fp) {
    char magic[4];
    std::uint8_t dims[8];
    if (std::fread(magic, 1, 4, fp) != 4 || std::memcmp(magic, kRawMagic, 4) != 0 ||
        std::fread(dims, 1, 8, fp) != 8)
        throw MaskFormatError(path + ": truncated raw mask header");
    auto u32le = [](const std::uint8_t* b) {
        return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
               (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
    };
    const std::uint32_t width = u32le(dims);
    const std::uint32_t height = u32le(dims + 4);
    if (width == 0 || height == 0 || static_cast<std::uint64_t>(width) * height > (1ull << 30))
        throw MaskFormatError(path + ": bad raw mask dimensions");

    SemanticMask mask;
    mask.width = static_cast<int>(width);
    mask.height = static_cast<int>(height);
    mask.cells.resize(static_cast<std::size_t>(width) * height);
    if (std::fread(mask.cells.data(), 1, mask.cells.size(), fp) != mask.cells.size())
        throw MaskFormatError(path + ": truncated raw mask payload");
    check_class_range(mask, path);
    return mask;
}

}  // namespace

SemanticMask load_mask(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw MaskFormatError(path + ": cannot open file");

    std::uint8_t header[8] = {};
    const std::size_t got = std::fread(header, 1, sizeof header, fp.get());
    std::rewind(fp.get());
    if (got >= 8 && png_sig_cmp(header, 0, 8) == 0) return load_png(path, fp.get());
    if (got >= 4 && std::memcmp(header, kRawMagic, 4) == 0) return load_nsrm(path, fp.get());
    throw MaskFormatError(path + ": unrecognized mask container (need PNG or NSRM)");
}

namespace {

void write_png_impl(const std::string& path, int width, int height, int color_type,
                    const std::uint8_t* data, std::size_t row_bytes) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw Error(path + ": cannot open file for writing");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw Error(path + ": libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw Error(path + ": libpng init failed");
    }

    std::vector<png_bytep> rows(static_cast<std::size_t>(height));
    for (int r = 0; r < height; ++r)
        rows[r] = const_cast<png_bytep>(data + static_cast<std::size_t>(r) * row_bytes);

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error(path + ": PNG write failed");
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
                 color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace

void save_mask_png(const SemanticMask& mask, const std::string& path) {
    write_png_impl(path, mask.width, mask.height, PNG_COLOR_TYPE_GRAY, mask.cells.data(),
                   static_cast<std::size_t>(mask.width));
}

void save_mask_nsrm(const SemanticMask& mask, const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw Error(path + ": cannot open file for writing");
    std::uint8_t header[12];
    std::memcpy(header, kRawMagic, 4);
    auto put_u32le = [](std::uint8_t* b, std::uint32_t v) {
        b[0] = static_cast<std::uint8_t>(v);
        b[1] = static_cast<std::uint8_t>(v >> 8);
        b[2] = static_cast<std::uint8_t>(v >> 16);
        b[3] = static_cast<std::uint8_t>(v >> 24);
    };
    put_u32le(header + 4, static_cast<std::uint32_t>(mask.width));
    put_u32le(header + 8, static_cast<std::uint32_t>(mask.height));
    if (std::fwrite(header, 1, sizeof header, fp.get()) != sizeof header ||
        std::fwrite(mask.cells.data(), 1, mask.cells.size(), fp.get()) != mask.cells.size())
        throw Error(path + ": short write");
}

void save_rgb_png(const RgbImage& image, const std::string& path) {
    write_png_impl(path, image.width, image.height, PNG_COLOR_TYPE_RGB, image.pixels.data(),
                   static_cast<std::size_t>(image.width) * 3);
}

RgbImage load_rgb_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw MaskFormatError(path + ": cannot open file");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw MaskFormatError(path + ": libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw MaskFormatError(path + ": libpng init failed");
    }

    RgbImage image;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw MaskFormatError(path + ": not a decodable PNG");
    }

    png_init_io(png, fp.get());
    png_read_info(png, info);
    png_set_expand(png);
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    png_set_gray_to_rgb(png);
    png_read_update_info(png, info);

    image.width = static_cast<int>(png_get_image_width(png, info));
    image.height = static_cast<int>(png_get_image_height(png, info));
    image.pixels.resize(static_cast<std::size_t>(image.width) * image.height * 3);
    rows.resize(static_cast<std::size_t>(image.height));
    for (int r = 0; r < image.height; ++r)
        rows[r] = image.pixels.data() + static_cast<std::size_t>(r) * image.width * 3;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return image;
}

}  // namespace routebench::mask
