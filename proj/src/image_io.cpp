#include "rseg/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <vector>

namespace rseg {

namespace {

[[noreturn]] void parse_error(const std::string& path, std::streampos pos,
                              const std::string& what) {
    throw std::runtime_error(path + ": malformed image at byte offset " +
                             std::to_string(static_cast<long long>(pos)) + ": " + what);
}

// Skips PGM whitespace and '#' comments, then reads one nonnegative integer.
int read_pgm_int(std::istream& in, const std::string& path) {
    int c = in.peek();
    while (c != EOF && (std::isspace(c) || c == '#')) {
        if (c == '#') {
            std::string junk;
            std::getline(in, junk);
        } else {
            in.get();
        }
        c = in.peek();
    }
    int v;
    if (!(in >> v) || v < 0)
        parse_error(path, in.tellg(), "expected nonnegative integer");
    return v;
}

GrayImage load_pgm(std::ifstream& in, const std::string& path) {
    char magic[2];
    in.read(magic, 2);
    const bool ascii = magic[1] == '2';
    const int w = read_pgm_int(in, path);
    const int h = read_pgm_int(in, path);
    const int maxval = read_pgm_int(in, path);
    if (w <= 0 || h <= 0)
        parse_error(path, in.tellg(), "nonpositive dimensions");
    if (maxval <= 0 || maxval > 65535)
        parse_error(path, in.tellg(), "bad maxval");

    GrayImage img(w, h);
    const double scale = 255.0 / maxval;
    if (ascii) {
        for (size_t i = 0; i < img.size(); ++i) {
            const int v = read_pgm_int(in, path);
            if (v > maxval) parse_error(path, in.tellg(), "sample exceeds maxval");
            img.data()[i] = v * scale;
        }
    } else {
        in.get();  // single whitespace byte after maxval
        const int bytes = maxval > 255 ? 2 : 1;
        std::vector<unsigned char> raw(img.size() * bytes);
        in.read(reinterpret_cast<char*>(raw.data()), raw.size());
        if (static_cast<size_t>(in.gcount()) != raw.size())
            parse_error(path, in.tellg(), "truncated pixel data");
        for (size_t i = 0; i < img.size(); ++i) {
            const int v = bytes == 1 ? raw[i] : (raw[2 * i] << 8) | raw[2 * i + 1];
            img.data()[i] = v * scale;
        }
    }
    return img;
}

GrayImage load_png(const std::string& path) {
    std::unique_ptr<FILE, decltype(&std::fclose)> fp(std::fopen(path.c_str(), "rb"),
                                                     &std::fclose);
    if (!fp) throw std::runtime_error(path + ": cannot open");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error(path + ": PNG decode failed");
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    // Normalize everything to 8-bit gray.
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    const int color = png_get_color_type(png, info);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color & PNG_COLOR_MASK_COLOR) png_set_rgb_to_gray_fixed(png, 1, -1, -1);
    if (png_get_bit_depth(png, info) < 8) png_set_expand_gray_1_2_4_to_8(png);
    png_read_update_info(png, info);

    const int w = png_get_image_width(png, info);
    const int h = png_get_image_height(png, info);
    GrayImage img(w, h);
    std::vector<unsigned char> row(png_get_rowbytes(png, info));
    for (int y = 0; y < h; ++y) {
        png_read_row(png, row.data(), nullptr);
        for (int x = 0; x < w; ++x) img.at(x, y) = row[x];
    }
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void save_png(const GrayImage& img, const std::string& path) {
    std::unique_ptr<FILE, decltype(&std::fclose)> fp(std::fopen(path.c_str(), "wb"),
                                                     &std::fclose);
    if (!fp) throw std::runtime_error(path + ": cannot open for writing");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error(path + ": PNG encode failed");
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, img.width(), img.height(), 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<unsigned char> row(img.width());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            double v = img.at(x, y);
            v = v < 0 ? 0 : (v > 255 ? 255 : v);
            row[x] = static_cast<unsigned char>(v + 0.5);
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

void save_pgm(const GrayImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
    std::vector<unsigned char> row(img.width());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            double v = img.at(x, y);
            v = v < 0 ? 0 : (v > 255 ? 255 : v);
            row[x] = static_cast<unsigned char>(v + 0.5);
        }
        out.write(reinterpret_cast<const char*>(row.data()), row.size());
    }
    if (!out) throw std::runtime_error(path + ": write failed");
}

bool has_png_suffix(const std::string& path) {
    return path.size() >= 4 && path.compare(path.size() - 4, 4, ".png") == 0;
}

}  // namespace

GrayImage load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(path + ": cannot open");
    unsigned char m0 = in.get(), m1 = in.get();
    in.seekg(0);
    if (m0 == 'P' && (m1 == '2' || m1 == '5')) return load_pgm(in, path);
    if (m0 == 0x89 && m1 == 'P') return load_png(path);
    parse_error(path, 0, "unrecognized magic (need PGM P2/P5 or PNG)");
}

BinaryMask load_mask(const std::string& path) {
    const GrayImage img = load_image(path);
    BinaryMask mask(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            mask.set(x, y, img.at(x, y) > 0.0);
    return mask;
}

void save_image(const GrayImage& img, const std::string& path) {
    if (has_png_suffix(path))
        save_png(img, path);
    else
        save_pgm(img, path);
}

void save_mask(const BinaryMask& mask, const std::string& path) {
    GrayImage img(mask.width(), mask.height());
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x)
            img.at(x, y) = mask.at(x, y) ? 255.0 : 0.0;
    save_image(img, path);
}

}  // namespace rseg
