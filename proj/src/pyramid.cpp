#include "rseg/pyramid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rseg {

std::array<double, 5> burt_kernel(double a) {
    return {0.25 - a / 2.0, 0.25, a, 0.25, 0.25 - a / 2.0};
}

namespace {

// Mirror reflection without edge repetition: -1 -> 1, n -> n-2.
inline int reflect(int i, int n) {
    while (i < 0 || i >= n) {
        if (i < 0) i = -i;
        if (i >= n) i = 2 * n - 2 - i;
    }
    return i;
}

}  // namespace

GrayImage reduce(const GrayImage& img, double a) {
    const int w = img.width(), h = img.height();
    if (w < 2 || h < 2)
        throw std::invalid_argument("reduce: image must be at least 2x2, got " +
                                    std::to_string(w) + "x" + std::to_string(h));
    const auto k = burt_kernel(a);
    const int ow = (w + 1) / 2, oh = (h + 1) / 2;

    // Horizontal pass, evaluated only at even columns.
    std::vector<double> tmp(static_cast<size_t>(ow) * h);
    for (int y = 0; y < h; ++y) {
        for (int ox = 0; ox < ow; ++ox) {
            const int cx = 2 * ox;
            double s = 0.0;
            for (int t = -2; t <= 2; ++t)
                s += k[t + 2] * img.at(reflect(cx + t, w), y);
            tmp[static_cast<size_t>(y) * ow + ox] = s;
        }
    }

    GrayImage out(ow, oh);
    for (int oy = 0; oy < oh; ++oy) {
        const int cy = 2 * oy;
        for (int ox = 0; ox < ow; ++ox) {
            double s = 0.0;
            for (int t = -2; t <= 2; ++t)
                s += k[t + 2] * tmp[static_cast<size_t>(reflect(cy + t, h)) * ow + ox];
            out.at(ox, oy) = s;
        }
    }
    return out;
}

Pyramid build_pyramid(const GrayImage& img, int r, double a) {
    if (r < 1 || r > 8)
        throw std::invalid_argument("build_pyramid: r must be in [1, 8]");
    std::vector<GrayImage> levels;
    levels.reserve(r);
    levels.push_back(img);
    for (int i = 1; i < r; ++i) {
        const GrayImage& prev = levels.back();
        if ((prev.width() + 1) / 2 < 2 || (prev.height() + 1) / 2 < 2)
            throw std::invalid_argument(
                "build_pyramid: level " + std::to_string(i) + " would drop below 2x2");
        levels.push_back(reduce(prev, a));
    }
    return Pyramid(std::move(levels));
}

BinaryMask upsample_mask(const BinaryMask& mask, int factor, int target_w, int target_h) {
    if (factor < 1 || (factor & (factor - 1)) != 0)
        throw std::invalid_argument("upsample_mask: factor must be a power of two");
    BinaryMask out(target_w, target_h);
    for (int y = 0; y < target_h; ++y) {
        const int sy = y / factor;
        if (sy >= mask.height()) continue;
        for (int x = 0; x < target_w; ++x) {
            const int sx = x / factor;
            if (sx >= mask.width()) continue;
            out.set(x, y, mask.at(sx, sy));
        }
    }
    return out;
}

}  // namespace rseg
