#include "rseg/lbp.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace rseg {

std::vector<uint8_t> lbp_label(const GrayImage& img) {
    const int w = img.width(), h = img.height();
    if (w < 3 || h < 3)
        throw std::invalid_argument("lbp_label: image must be at least 3x3");

    // Clockwise from the top-left neighbor.
    static const int dx[8] = {-1, 0, 1, 1, 1, 0, -1, -1};
    static const int dy[8] = {-1, -1, -1, 0, 1, 1, 1, 0};

    std::vector<uint8_t> codes(static_cast<size_t>(w) * h, 0);
    for (int y = 1; y < h - 1; ++y) {
        for (int x = 1; x < w - 1; ++x) {
            const double c = img.at(x, y);
            unsigned code = 0;
            for (int k = 0; k < 8; ++k)
                if (img.at(x + dx[k], y + dy[k]) >= c) code |= 1u << k;
            codes[static_cast<size_t>(y) * w + x] = static_cast<uint8_t>(code);
        }
    }
    return codes;
}

namespace {

std::vector<double> regional_histograms(const GrayImage& img, const FeatureGrid& grid,
                                        bool normalize) {
    const int w = img.width(), h = img.height();
    const auto codes = lbp_label(img);
    std::vector<double> features(static_cast<size_t>(grid.rows) * grid.cols * grid.bins, 0.0);

    for (int ry = 0; ry < grid.rows; ++ry) {
        // Near-equal partition of the full raster.
        const int y0 = static_cast<int>(static_cast<long long>(ry) * h / grid.rows);
        const int y1 = static_cast<int>(static_cast<long long>(ry + 1) * h / grid.rows);
        for (int rx = 0; rx < grid.cols; ++rx) {
            const int x0 = static_cast<int>(static_cast<long long>(rx) * w / grid.cols);
            const int x1 = static_cast<int>(static_cast<long long>(rx + 1) * w / grid.cols);

            double* block = &features[(static_cast<size_t>(ry) * grid.cols + rx) * grid.bins];
            long count = 0;
            for (int y = std::max(y0, 1); y < std::min(y1, h - 1); ++y) {
                for (int x = std::max(x0, 1); x < std::min(x1, w - 1); ++x) {
                    const int bin = codes[static_cast<size_t>(y) * w + x] * grid.bins / 256;
                    block[bin] += 1.0;
                    ++count;
                }
            }
            if (count == 0)
                throw std::invalid_argument("extract_features: region (" +
                                            std::to_string(ry) + "," + std::to_string(rx) +
                                            ") has no interior pixels");
            if (normalize)
                for (int b = 0; b < grid.bins; ++b) block[b] /= count;
        }
    }
    return features;
}

}  // namespace

std::vector<double> extract_features(const GrayImage& img, const FeatureGrid& grid) {
    return regional_histograms(img, grid, true);
}

std::vector<double> extract_features_raw(const GrayImage& img, const FeatureGrid& grid) {
    return regional_histograms(img, grid, false);
}

}  // namespace rseg
