#pragma once

#include <cstdint>
#include <vector>

#include "rseg/image.hpp"

namespace rseg {

/// 8-bit LBP codes for the interior pixels of img. The returned raster has
/// the source dimensions; the 1-pixel border frame is left 0 and must be
/// excluded by callers. Bit k (weight 2^k) is set when the k-th neighbor,
/// starting at the top-left and proceeding clockwise, is >= the center.
std::vector<uint8_t> lbp_label(const GrayImage& img);

struct FeatureGrid {
    int rows = 4;
    int cols = 4;
    int bins = 10;
};

/// Regional LBP histograms: the image is split into rows x cols near-equal
/// rectangles; per region, interior LBP codes are histogrammed into `bins`
/// uniform-width bins over [0, 256) and divided by the region's interior
/// pixel count. Blocks are concatenated region-major (row by row).
std::vector<double> extract_features(const GrayImage& img, const FeatureGrid& grid);

/// Same, without the per-region normalization; block sums equal the region
/// interior pixel counts.
std::vector<double> extract_features_raw(const GrayImage& img, const FeatureGrid& grid);

}  // namespace rseg
