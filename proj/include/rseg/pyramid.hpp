#pragma once

#include <array>
#include <vector>

#include "rseg/image.hpp"

namespace rseg {

/// 5-tap Burt filter [1/4 - a/2, 1/4, a, 1/4, 1/4 - a/2]; sums to 1 for any a.
std::array<double, 5> burt_kernel(double a = 0.4);

/// Smooth with the separable 5x5 Burt filter and subsample at even pixels.
/// Output size is (ceil(w/2), ceil(h/2)); borders use mirror reflection
/// without edge repetition. Throws if width or height < 2.
GrayImage reduce(const GrayImage& img, double a = 0.4);

/// Ordered list of GrayImages; level 0 is the original, level r-1 the coarsest.
class Pyramid {
public:
    Pyramid() = default;
    explicit Pyramid(std::vector<GrayImage> levels) : levels_(std::move(levels)) {}

    int num_levels() const { return static_cast<int>(levels_.size()); }
    const GrayImage& level(int i) const { return levels_.at(i); }
    const std::vector<GrayImage>& levels() const { return levels_; }

private:
    std::vector<GrayImage> levels_;
};

/// Build an r-level pyramid by repeated reduce(). Throws if r < 1, r > 8, or
/// any level would drop below 2x2.
Pyramid build_pyramid(const GrayImage& img, int r, double a = 0.4);

/// Nearest-neighbor replication by a power-of-two factor, then crop/pad to
/// (target_w, target_h). Padding is background.
BinaryMask upsample_mask(const BinaryMask& mask, int factor, int target_w, int target_h);

}  // namespace rseg
