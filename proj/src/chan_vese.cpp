#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "rseg/segment.hpp"

namespace rseg {

namespace {

constexpr double kPhiClamp = 20.0;

inline int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

}  // namespace

BinaryMask ChanVeseSegmenter::segment_count(const GrayImage& img, CostCounter& cost,
                                            int& iters_out) const {
    const int w = img.width(), h = img.height();
    if (w < 8 || h < 8)
        throw std::invalid_argument("chan_vese: image must be at least 8x8");
    const size_t n = img.size();

    // Level set initialized as a tiling of circles.
    const double pitch = std::max(4.0, std::min(w, h) / 4.0);
    const double radius = 0.4 * pitch;
    std::vector<double> phi(n);
    for (int y = 0; y < h; ++y) {
        const double cy = (std::floor(y / pitch) + 0.5) * pitch;
        for (int x = 0; x < w; ++x) {
            const double cx = (std::floor(x / pitch) + 0.5) * pitch;
            const double d = std::hypot(x - cx, y - cy);
            phi[static_cast<size_t>(y) * w + x] = std::clamp(radius - d, -kPhiClamp, kPhiClamp);
        }
    }

    const double eps = cfg_.epsilon;
    // Curvature enters through the edge coefficients of the standard
    // semi-implicit scheme: half-point gradient magnitudes with a small
    // regularizer, solved in place (Gauss-Seidel), which keeps the explicit
    // time step stable even on coarse pyramid levels.
    constexpr double kGradReg = 1e-8;
    auto at_phi = [&](int x, int y) -> double {
        return phi[static_cast<size_t>(clampi(y, 0, h - 1)) * w + clampi(x, 0, w - 1)];
    };
    auto coef_right = [&](int x, int y) {
        const double dxp = at_phi(x + 1, y) - at_phi(x, y);
        const double dyc = (at_phi(x, y + 1) - at_phi(x, y - 1)) / 2.0;
        return cfg_.nu / std::sqrt(kGradReg + dxp * dxp + dyc * dyc);
    };
    auto coef_down = [&](int x, int y) {
        const double dxc = (at_phi(x + 1, y) - at_phi(x - 1, y)) / 2.0;
        const double dyp = at_phi(x, y + 1) - at_phi(x, y);
        return cfg_.nu / std::sqrt(kGradReg + dxc * dxc + dyp * dyp);
    };

    int quiet_streak = 0;
    int iter = 0;
    for (; iter < cfg_.max_iters; ++iter) {
        // Region means of the two phases.
        double sum1 = 0, sum2 = 0;
        size_t n1 = 0, n2 = 0;
        for (size_t i = 0; i < n; ++i) {
            if (phi[i] > 0) {
                sum1 += img.data()[i];
                ++n1;
            } else {
                sum2 += img.data()[i];
                ++n2;
            }
        }
        const double c1 = n1 ? sum1 / n1 : 0.0;
        const double c2 = n2 ? sum2 / n2 : 0.0;

        int flips = 0;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const size_t i = static_cast<size_t>(y) * w + x;
                const double p = phi[i];
                const double a = coef_right(x, y);
                const double al = coef_right(x - 1, y);
                const double b = coef_down(x, y);
                const double bu = coef_down(x, y - 1);

                const double v = img.data()[i];
                const double data = -cfg_.lambda1 * (v - c1) * (v - c1) +
                                    cfg_.lambda2 * (v - c2) * (v - c2);
                const double delta = eps / (std::numbers::pi * (eps * eps + p * p));
                const double num = p + cfg_.dt * delta *
                                           (a * at_phi(x + 1, y) + al * at_phi(x - 1, y) +
                                            b * at_phi(x, y + 1) + bu * at_phi(x, y - 1) + data);
                double q = num / (1.0 + cfg_.dt * delta * (a + al + b + bu));
                q = std::clamp(q, -kPhiClamp, kPhiClamp);
                if ((q > 0) != (p > 0)) ++flips;
                phi[i] = q;
            }
        }
        cost.add(n);

        if (flips < cfg_.eta && iter + 1 >= cfg_.min_iters) {
            if (++quiet_streak >= cfg_.eta_streak) {
                ++iter;
                break;
            }
        } else {
            quiet_streak = 0;
        }
    }
    iters_out = iter;

    // Decide which phase is the object.
    bool object_positive = true;
    if (cfg_.pick_brighter_phase) {
        double sum1 = 0, sum2 = 0;
        size_t n1 = 0, n2 = 0;
        for (size_t i = 0; i < n; ++i) {
            if (phi[i] > 0) {
                sum1 += img.data()[i];
                ++n1;
            } else {
                sum2 += img.data()[i];
                ++n2;
            }
        }
        if (n1 && n2) object_positive = sum1 / n1 >= sum2 / n2;
    }

    BinaryMask mask(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            mask.set(x, y, (phi[static_cast<size_t>(y) * w + x] > 0) == object_positive);
    return mask;
}

BinaryMask ChanVeseSegmenter::segment(const GrayImage& img, const std::optional<Seed>&,
                                      CostCounter& cost) const {
    int iters = 0;
    return segment_count(img, cost, iters);
}

}  // namespace rseg
