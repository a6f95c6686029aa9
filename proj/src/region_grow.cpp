#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <vector>

#include "rseg/metrics.hpp"
#include "rseg/segment.hpp"

namespace rseg {

namespace {

const int kDx[8] = {-1, 0, 1, 1, 1, 0, -1, -1};
const int kDy[8] = {-1, -1, -1, 0, 1, 1, 1, 0};

}  // namespace

BinaryMask RegionGrowSegmenter::segment(const GrayImage& img, const std::optional<Seed>& seed,
                                        CostCounter& cost) const {
    if (!seed)
        throw std::invalid_argument("regiongrow: a seed is required");
    const int w = img.width(), h = img.height();
    const int sx = std::clamp(seed->x, 0, w - 1);
    const int sy = std::clamp(seed->y, 0, h - 1);

    double mu = 0;
    int cnt = 0;
    for (int y = std::max(0, sy - 1); y <= std::min(h - 1, sy + 1); ++y)
        for (int x = std::max(0, sx - 1); x <= std::min(w - 1, sx + 1); ++x) {
            mu += img.at(x, y);
            ++cnt;
        }
    mu /= cnt;

    BinaryMask mask(w, h);
    std::deque<Seed> queue;
    mask.set(sx, sy, true);
    queue.push_back({sx, sy});
    uint64_t visited = 1;
    while (!queue.empty()) {
        const Seed p = queue.front();
        queue.pop_front();
        for (int k = 0; k < 8; ++k) {
            const int nx = p.x + kDx[k], ny = p.y + kDy[k];
            if (nx < 0 || nx >= w || ny < 0 || ny >= h || mask.at(nx, ny)) continue;
            ++visited;
            if (std::abs(img.at(nx, ny) - mu) <= cfg_.tau) {
                mask.set(nx, ny, true);
                queue.push_back({nx, ny});
            }
        }
    }
    cost.add(visited);
    return mask;
}

BinaryMask region_grow_refine(const GrayImage& img, const BinaryMask& mask, double tau,
                              int max_sweeps, CostCounter& cost) {
    if (img.width() != mask.width() || img.height() != mask.height())
        throw std::invalid_argument("region_grow_refine: image/mask dimension mismatch");
    if (mask.count() == 0)
        throw std::invalid_argument("region_grow_refine: mask is empty");
    const int w = mask.width(), h = mask.height();

    double mu = 0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (mask.at(x, y)) mu += img.at(x, y);
    mu /= static_cast<double>(mask.count());

    BinaryMask cur = mask;
    // Frontier: pixels whose state may change in the next sweep.
    std::vector<size_t> frontier;
    std::vector<unsigned char> in_frontier(cur.size(), 0);
    auto push = [&](int x, int y) {
        const size_t i = static_cast<size_t>(y) * w + x;
        if (!in_frontier[i]) {
            in_frontier[i] = 1;
            frontier.push_back(i);
        }
    };
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            bool near_edge = false;
            for (int k = 0; k < 8 && !near_edge; ++k) {
                const int nx = x + kDx[k], ny = y + kDy[k];
                if (nx >= 0 && nx < w && ny >= 0 && ny < h && cur.at(nx, ny) != cur.at(x, y))
                    near_edge = true;
            }
            if (near_edge) push(x, y);
        }

    uint64_t evaluated = 0;
    for (int sweep = 0; sweep < max_sweeps && !frontier.empty(); ++sweep) {
        std::vector<size_t> to_flip;
        for (const size_t i : frontier) {
            ++evaluated;
            const int x = static_cast<int>(i % w), y = static_cast<int>(i / w);
            const bool obj = cur.at(x, y);
            bool adjacent = false;  // touches the opposite phase
            for (int k = 0; k < 8 && !adjacent; ++k) {
                const int nx = x + kDx[k], ny = y + kDy[k];
                if (nx >= 0 && nx < w && ny >= 0 && ny < h && cur.at(nx, ny) != obj)
                    adjacent = true;
            }
            if (!adjacent) continue;
            const bool close = std::abs(img.at(x, y) - mu) <= tau;
            if (!obj && close) to_flip.push_back(i);        // grow
            else if (obj && !close) to_flip.push_back(i);   // peel
        }

        std::fill(in_frontier.begin(), in_frontier.end(), 0);
        frontier.clear();
        if (to_flip.empty()) break;
        for (const size_t i : to_flip) {
            const int x = static_cast<int>(i % w), y = static_cast<int>(i / w);
            cur.set(x, y, !cur.at(x, y));
        }
        for (const size_t i : to_flip) {
            const int x = static_cast<int>(i % w), y = static_cast<int>(i / w);
            push(x, y);
            for (int k = 0; k < 8; ++k) {
                const int nx = x + kDx[k], ny = y + kDy[k];
                if (nx >= 0 && nx < w && ny >= 0 && ny < h) push(nx, ny);
            }
        }
    }
    cost.add(std::max<uint64_t>(evaluated, 1));
    return cur;
}

BinaryMask select_component_at(const BinaryMask& mask, const Seed& seed) {
    const int w = mask.width(), h = mask.height();
    if (seed.x < 0 || seed.x >= w || seed.y < 0 || seed.y >= h)
        throw std::invalid_argument("select_component_at: seed outside raster");
    if (mask.count() == 0)
        throw std::invalid_argument("select_component_at: mask is empty");

    // 8-connected component labels.
    std::vector<int> label(mask.size(), -1);
    int n_labels = 0;
    std::deque<size_t> queue;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const size_t i = static_cast<size_t>(y) * w + x;
            if (!mask.at(x, y) || label[i] >= 0) continue;
            label[i] = n_labels;
            queue.push_back(i);
            while (!queue.empty()) {
                const size_t j = queue.front();
                queue.pop_front();
                const int jx = static_cast<int>(j % w), jy = static_cast<int>(j / w);
                for (int k = 0; k < 8; ++k) {
                    const int nx = jx + kDx[k], ny = jy + kDy[k];
                    if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                    const size_t nj = static_cast<size_t>(ny) * w + nx;
                    if (mask.at(nx, ny) && label[nj] < 0) {
                        label[nj] = n_labels;
                        queue.push_back(nj);
                    }
                }
            }
            ++n_labels;
        }

    int chosen = label[static_cast<size_t>(seed.y) * w + seed.x];
    if (chosen < 0) {
        // Background seed: nearest object pixel decides.
        double best = std::numeric_limits<double>::max();
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                if (!mask.at(x, y)) continue;
                const double dx = x - seed.x, dy = y - seed.y;
                const double d2 = dx * dx + dy * dy;
                if (d2 < best) {
                    best = d2;
                    chosen = label[static_cast<size_t>(y) * w + x];
                }
            }
    }

    BinaryMask out(w, h);
    for (size_t i = 0; i < mask.size(); ++i)
        if (label[i] == chosen)
            out.set(static_cast<int>(i % w), static_cast<int>(i / w), true);
    return out;
}

std::pair<BinaryMask, double> run_coarse_to_fine(const Pyramid& pyr, int level,
                                                 const Segmenter& segmenter,
                                                 const std::optional<Seed>& click,
                                                 const SegmentAtLevelConfig& cfg) {
    if (level < 0 || level >= pyr.num_levels())
        throw std::invalid_argument("run_coarse_to_fine: invalid level");
    const GrayImage& base = pyr.level(0);

    RunTimer timer(cfg.timing);

    std::optional<Seed> scaled_click = click;
    if (scaled_click && level > 0) {
        scaled_click->x >>= level;
        scaled_click->y >>= level;
    }
    BinaryMask s = segmenter.segment(pyr.level(level), scaled_click, timer.cost());

    BinaryMask final_s;
    if (level > 0) {
        BinaryMask up = upsample_mask(s, 1 << level, base.width(), base.height());
        timer.cost().add(up.size());
        if (up.count() == 0)
            final_s = std::move(up);  // nothing to refine
        else
            final_s = region_grow_refine(base, up, cfg.refine_tau, 4 << level, timer.cost());
    } else {
        final_s = std::move(s);
    }

    if (click && final_s.count() > 0) {
        final_s = select_component_at(final_s, *click);
        timer.cost().add(final_s.size());
    }

    return {std::move(final_s), timer.stop()};
}

ResolutionRunRecord segment_at_level(const Pyramid& pyr, int level, const Segmenter& segmenter,
                                     const BinaryMask& gold, const std::optional<Seed>& click,
                                     const SegmentAtLevelConfig& cfg) {
    const GrayImage& base = pyr.level(0);
    if (gold.width() != base.width() || gold.height() != base.height())
        throw std::invalid_argument("segment_at_level: gold must have level-0 dimensions");

    auto [mask, time] = run_coarse_to_fine(pyr, level, segmenter, click, cfg);
    ResolutionRunRecord rec;
    rec.level = level;
    rec.time = time;
    rec.accuracy = dice(mask, gold);
    rec.mask = std::move(mask);
    return rec;
}

std::unique_ptr<Segmenter> make_segmenter(const std::string& name, const ChanVeseConfig& cv_cfg,
                                          const RegionGrowConfig& rg_cfg) {
    if (name == "chanvese") return std::make_unique<ChanVeseSegmenter>(cv_cfg);
    if (name == "regiongrow") return std::make_unique<RegionGrowSegmenter>(rg_cfg);
    throw std::invalid_argument("unknown segmenter: " + name);
}

}  // namespace rseg
