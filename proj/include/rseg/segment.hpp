#pragma once

#include <memory>
#include <optional>
#include <string>

#include "rseg/cost.hpp"
#include "rseg/image.hpp"
#include "rseg/pyramid.hpp"

namespace rseg {

struct Seed {
    int x = 0;
    int y = 0;
};

/// Segmentation backend. Implementations must return a mask with the input
/// image's dimensions and be stateless given their config.
class Segmenter {
public:
    virtual ~Segmenter() = default;
    virtual BinaryMask segment(const GrayImage& img, const std::optional<Seed>& seed,
                               CostCounter& cost) const = 0;
    virtual std::string name() const = 0;
};

struct ChanVeseConfig {
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    double nu = 0.001 * 255.0 * 255.0;  // curvature weight
    double dt = 0.5;
    double epsilon = 1.0;       // Heaviside/delta smoothing
    int eta = 5;                // sign-flip threshold for the stopping rule
    int eta_streak = 5;         // consecutive quiet iterations required
    int max_iters = 1000;
    int min_iters = 0;          // forces a fixed iteration floor (tests)
    bool pick_brighter_phase = true;
};

/// Two-phase piecewise-constant active contour. The level set starts as a
/// tiling of circles (pitch = min dimension / 4, radius = 40% of pitch) and
/// stops when fewer than eta pixels change sign for eta_streak consecutive
/// iterations, or at max_iters.
class ChanVeseSegmenter : public Segmenter {
public:
    explicit ChanVeseSegmenter(ChanVeseConfig cfg = {}) : cfg_(cfg) {}
    BinaryMask segment(const GrayImage& img, const std::optional<Seed>& seed,
                       CostCounter& cost) const override;
    std::string name() const override { return "chanvese"; }

    /// Iterations used by the most informative probe; exposed for tests via
    /// the out-parameter overload.
    BinaryMask segment_count(const GrayImage& img, CostCounter& cost, int& iters_out) const;

private:
    ChanVeseConfig cfg_;
};

struct RegionGrowConfig {
    double tau = 25.0;  // intensity distance threshold
};

/// Plain seeded region growing: mean intensity over the 3x3 window at the
/// seed, then 8-connected growth while |I - mu| <= tau.
class RegionGrowSegmenter : public Segmenter {
public:
    explicit RegionGrowSegmenter(RegionGrowConfig cfg = {}) : cfg_(cfg) {}
    BinaryMask segment(const GrayImage& img, const std::optional<Seed>& seed,
                       CostCounter& cost) const override;
    std::string name() const override { return "regiongrow"; }

private:
    RegionGrowConfig cfg_;
};

std::unique_ptr<Segmenter> make_segmenter(const std::string& name,
                                          const ChanVeseConfig& cv_cfg,
                                          const RegionGrowConfig& rg_cfg);

/// Boundary fine-tuning: with mu = mean object intensity under the input
/// mask, each sweep adds background pixels 8-adjacent to the object with
/// |I - mu| <= tau and removes object boundary pixels with |I - mu| > tau,
/// until a fixed point or max_sweeps. Throws on an empty mask.
BinaryMask region_grow_refine(const GrayImage& img, const BinaryMask& mask, double tau,
                              int max_sweeps, CostCounter& cost);

/// The 8-connected component of mask containing seed, or, when the seed
/// falls on background, the component nearest to it (Euclidean).
BinaryMask select_component_at(const BinaryMask& mask, const Seed& seed);

struct ResolutionRunRecord {
    int level = 0;
    double accuracy = 0.0;  // Dice against the gold standard
    double time = 0.0;      // seconds or cost units
    BinaryMask mask;        // at level-0 dimensions
};

struct SegmentAtLevelConfig {
    TimingMode timing = TimingMode::DeterministicCost;
    double refine_tau = 60.0;
};

/// The timed coarse-to-fine pipeline: segment at pyr.level(level); for
/// level > 0, upsample to level 0 and refine; select the clicked component
/// when a click is given. Returns the level-0 mask and the elapsed span.
std::pair<BinaryMask, double> run_coarse_to_fine(const Pyramid& pyr, int level,
                                                 const Segmenter& segmenter,
                                                 const std::optional<Seed>& click,
                                                 const SegmentAtLevelConfig& cfg);

/// run_coarse_to_fine plus Dice against the gold standard (scored outside
/// the timed span).
ResolutionRunRecord segment_at_level(const Pyramid& pyr, int level,
                                     const Segmenter& segmenter, const BinaryMask& gold,
                                     const std::optional<Seed>& click,
                                     const SegmentAtLevelConfig& cfg);

}  // namespace rseg
