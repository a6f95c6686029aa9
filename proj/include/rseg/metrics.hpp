#pragma once

#include <vector>

#include "rseg/image.hpp"

namespace rseg {

/// Dice coefficient 2|a&b| / (|a|+|b|); 1 when both masks are empty.
double dice(const BinaryMask& a, const BinaryMask& b);

/// Rows = actual class, columns = predicted class.
class ConfusionMatrix {
public:
    ConfusionMatrix() = default;
    explicit ConfusionMatrix(int n_classes)
        : n_(n_classes), counts_(static_cast<size_t>(n_classes) * n_classes, 0) {}

    int n_classes() const { return n_; }
    long long& at(int actual, int predicted) {
        return counts_[static_cast<size_t>(actual) * n_ + predicted];
    }
    long long at(int actual, int predicted) const {
        return counts_[static_cast<size_t>(actual) * n_ + predicted];
    }
    void add(int actual, int predicted) { ++at(actual, predicted); }
    long long total() const;

private:
    int n_ = 0;
    std::vector<long long> counts_;
};

struct ClassificationMetrics {
    std::vector<double> precision;  // NaN for classes never predicted
    std::vector<double> recall;     // NaN for classes with no actual instances
    std::vector<double> f1;
    double accuracy = 0.0;
    double g_mean = 0.0;  // geometric mean of recalls over represented classes
};

ClassificationMetrics classification_metrics(const ConfusionMatrix& cm);

struct MatrixStats {
    std::vector<std::vector<double>> mean;
    std::vector<std::vector<double>> stddev;  // sample standard deviation
};

/// Elementwise mean and sample std over same-shaped matrices. Display
/// rounding is the caller's concern; values here are unrounded.
MatrixStats aggregate_confusions(const std::vector<ConfusionMatrix>& cms);

/// Per-image (accuracy, time) at each reference resolution.
struct ImpactRecord {
    double est_acc, orig_acc, min_acc, peak_acc, sel_acc;
    double est_time, orig_time, min_time, peak_time, sel_time;
};

struct ImpactRatios {
    // Accuracy: estimated over each reference.
    double acc_est_orig, acc_est_min, acc_est_peak, acc_est_sel;
    // Time: each reference over estimated (larger = estimated is faster).
    double time_orig_est, time_min_est, time_peak_est, time_sel_est;
};

/// Mean of per-image ratios, matching the Est/Orig, Est/Min, Est/Peak,
/// Est/Sel accuracy columns and the inverted time columns.
ImpactRatios impact_ratios(const std::vector<ImpactRecord>& records);

}  // namespace rseg
