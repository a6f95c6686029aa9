#pragma once

#include <vector>

#include "rseg/segment.hpp"

namespace rseg {

/// Accuracy/time trade-off: A^alpha * (1 - T_norm)^(1 - alpha), with 0^0 = 1.
/// All three inputs must lie in [0, 1].
double omega(double accuracy, double time_norm, double alpha);

struct ResolutionLabel {
    int best_level = 0;
    std::vector<double> omegas;
};

/// Normalizes times by their maximum, computes omega per level, and picks the
/// argmax; ties go to the coarser (larger) level.
ResolutionLabel label_best_resolution(const std::vector<ResolutionRunRecord>& records,
                                      double alpha);

}  // namespace rseg
