#include "rseg/tradeoff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rseg {

namespace {

// std::pow(0, 0) is 1 per IEC 60559, but make the convention explicit.
inline double pow01(double base, double exp) {
    if (exp == 0.0) return 1.0;
    return std::pow(base, exp);
}

}  // namespace

double omega(double accuracy, double time_norm, double alpha) {
    if (!(accuracy >= 0.0 && accuracy <= 1.0))
        throw std::domain_error("omega: accuracy must be in [0,1]");
    if (!(time_norm >= 0.0 && time_norm <= 1.0))
        throw std::domain_error("omega: normalized time must be in [0,1]");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::domain_error("omega: alpha must be in [0,1]");
    return pow01(accuracy, alpha) * pow01(1.0 - time_norm, 1.0 - alpha);
}

ResolutionLabel label_best_resolution(const std::vector<ResolutionRunRecord>& records,
                                      double alpha) {
    if (records.empty())
        throw std::invalid_argument("label_best_resolution: no records");
    double max_t = 0.0;
    for (const auto& r : records) {
        if (!(r.time > 0.0))
            throw std::invalid_argument("label_best_resolution: times must be positive");
        max_t = std::max(max_t, r.time);
    }

    ResolutionLabel label;
    label.omegas.resize(records.size());
    for (size_t i = 0; i < records.size(); ++i)
        label.omegas[i] = omega(records[i].accuracy, records[i].time / max_t, alpha);

    // Ties break toward the coarser (larger) level.
    label.best_level = 0;
    for (size_t i = 1; i < records.size(); ++i)
        if (label.omegas[i] >= label.omegas[label.best_level])
            label.best_level = static_cast<int>(i);
    return label;
}

}  // namespace rseg
