#include "rseg/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rseg {

double dice(const BinaryMask& a, const BinaryMask& b) {
    if (a.width() != b.width() || a.height() != b.height())
        throw std::invalid_argument("dice: dimension mismatch");
    size_t inter = 0, ca = 0, cb = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        const bool va = a.data()[i] != 0, vb = b.data()[i] != 0;
        ca += va;
        cb += vb;
        inter += va && vb;
    }
    if (ca + cb == 0) return 1.0;  // both empty: full agreement
    return 2.0 * inter / static_cast<double>(ca + cb);
}

long long ConfusionMatrix::total() const {
    long long t = 0;
    for (auto v : counts_) t += v;
    return t;
}

ClassificationMetrics classification_metrics(const ConfusionMatrix& cm) {
    const int n = cm.n_classes();
    if (n == 0 || cm.total() == 0)
        throw std::invalid_argument("classification_metrics: empty confusion matrix");
    const double nan = std::numeric_limits<double>::quiet_NaN();

    ClassificationMetrics m;
    m.precision.assign(n, nan);
    m.recall.assign(n, nan);
    m.f1.assign(n, nan);

    long long diag = 0;
    double log_recall_sum = 0.0;
    int represented = 0;
    bool zero_recall = false;
    for (int i = 0; i < n; ++i) {
        diag += cm.at(i, i);
        long long col = 0, row = 0;
        for (int j = 0; j < n; ++j) {
            col += cm.at(j, i);
            row += cm.at(i, j);
        }
        if (col > 0) m.precision[i] = static_cast<double>(cm.at(i, i)) / col;
        if (row > 0) {
            m.recall[i] = static_cast<double>(cm.at(i, i)) / row;
            ++represented;
            if (m.recall[i] == 0.0) zero_recall = true;
            else log_recall_sum += std::log(m.recall[i]);
        }
        const double p = col > 0 ? m.precision[i] : 0.0;
        const double r = row > 0 ? m.recall[i] : 0.0;
        if (row > 0 || col > 0)
            m.f1[i] = (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
    }
    m.accuracy = static_cast<double>(diag) / cm.total();
    m.g_mean = (zero_recall || represented == 0)
                   ? 0.0
                   : std::exp(log_recall_sum / represented);
    return m;
}

MatrixStats aggregate_confusions(const std::vector<ConfusionMatrix>& cms) {
    if (cms.empty())
        throw std::invalid_argument("aggregate_confusions: no matrices");
    const int n = cms[0].n_classes();
    for (const auto& cm : cms)
        if (cm.n_classes() != n)
            throw std::invalid_argument("aggregate_confusions: shape mismatch");

    MatrixStats s;
    s.mean.assign(n, std::vector<double>(n, 0.0));
    s.stddev.assign(n, std::vector<double>(n, 0.0));
    const double k = static_cast<double>(cms.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double sum = 0;
            for (const auto& cm : cms) sum += static_cast<double>(cm.at(i, j));
            s.mean[i][j] = sum / k;
            if (cms.size() > 1) {
                double ss = 0;
                for (const auto& cm : cms) {
                    const double d = cm.at(i, j) - s.mean[i][j];
                    ss += d * d;
                }
                s.stddev[i][j] = std::sqrt(ss / (k - 1));
            }
        }
    return s;
}

namespace {

// Mean of per-image ratios; images with a zero denominator are skipped.
double mean_ratio(const std::vector<ImpactRecord>& recs,
                  double ImpactRecord::*num, double ImpactRecord::*den) {
    double sum = 0;
    int n = 0;
    for (const auto& r : recs) {
        if (r.*den <= 0.0) continue;
        sum += (r.*num) / (r.*den);
        ++n;
    }
    if (n == 0)
        throw std::invalid_argument("impact_ratios: all denominators are zero");
    return sum / n;
}

}  // namespace

ImpactRatios impact_ratios(const std::vector<ImpactRecord>& records) {
    if (records.empty())
        throw std::invalid_argument("impact_ratios: no records");
    ImpactRatios r;
    r.acc_est_orig = mean_ratio(records, &ImpactRecord::est_acc, &ImpactRecord::orig_acc);
    r.acc_est_min = mean_ratio(records, &ImpactRecord::est_acc, &ImpactRecord::min_acc);
    r.acc_est_peak = mean_ratio(records, &ImpactRecord::est_acc, &ImpactRecord::peak_acc);
    r.acc_est_sel = mean_ratio(records, &ImpactRecord::est_acc, &ImpactRecord::sel_acc);
    r.time_orig_est = mean_ratio(records, &ImpactRecord::orig_time, &ImpactRecord::est_time);
    r.time_min_est = mean_ratio(records, &ImpactRecord::min_time, &ImpactRecord::est_time);
    r.time_peak_est = mean_ratio(records, &ImpactRecord::peak_time, &ImpactRecord::est_time);
    r.time_sel_est = mean_ratio(records, &ImpactRecord::sel_time, &ImpactRecord::est_time);
    return r;
}

}  // namespace rseg
