#include <doctest.h>

#include <cmath>

#include "rseg/metrics.hpp"

using namespace rseg;

TEST_CASE("dice hand values and the empty-empty convention") {
    BinaryMask a(4, 4), b(4, 4);
    CHECK(dice(a, b) == doctest::Approx(1.0));

    a.set(0, 0, true);
    a.set(1, 0, true);
    b.set(1, 0, true);
    b.set(2, 0, true);
    // |a| = |b| = 2, overlap 1 -> 2*1/4.
    CHECK(dice(a, b) == doctest::Approx(0.5).epsilon(1e-15));

    CHECK(dice(a, a) == doctest::Approx(1.0));
    BinaryMask empty(4, 4);
    CHECK(dice(a, empty) == doctest::Approx(0.0));
    CHECK_THROWS(dice(a, BinaryMask(3, 4)));
}

TEST_CASE("binary confusion [[8,2],[1,9]] hand-checked") {
    ConfusionMatrix cm(2);
    cm.at(0, 0) = 8;
    cm.at(0, 1) = 2;
    cm.at(1, 0) = 1;
    cm.at(1, 1) = 9;
    const auto m = classification_metrics(cm);
    CHECK(m.accuracy == doctest::Approx(17.0 / 20.0).epsilon(1e-15));
    CHECK(m.precision[0] == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
    CHECK(m.precision[1] == doctest::Approx(9.0 / 11.0).epsilon(1e-15));
    CHECK(m.recall[0] == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(m.recall[1] == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(m.f1[0] == doctest::Approx(2.0 * (8.0 / 9.0) * 0.8 / (8.0 / 9.0 + 0.8)).epsilon(1e-15));
    CHECK(m.f1[1] ==
          doctest::Approx(2.0 * (9.0 / 11.0) * 0.9 / (9.0 / 11.0 + 0.9)).epsilon(1e-15));
    CHECK(m.g_mean == doctest::Approx(std::sqrt(0.72)).epsilon(1e-15));
}

TEST_CASE("zero recall zeroes the g-mean") {
    ConfusionMatrix cm(3);
    cm.at(0, 0) = 5;
    cm.at(1, 1) = 5;
    cm.at(2, 0) = 4;  // class 2 never predicted correctly
    const auto m = classification_metrics(cm);
    CHECK(m.recall[2] == doctest::Approx(0.0));
    CHECK(m.g_mean == doctest::Approx(0.0));
}

TEST_CASE("unrepresented classes report NaN, represented ones are unaffected") {
    ConfusionMatrix cm(3);
    cm.at(0, 0) = 3;
    cm.at(1, 0) = 1;
    cm.at(1, 1) = 2;
    // Class 2: no actuals, no predictions.
    const auto m = classification_metrics(cm);
    CHECK(std::isnan(m.recall[2]));
    CHECK(std::isnan(m.precision[2]));
    CHECK(m.recall[0] == doctest::Approx(1.0));
    CHECK(m.recall[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    // G-mean over represented classes only.
    CHECK(m.g_mean == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("aggregate_confusions mean and sample std") {
    ConfusionMatrix a(2), b(2), c(2);
    a.at(0, 0) = 1;
    b.at(0, 0) = 2;
    c.at(0, 0) = 6;
    a.at(1, 1) = 4;
    b.at(1, 1) = 4;
    c.at(1, 1) = 4;
    const MatrixStats s = aggregate_confusions({a, b, c});
    CHECK(s.mean[0][0] == doctest::Approx(3.0));
    // Sample std of {1, 2, 6}: sqrt(((−2)²+(−1)²+3²)/2) = sqrt(7).
    CHECK(s.stddev[0][0] == doctest::Approx(std::sqrt(7.0)).epsilon(1e-12));
    CHECK(s.mean[1][1] == doctest::Approx(4.0));
    CHECK(s.stddev[1][1] == doctest::Approx(0.0));
    CHECK(s.mean[0][1] == doctest::Approx(0.0));
}

TEST_CASE("impact ratios average per-image ratios and skip zero denominators") {
    ImpactRecord r1{};
    r1.est_acc = 0.9;
    r1.orig_acc = 0.9;
    r1.min_acc = 0.45;
    r1.peak_acc = 0.9;
    r1.sel_acc = 0.9;
    r1.est_time = 10.0;
    r1.orig_time = 40.0;
    r1.min_time = 5.0;
    r1.peak_time = 20.0;
    r1.sel_time = 10.0;

    ImpactRecord r2 = r1;
    r2.est_acc = 0.8;
    r2.orig_acc = 1.0;
    r2.min_acc = 0.0;  // zero denominator: excluded from acc_est_min only
    r2.est_time = 20.0;
    r2.orig_time = 60.0;

    const ImpactRatios out = impact_ratios({r1, r2});
    CHECK(out.acc_est_orig == doctest::Approx((1.0 + 0.8) / 2.0).epsilon(1e-12));
    CHECK(out.acc_est_min == doctest::Approx(2.0).epsilon(1e-12));  // only r1 counts
    CHECK(out.time_orig_est == doctest::Approx((4.0 + 3.0) / 2.0).epsilon(1e-12));
    CHECK(out.time_min_est == doctest::Approx((0.5 + 0.25) / 2.0).epsilon(1e-12));
    // sel references are inherited from r1: acc 0.9 / time 10 in both records.
    CHECK(out.acc_est_sel == doctest::Approx((1.0 + 0.8 / 0.9) / 2.0).epsilon(1e-12));
    CHECK(out.time_sel_est == doctest::Approx((1.0 + 0.5) / 2.0).epsilon(1e-12));
}
