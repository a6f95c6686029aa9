#include <doctest.h>

#include <random>

#include "rseg/pyramid.hpp"
#include "rseg/rng.hpp"

using namespace rseg;

namespace {

// Independent oracle: direct (non-separable) 2-D convolution with the outer
// product of the 5-tap kernel, same reflection rule, sampled at even pixels.
int reflect_oracle(int i, int n) {
    while (i < 0 || i >= n) {
        if (i < 0) i = -i;
        if (i >= n) i = 2 * n - 2 - i;
    }
    return i;
}

GrayImage reduce_oracle(const GrayImage& img, double a) {
    const auto k = burt_kernel(a);
    const int w = img.width(), h = img.height();
    GrayImage out((w + 1) / 2, (h + 1) / 2);
    for (int oy = 0; oy < out.height(); ++oy)
        for (int ox = 0; ox < out.width(); ++ox) {
            double s = 0;
            for (int dy = -2; dy <= 2; ++dy)
                for (int dx = -2; dx <= 2; ++dx)
                    s += k[dy + 2] * k[dx + 2] *
                         img.at(reflect_oracle(2 * ox + dx, w), reflect_oracle(2 * oy + dy, h));
            out.at(ox, oy) = s;
        }
    return out;
}

GrayImage random_image(int w, int h, std::mt19937_64& g) {
    GrayImage img(w, h);
    for (auto& v : img.data()) v = 255.0 * uniform01(g);
    return img;
}

}  // namespace

TEST_CASE("burt kernel with a=0.4 and normalization") {
    const auto k = burt_kernel(0.4);
    CHECK(k[0] == doctest::Approx(0.05).epsilon(1e-15));
    CHECK(k[1] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(k[2] == doctest::Approx(0.40).epsilon(1e-15));
    CHECK(k[3] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(k[4] == doctest::Approx(0.05).epsilon(1e-15));
    for (double a : {0.3, 0.4, 0.5, 0.6}) {
        const auto kk = burt_kernel(a);
        CHECK(kk[0] + kk[1] + kk[2] + kk[3] + kk[4] == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("reduce keeps constant images constant") {
    const GrayImage img(8, 8, 128.0);
    const GrayImage out = reduce(img);
    CHECK(out.width() == 4);
    CHECK(out.height() == 4);
    for (const double v : out.data()) CHECK(v == doctest::Approx(128.0).epsilon(1e-12));
}

TEST_CASE("reduce matches the brute-force 2-D convolution oracle") {
    Rng rng(7);
    auto g = rng.stream("pyramid-test");
    SUBCASE("x ramp") {
        GrayImage img(16, 16);
        for (int y = 0; y < 16; ++y)
            for (int x = 0; x < 16; ++x) img.at(x, y) = 16.0 * x;
        const GrayImage got = reduce(img);
        const GrayImage want = reduce_oracle(img, 0.4);
        for (size_t i = 0; i < got.size(); ++i)
            CHECK(got.data()[i] == doctest::Approx(want.data()[i]).epsilon(1e-12));
    }
    SUBCASE("random images, including odd sizes") {
        for (int trial = 0; trial < 10; ++trial) {
            const int w = 5 + static_cast<int>(uniform_index(g, 20));
            const int h = 5 + static_cast<int>(uniform_index(g, 20));
            const GrayImage img = random_image(w, h, g);
            const GrayImage got = reduce(img);
            const GrayImage want = reduce_oracle(img, 0.4);
            REQUIRE(got.width() == want.width());
            REQUIRE(got.height() == want.height());
            for (size_t i = 0; i < got.size(); ++i)
                CHECK(got.data()[i] == doctest::Approx(want.data()[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("reduce rejects tiny images") {
    CHECK_THROWS(reduce(GrayImage(1, 8)));
}

TEST_CASE("pyramid level sizes follow ceil-halving") {
    SUBCASE("r=1 is just the original") {
        const GrayImage img(10, 10, 1.0);
        const Pyramid p = build_pyramid(img, 1);
        CHECK(p.num_levels() == 1);
        CHECK(p.level(0).data() == img.data());
    }
    SUBCASE("512 square, r=6") {
        const Pyramid p = build_pyramid(GrayImage(512, 512, 7.0), 6);
        const int want[6] = {512, 256, 128, 64, 32, 16};
        for (int i = 0; i < 6; ++i) {
            CHECK(p.level(i).width() == want[i]);
            CHECK(p.level(i).height() == want[i]);
        }
    }
    SUBCASE("100x60, r=3") {
        const Pyramid p = build_pyramid(GrayImage(100, 60, 0.0), 3);
        CHECK(p.level(1).width() == 50);
        CHECK(p.level(1).height() == 30);
        CHECK(p.level(2).width() == 25);
        CHECK(p.level(2).height() == 15);
    }
    SUBCASE("too many levels") {
        CHECK_THROWS(build_pyramid(GrayImage(8, 8, 0.0), 4));
        CHECK_THROWS(build_pyramid(GrayImage(16, 16, 0.0), 9));
    }
}

TEST_CASE("upsample_mask replication and cropping") {
    SUBCASE("factor 1 is identity") {
        BinaryMask m(3, 2);
        m.set(1, 0, true);
        CHECK(upsample_mask(m, 1, 3, 2) == m);
    }
    SUBCASE("2x2 checkerboard, factor 2") {
        BinaryMask m(2, 2);
        m.set(0, 0, true);
        m.set(1, 1, true);
        const BinaryMask up = upsample_mask(m, 2, 4, 4);
        for (int y = 0; y < 4; ++y)
            for (int x = 0; x < 4; ++x)
                CHECK(up.at(x, y) == m.at(x / 2, y / 2));
    }
    SUBCASE("level-3 mask of a 100x60 pyramid lands exactly on 100x60") {
        const Pyramid p = build_pyramid(GrayImage(100, 60, 0.0), 4);
        BinaryMask coarse(p.level(3).width(), p.level(3).height(), true);
        CHECK(coarse.width() == 13);
        CHECK(coarse.height() == 8);
        const BinaryMask up = upsample_mask(coarse, 8, 100, 60);
        CHECK(up.width() == 100);
        CHECK(up.height() == 60);
        CHECK(up.count() == 100 * 60);
    }
    SUBCASE("non-power-of-two factor rejected") {
        CHECK_THROWS(upsample_mask(BinaryMask(2, 2), 3, 6, 6));
    }
}

TEST_CASE("upsample then majority-downsample recovers block-constant masks") {
    Rng rng(11);
    auto g = rng.stream("updown");
    for (int trial = 0; trial < 5; ++trial) {
        BinaryMask m(6, 4);
        for (int y = 0; y < 4; ++y)
            for (int x = 0; x < 6; ++x) m.set(x, y, uniform01(g) < 0.5);
        const BinaryMask up = upsample_mask(m, 4, 24, 16);
        BinaryMask down(6, 4);
        for (int y = 0; y < 4; ++y)
            for (int x = 0; x < 6; ++x) {
                int votes = 0;
                for (int dy = 0; dy < 4; ++dy)
                    for (int dx = 0; dx < 4; ++dx)
                        votes += up.at(4 * x + dx, 4 * y + dy);
                down.set(x, y, votes > 8);
            }
        CHECK(down == m);
    }
}
