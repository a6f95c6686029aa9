#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "rseg/image_io.hpp"
#include "rseg/rng.hpp"

using namespace rseg;

namespace {

std::string tmp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("P2 PGM of zeros loads as an all-zero image") {
    const std::string path = tmp_path("rseg_zeros.pgm");
    {
        std::ofstream out(path);
        out << "P2\n# comment\n3 3\n255\n0 0 0\n0 0 0\n0 0 0\n";
    }
    const GrayImage img = load_image(path);
    CHECK(img.width() == 3);
    CHECK(img.height() == 3);
    for (const double v : img.data()) CHECK(v == 0.0);
}

TEST_CASE("PGM round trip is bit-exact for integer intensities") {
    Rng rng(3);
    auto g = rng.stream("io");
    GrayImage img(17, 9);
    for (auto& v : img.data()) v = static_cast<double>(uniform_index(g, 256));
    const std::string path = tmp_path("rseg_roundtrip.pgm");
    save_image(img, path);
    const GrayImage back = load_image(path);
    REQUIRE(back.width() == img.width());
    REQUIRE(back.height() == img.height());
    CHECK(back.data() == img.data());
}

TEST_CASE("PNG round trip and mask thresholding") {
    Rng rng(4);
    auto g = rng.stream("io-png");
    GrayImage img(12, 8);
    for (auto& v : img.data()) v = static_cast<double>(uniform_index(g, 256));
    const std::string path = tmp_path("rseg_roundtrip.png");
    save_image(img, path);
    const GrayImage back = load_image(path);
    CHECK(back.data() == img.data());

    BinaryMask mask(12, 8);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 12; ++x) mask.set(x, y, (x + y) % 3 == 0);
    const std::string mpath = tmp_path("rseg_mask.png");
    save_mask(mask, mpath);
    CHECK(load_mask(mpath) == mask);
}

TEST_CASE("malformed files report errors") {
    const std::string path = tmp_path("rseg_bad.pgm");
    {
        std::ofstream out(path);
        out << "P2\n3 3\n255\n0 0\n";  // truncated
    }
    CHECK_THROWS_WITH_AS(load_image(path), doctest::Contains("byte offset"),
                         std::runtime_error);
    CHECK_THROWS_AS(load_image(tmp_path("rseg_does_not_exist.pgm")), std::runtime_error);
    {
        std::ofstream out(path);
        out << "GIF89a nonsense";
    }
    CHECK_THROWS_AS(load_image(path), std::runtime_error);
}
