#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "rseg/corpus.hpp"
#include "rseg/image_io.hpp"

using namespace rseg;

namespace {

std::string tmp_dir(const std::string& name) {
    const auto p = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(p);
    return p.string();
}

}  // namespace

TEST_CASE("generated corpus is complete and loadable") {
    GeneratorConfig cfg;
    cfg.n = 8;
    cfg.size = 96;
    cfg.seed = 123;
    const std::string root = tmp_dir("rseg_corpus_a");
    const Corpus made = generate_synthetic_corpus(cfg, root);
    REQUIRE(made.entries.size() == 8);

    const Corpus loaded = load_corpus(root);
    REQUIRE(loaded.entries.size() == 8);
    for (size_t i = 0; i < 8; ++i) {
        CHECK(loaded.entries[i].image_path == made.entries[i].image_path);
        const GrayImage img = load_image(loaded.image_file(i));
        const BinaryMask gold = load_mask(loaded.mask_file(i));
        CHECK(img.width() == 96);
        CHECK(img.height() == 96);
        CHECK(gold.count() > 0);
        REQUIRE(loaded.entries[i].click.has_value());
        CHECK(gold.in_bounds(loaded.entries[i].click->x, loaded.entries[i].click->y));
    }
}

TEST_CASE("generation is reproducible for a fixed seed and sensitive to it") {
    GeneratorConfig cfg;
    cfg.n = 4;
    cfg.size = 64;
    cfg.seed = 9;
    const Corpus a = generate_synthetic_corpus(cfg, tmp_dir("rseg_corpus_b1"));
    const Corpus b = generate_synthetic_corpus(cfg, tmp_dir("rseg_corpus_b2"));
    for (size_t i = 0; i < 4; ++i) {
        CHECK(load_image(a.image_file(i)).data() == load_image(b.image_file(i)).data());
        CHECK(load_mask(a.mask_file(i)) == load_mask(b.mask_file(i)));
        CHECK(a.entries[i].click->x == b.entries[i].click->x);
    }

    cfg.seed = 10;
    const Corpus c = generate_synthetic_corpus(cfg, tmp_dir("rseg_corpus_b3"));
    bool any_diff = false;
    for (size_t i = 0; i < 4 && !any_diff; ++i)
        any_diff = load_image(a.image_file(i)).data() != load_image(c.image_file(i)).data();
    CHECK(any_diff);
}

TEST_CASE("skewed generation shifts object scale") {
    GeneratorConfig cfg;
    cfg.n = 6;
    cfg.size = 256;
    cfg.seed = 21;
    cfg.skew_majority_fraction = 1.0;
    const Corpus large = generate_synthetic_corpus(cfg, tmp_dir("rseg_corpus_l"));
    cfg.skew_majority_fraction = 0.0;
    const Corpus small = generate_synthetic_corpus(cfg, tmp_dir("rseg_corpus_s"));

    double area_large = 0, area_small = 0;
    for (size_t i = 0; i < 6; ++i) {
        area_large += static_cast<double>(load_mask(large.mask_file(i)).count());
        area_small += static_cast<double>(load_mask(small.mask_file(i)).count());
    }
    CHECK(area_large / 6 > 4 * (area_small / 6));
}

TEST_CASE("manifest round trip and the 2-column form") {
    const std::string root = tmp_dir("rseg_corpus_m");
    std::filesystem::create_directories(root);
    Corpus corpus;
    corpus.root = root;
    corpus.entries.push_back({"images/a.pgm", "masks/a.pgm", Seed{5, 7}});
    corpus.entries.push_back({"images/b.pgm", "masks/b.pgm", std::nullopt});
    save_manifest(corpus);

    const Corpus back = load_corpus(root);
    REQUIRE(back.entries.size() == 2);
    CHECK(back.entries[0].click->x == 5);
    CHECK(back.entries[0].click->y == 7);
    CHECK_FALSE(back.entries[1].click.has_value());

    {
        std::ofstream out(root + "/manifest.csv");
        out << "image,mask\nimages/a.pgm,masks/a.pgm\n";
    }
    const Corpus two = load_corpus(root);
    REQUIRE(two.entries.size() == 1);
    CHECK_FALSE(two.entries[0].click.has_value());

    {
        std::ofstream out(root + "/manifest.csv");
        out << "image,mask\na,b,c\n";
    }
    CHECK_THROWS(load_corpus(root));
    CHECK_THROWS(load_corpus(tmp_dir("rseg_corpus_missing")));
}
