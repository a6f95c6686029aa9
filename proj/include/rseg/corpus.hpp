#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rseg/image.hpp"
#include "rseg/segment.hpp"

namespace rseg {

struct CorpusEntry {
    std::string image_path;  // relative to root
    std::string mask_path;
    std::optional<Seed> click;
};

struct Corpus {
    std::string root;
    std::vector<CorpusEntry> entries;

    std::string image_file(size_t i) const { return root + "/" + entries[i].image_path; }
    std::string mask_file(size_t i) const { return root + "/" + entries[i].mask_path; }
};

/// Reads root/manifest.csv (image,mask[,click_x,click_y]).
Corpus load_corpus(const std::string& root);
void save_manifest(const Corpus& corpus);

struct GeneratorConfig {
    int n = 200;
    int size = 256;
    uint64_t seed = 42;
    // Fraction of images drawn from the large/smooth majority end of the
    // scale; the remainder are small, noisy ones. < 0 uses the default
    // uniform spread.
    double skew_majority_fraction = -1.0;
};

/// Writes a synthetic corpus (one bright object per image whose size,
/// boundary sharpness and noise follow a common latent scale, plus analytic
/// gold masks and on-object clicks) under root and returns its manifest.
Corpus generate_synthetic_corpus(const GeneratorConfig& cfg, const std::string& root);

}  // namespace rseg
