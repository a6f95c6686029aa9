#include "rseg/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "rseg/image_io.hpp"
#include "rseg/rng.hpp"

namespace rseg {

Corpus load_corpus(const std::string& root) {
    const std::string manifest = root + "/manifest.csv";
    std::ifstream in(manifest);
    if (!in) throw std::runtime_error(manifest + ": cannot open");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(manifest + ": empty");

    Corpus corpus;
    corpus.root = root;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::vector<std::string> cells;
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.push_back("");
        if (cells.size() != 2 && cells.size() != 4)
            throw std::runtime_error(manifest + ":" + std::to_string(lineno) +
                                     ": expected 2 or 4 columns");
        CorpusEntry e;
        e.image_path = cells[0];
        e.mask_path = cells[1];
        if (cells.size() == 4 && !cells[2].empty())
            e.click = Seed{std::stoi(cells[2]), std::stoi(cells[3])};
        corpus.entries.push_back(std::move(e));
    }
    return corpus;
}

void save_manifest(const Corpus& corpus) {
    const std::string manifest = corpus.root + "/manifest.csv";
    std::ofstream out(manifest);
    if (!out) throw std::runtime_error(manifest + ": cannot open for writing");
    out << "image,mask,click_x,click_y\n";
    for (const auto& e : corpus.entries) {
        out << e.image_path << "," << e.mask_path << ",";
        if (e.click) out << e.click->x << "," << e.click->y;
        else out << ",";
        out << "\n";
    }
    if (!out) throw std::runtime_error(manifest + ": write failed");
}

namespace {

// Portable Box-Muller so corpora do not depend on libstdc++ internals.
double gauss(std::mt19937_64& g) {
    double u1 = uniform01(g);
    while (u1 <= 0.0) u1 = uniform01(g);
    const double u2 = uniform01(g);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double uniform(std::mt19937_64& g, double lo, double hi) {
    return lo + (hi - lo) * uniform01(g);
}

struct Blob {
    enum class Kind { Disk, Ellipse, Poly } kind;
    double cx, cy;
    double r;          // nominal radius
    double axis_ratio; // ellipse minor/major
    double angle;
    double poly_amp[3], poly_phase[3];  // radial harmonics 2..4

    bool contains(double x, double y) const {
        const double dx = x - cx, dy = y - cy;
        switch (kind) {
            case Kind::Disk:
                return dx * dx + dy * dy <= r * r;
            case Kind::Ellipse: {
                const double ca = std::cos(angle), sa = std::sin(angle);
                const double u = (dx * ca + dy * sa) / r;
                const double v = (-dx * sa + dy * ca) / (r * axis_ratio);
                return u * u + v * v <= 1.0;
            }
            case Kind::Poly: {
                const double phi = std::atan2(dy, dx);
                double mod = 1.0;
                for (int k = 0; k < 3; ++k)
                    mod += poly_amp[k] * std::cos((k + 2) * phi + poly_phase[k]);
                const double rad = r * mod;
                return dx * dx + dy * dy <= rad * rad;
            }
        }
        return false;
    }
};

void gaussian_blur(GrayImage& img, double sigma) {
    if (sigma <= 0.05) return;
    const int rad = std::max(1, static_cast<int>(std::ceil(3 * sigma)));
    std::vector<double> k(2 * rad + 1);
    double sum = 0;
    for (int t = -rad; t <= rad; ++t) {
        k[t + rad] = std::exp(-0.5 * t * t / (sigma * sigma));
        sum += k[t + rad];
    }
    for (auto& v : k) v /= sum;

    const int w = img.width(), h = img.height();
    GrayImage tmp(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double s = 0;
            for (int t = -rad; t <= rad; ++t)
                s += k[t + rad] * img.at(std::clamp(x + t, 0, w - 1), y);
            tmp.at(x, y) = s;
        }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double s = 0;
            for (int t = -rad; t <= rad; ++t)
                s += k[t + rad] * tmp.at(x, std::clamp(y + t, 0, h - 1));
            img.at(x, y) = s;
        }
}

}  // namespace

Corpus generate_synthetic_corpus(const GeneratorConfig& cfg, const std::string& root) {
    if (cfg.n < 1) throw std::invalid_argument("generate_synthetic_corpus: n must be >= 1");
    namespace fs = std::filesystem;
    fs::create_directories(root + "/images");
    fs::create_directories(root + "/masks");

    const Rng rng(cfg.seed);
    Corpus corpus;
    corpus.root = root;
    const int sz = cfg.size;

    for (int idx = 0; idx < cfg.n; ++idx) {
        auto g = rng.stream("corpus", static_cast<uint64_t>(idx));

        // A single object per image whose size, noisiness and boundary
        // sharpness all follow one latent scale in [0, 1]: large objects are
        // smooth and blurry, small ones sharp and noisy. Tying the texture to
        // the scale keeps the optimal-resolution label recoverable from the
        // image's local appearance.
        double scale;
        if (cfg.skew_majority_fraction >= 0.0) {
            scale = uniform01(g) < cfg.skew_majority_fraction ? uniform(g, 0.65, 0.78)
                                                              : uniform(g, 0.18, 0.3);
        } else {
            scale = uniform01(g);
        }

        const double r_min = std::max(4.0, 0.05 * sz);
        const double r_max = 0.33 * sz;
        const double background = uniform(g, 30, 60);
        const double contrast = uniform(g, 110, 170);
        const double blur = (0.4 + 2.0 * scale) * uniform(g, 0.97, 1.03);
        const double noise = (9.0 - 8.0 * scale) * uniform(g, 0.97, 1.03);

        Blob blob{};
        blob.r = r_min * std::pow(r_max / r_min, scale);
        const double margin = 1.35 * blob.r + 4;
        blob.cx = uniform(g, margin, sz - margin);
        blob.cy = uniform(g, margin, sz - margin);
        const double uk = uniform01(g);
        blob.kind = uk < 0.34 ? Blob::Kind::Disk
                              : (uk < 0.67 ? Blob::Kind::Ellipse : Blob::Kind::Poly);
        blob.axis_ratio = uniform(g, 0.6, 1.0);
        blob.angle = uniform(g, 0, std::numbers::pi);
        for (int k = 0; k < 3; ++k) {
            blob.poly_amp[k] = uniform(g, 0.0, 0.1);
            blob.poly_phase[k] = uniform(g, 0, 2 * std::numbers::pi);
        }

        BinaryMask gold(sz, sz);
        GrayImage img(sz, sz, background);
        for (int y = 0; y < sz; ++y)
            for (int x = 0; x < sz; ++x)
                if (blob.contains(x, y)) {
                    gold.set(x, y, true);
                    img.at(x, y) = std::min(255.0, background + contrast);
                }

        // Noise goes in before the blur: the blur then correlates it
        // spatially, so smooth large-scale images and grainy small-scale ones
        // have visibly different local texture.
        if (noise > 0)
            for (auto& v : img.data()) v = std::clamp(v + noise * gauss(g), 0.0, 255.0);
        gaussian_blur(img, blur);

        // Click = the object pixel nearest the gold centroid (the simulated
        // user click, guaranteed to land on the object).
        long long sx = 0, sy = 0, cnt = 0;
        for (int y = 0; y < sz; ++y)
            for (int x = 0; x < sz; ++x)
                if (gold.at(x, y)) {
                    sx += x;
                    sy += y;
                    ++cnt;
                }

        char name[64];
        std::snprintf(name, sizeof name, "images/img_%04d.pgm", idx);
        CorpusEntry e;
        e.image_path = name;
        std::snprintf(name, sizeof name, "masks/mask_%04d.pgm", idx);
        e.mask_path = name;
        if (cnt > 0) {
            const double mx = static_cast<double>(sx) / cnt, my = static_cast<double>(sy) / cnt;
            Seed best{0, 0};
            double best_d2 = 1e300;
            for (int y = 0; y < sz; ++y)
                for (int x = 0; x < sz; ++x)
                    if (gold.at(x, y)) {
                        const double d2 = (x - mx) * (x - mx) + (y - my) * (y - my);
                        if (d2 < best_d2) {
                            best_d2 = d2;
                            best = Seed{x, y};
                        }
                    }
            e.click = best;
        }
        save_image(img, root + "/" + e.image_path);
        save_mask(gold, root + "/" + e.mask_path);
        corpus.entries.push_back(std::move(e));
    }

    save_manifest(corpus);
    return corpus;
}

}  // namespace rseg
