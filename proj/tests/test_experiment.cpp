#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "rseg/experiment.hpp"
#include "rseg/image_io.hpp"

using namespace rseg;

namespace {

std::string tmp_dir(const std::string& name) {
    const auto p = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(p);
    return p.string();
}

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.r = 3;
    cfg.folds = 4;
    cfg.repeats = 2;
    cfg.seed = 11;
    cfg.boost.n_rounds = 3;
    cfg.boost.tree.max_depth = 3;
    cfg.ramo.k1 = 2;
    cfg.ramo.k2 = 2;
    cfg.gen.n = 24;
    cfg.gen.size = 64;
    cfg.gen.seed = 11;
    return cfg;
}

// One small corpus and labeling shared across the cases below.
struct Fixture {
    ExperimentConfig cfg = small_config();
    Corpus corpus;
    LabeledCorpus labeled;
    Fixture() {
        corpus = generate_synthetic_corpus(cfg.gen, tmp_dir("rseg_exp_corpus"));
        labeled = label_corpus(corpus, cfg);
    }
};

const Fixture& fixture() {
    static Fixture f;
    return f;
}

}  // namespace

TEST_CASE("config parsing") {
    const std::string path =
        (std::filesystem::temp_directory_path() / "rseg_cfg.txt").string();
    {
        std::ofstream out(path);
        out << "# experiment setup\n"
            << "r=4\n"
            << "alpha=0.7   # trade-off\n"
            << "segmenter=regiongrow\n"
            << "learner=both\n"
            << "timing=wall\n"
            << "boost_rounds=12\n"
            << "gen_n=50\n"
            << "seed=99\n";
    }
    const ExperimentConfig cfg = load_config(path);
    CHECK(cfg.r == 4);
    CHECK(cfg.alpha == doctest::Approx(0.7));
    CHECK(cfg.segmenter == "regiongrow");
    CHECK(cfg.learners() == std::vector<std::string>{"adaboost", "ramoboost"});
    CHECK(cfg.timing == TimingMode::WallClock);
    CHECK(cfg.boost.n_rounds == 12);
    CHECK(cfg.gen.n == 50);
    CHECK(cfg.gen.seed == 99);  // gen shares the experiment seed

    ExperimentConfig c;
    CHECK_THROWS(apply_config_kv(c, "bogus_key", "1"));
    CHECK_THROWS(apply_config_kv(c, "timing", "fast"));
    c.learner = "svm";
    CHECK_THROWS(c.learners());
    CHECK_THROWS(load_config("/nonexistent/rseg.cfg"));
}

TEST_CASE("label_corpus produces consistent per-image records") {
    const auto& f = fixture();
    CHECK(f.labeled.failures.empty());
    REQUIRE(f.labeled.images.size() == 24);
    CHECK(f.labeled.r == 3);
    for (const auto& li : f.labeled.images) {
        CHECK(li.best_level >= 0);
        CHECK(li.best_level < 3);
        REQUIRE(li.runs.size() == 3);
        REQUIRE(li.omegas.size() == 3);
        CHECK(li.features.size() == 4 * 4 * 10);
        for (const auto& rec : li.runs) {
            CHECK(rec.time > 0);
            CHECK(rec.accuracy >= 0.0);
            CHECK(rec.accuracy <= 1.0);
        }
        // Coarser levels cost less in deterministic mode.
        CHECK(li.runs[0].time > li.runs[2].time);
        // The chosen level maximizes omega (ties to coarser).
        for (int l = 0; l < 3; ++l) CHECK(li.omegas[li.best_level] >= li.omegas[l]);
    }

    // Labeling is deterministic.
    const LabeledCorpus again = label_corpus(f.corpus, f.cfg);
    REQUIRE(again.images.size() == f.labeled.images.size());
    for (size_t i = 0; i < again.images.size(); ++i) {
        CHECK(again.images[i].best_level == f.labeled.images[i].best_level);
        CHECK(again.images[i].features == f.labeled.images[i].features);
        for (int l = 0; l < 3; ++l)
            CHECK(again.images[i].runs[l].time == f.labeled.images[i].runs[l].time);
    }
}

TEST_CASE("label_corpus records per-image failures without aborting") {
    const auto& f = fixture();
    Corpus broken = f.corpus;
    broken.entries[3].image_path = "images/does_not_exist.pgm";
    const LabeledCorpus labeled = label_corpus(broken, f.cfg);
    CHECK(labeled.images.size() == 23);
    REQUIRE(labeled.failures.size() == 1);
    CHECK(labeled.failures[0].first == 3);
}

TEST_CASE("label outputs round-trip through the dataset CSV") {
    const auto& f = fixture();
    const std::string out = tmp_dir("rseg_exp_label_out");
    write_label_outputs(f.labeled, f.corpus, out);

    const Dataset ds = load_dataset_csv(out + "/dataset.csv");
    REQUIRE(ds.size() == 24);
    CHECK(ds.feature_dim() == 160);
    for (size_t i = 0; i < ds.size(); ++i) {
        CHECK(ds.instances[i].label == f.labeled.images[i].best_level);
        for (size_t j = 0; j < ds.instances[i].features.size(); ++j)
            CHECK(ds.instances[i].features[j] ==
                  doctest::Approx(f.labeled.images[i].features[j]).epsilon(1e-15));
    }

    std::ifstream runs(out + "/runs.csv");
    int lines = 0;
    std::string line;
    while (std::getline(runs, line)) ++lines;
    CHECK(lines == 1 + 24 * 3);
    CHECK(std::filesystem::exists(out + "/labels.csv"));
    CHECK_FALSE(std::filesystem::exists(out + "/failures.csv"));
}

TEST_CASE("run_experiment: shape, determinism, and report files") {
    const auto& f = fixture();
    ExperimentConfig cfg = f.cfg;
    cfg.learner = "both";
    const std::string out = tmp_dir("rseg_exp_report");
    const ExperimentReport report = run_experiment(f.labeled, f.corpus, cfg, out);

    REQUIRE(report.learners.size() == 2);
    CHECK(report.learners[0].learner == "adaboost");
    CHECK(report.learners[1].learner == "ramoboost");
    CHECK(report.minority_class >= 0);
    CHECK(report.minority_class < 3);

    for (const auto& lr : report.learners) {
        REQUIRE(lr.repeats.size() == 2);
        for (const auto& rr : lr.repeats) {
            // Every labeled image is tested exactly once per repeat.
            CHECK(rr.confusion.total() == 24);
            CHECK(rr.locality >= 0.0);
            CHECK(rr.locality <= 1.0);
        }
        CHECK(lr.mean_impact.time_orig_est > 0);
        CHECK(lr.mean_impact.acc_est_sel > 0);
        CHECK(std::filesystem::exists(out + "/confusion_" + lr.learner + ".csv"));
        CHECK(std::filesystem::exists(out + "/f1_" + lr.learner + ".csv"));
        CHECK(std::filesystem::exists(out + "/impact_" + lr.learner + ".csv"));
    }
    CHECK(std::filesystem::exists(out + "/summary.txt"));
    CHECK(std::filesystem::exists(out + "/dataset.csv"));

    // Re-running with the same seed reproduces the aggregates exactly.
    const ExperimentReport again = run_experiment(f.labeled, f.corpus, cfg, "");
    for (size_t l = 0; l < 2; ++l) {
        for (int c = 0; c < 3; ++c) {
            const double a = report.learners[l].mean_f1[c];
            const double b = again.learners[l].mean_f1[c];
            CHECK((std::isnan(a) ? std::isnan(b) : a == b));
        }
        CHECK(report.learners[l].mean_impact.time_orig_est ==
              again.learners[l].mean_impact.time_orig_est);
        CHECK(report.learners[l].mean_locality == again.learners[l].mean_locality);
    }

    ExperimentConfig bad = cfg;
    bad.folds = 1;
    CHECK_THROWS(run_experiment(f.labeled, f.corpus, bad, ""));
    bad = cfg;
    bad.folds = 30;  // more folds than images
    CHECK_THROWS(run_experiment(f.labeled, f.corpus, bad, ""));
}

TEST_CASE("training plus inference runs end to end") {
    const auto& f = fixture();
    const Dataset ds = labeled_dataset(f.labeled);
    BoostModel model = adaboost_train(ds, f.cfg.boost);

    const std::string model_path =
        (std::filesystem::temp_directory_path() / "rseg_model.json").string();
    save_model(model, model_path);
    const BoostModel loaded = load_model(model_path);

    const std::string out = tmp_dir("rseg_exp_infer");
    const InferResult res = infer(loaded, f.corpus.image_file(0), f.cfg, out);
    CHECK(res.level >= 0);
    CHECK(res.level < 3);
    CHECK(res.time > 0);
    REQUIRE(std::filesystem::exists(res.mask_path));
    const BinaryMask mask = load_mask(res.mask_path);
    CHECK(mask.width() == 64);
    CHECK(std::filesystem::exists(out + "/img_0000_result.json"));

    // A model trained on a different feature layout is rejected.
    ExperimentConfig other = f.cfg;
    other.features.rows = 2;
    other.features.cols = 2;
    CHECK_THROWS(infer(loaded, f.corpus.image_file(0), other, out));
}
