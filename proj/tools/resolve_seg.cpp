#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "rseg/experiment.hpp"
#include "rseg/rng.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::optional<uint64_t> seed;
    std::optional<double> alpha;
    std::optional<std::string> timing;
    std::string out_dir = "out";
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "flat key=value config file");
    cmd->add_option("--seed", opts.seed, "RNG seed (overrides config)");
    cmd->add_option("--alpha", opts.alpha, "trade-off alpha (overrides config)");
    cmd->add_option("--timing", opts.timing, "wall|cost (overrides config)")
        ->check(CLI::IsMember({"wall", "cost"}));
    cmd->add_option("--out", opts.out_dir, "output directory");
}

rseg::ExperimentConfig resolve_config(const CommonOpts& opts) {
    rseg::ExperimentConfig cfg;
    if (!opts.config_path.empty()) cfg = rseg::load_config(opts.config_path);
    if (opts.seed) {
        cfg.seed = *opts.seed;
        cfg.gen.seed = *opts.seed;
    }
    if (opts.alpha) cfg.alpha = *opts.alpha;
    if (opts.timing)
        cfg.timing = *opts.timing == "wall" ? rseg::TimingMode::WallClock
                                            : rseg::TimingMode::DeterministicCost;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Automated resolution selection for coarse-to-fine segmentation"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string corpus_dir = "corpus";
    std::string model_path, image_path, labels_dir;
    int gen_n = -1, gen_size = -1;
    double gen_skew = -2.0;

    auto* gen = app.add_subcommand("gen", "generate a synthetic corpus");
    add_common(gen, opts);
    gen->add_option("--corpus", corpus_dir, "corpus directory to create");
    gen->add_option("--n", gen_n, "number of images");
    gen->add_option("--size", gen_size, "image side length");
    gen->add_option("--skew", gen_skew, "majority-regime fraction for skewed corpora");

    auto* label = app.add_subcommand("label", "label a corpus with its best resolutions");
    add_common(label, opts);
    label->add_option("--corpus", corpus_dir, "corpus directory")->required();

    auto* train = app.add_subcommand("train", "train a model from a labeled dataset CSV");
    add_common(train, opts);
    train->add_option("--labels", labels_dir, "directory containing dataset.csv")->required();
    train->add_option("--model", model_path, "output model file (default <out>/model.json)");

    auto* eval = app.add_subcommand("eval", "run the cross-validated experiment");
    add_common(eval, opts);
    eval->add_option("--corpus", corpus_dir, "corpus directory")->required();

    auto* infer_cmd = app.add_subcommand("infer", "pick a resolution and segment one image");
    add_common(infer_cmd, opts);
    infer_cmd->add_option("--model", model_path, "model JSON file")->required();
    infer_cmd->add_option("--image", image_path, "input image")->required();

    auto* report = app.add_subcommand("report", "print the report tables in --out");
    add_common(report, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        rseg::ExperimentConfig cfg = resolve_config(opts);

        if (gen->parsed()) {
            if (gen_n > 0) cfg.gen.n = gen_n;
            if (gen_size > 0) cfg.gen.size = gen_size;
            if (gen_skew > -1.5) cfg.gen.skew_majority_fraction = gen_skew;
            const rseg::Corpus corpus = rseg::generate_synthetic_corpus(cfg.gen, corpus_dir);
            std::cout << "generated " << corpus.entries.size() << " images under "
                      << corpus_dir << "\n";
        } else if (label->parsed()) {
            const rseg::Corpus corpus = rseg::load_corpus(corpus_dir);
            const rseg::LabeledCorpus labeled = rseg::label_corpus(corpus, cfg);
            rseg::write_label_outputs(labeled, corpus, opts.out_dir);
            std::cout << "labeled " << labeled.images.size() << " images ("
                      << labeled.failures.size() << " failures) -> " << opts.out_dir << "\n";
            if (!labeled.failures.empty()) return 2;
        } else if (train->parsed()) {
            const rseg::Dataset ds = rseg::load_dataset_csv(labels_dir + "/dataset.csv");
            const rseg::Rng rng(cfg.seed);
            rseg::BoostModel model;
            if (cfg.learners().front() == "adaboost") {
                model = rseg::adaboost_train(ds, cfg.boost);
            } else {
                auto g = rng.stream("ramo", 0);
                rseg::Dataset data = ds;
                if (cfg.use_adasyn) {
                    auto ga = rng.stream("adasyn", 0);
                    data = rseg::adasyn_sample(data, cfg.adasyn_beta, cfg.adasyn_k, ga);
                }
                model = rseg::ramoboost_train(data, cfg.boost, cfg.ramo, g);
            }
            if (model_path.empty()) model_path = opts.out_dir + "/model.json";
            std::filesystem::create_directories(
                std::filesystem::path(model_path).parent_path().string().empty()
                    ? "."
                    : std::filesystem::path(model_path).parent_path().string());
            rseg::save_model(model, model_path);
            std::cout << "trained " << model.algorithm << " (" << model.rounds.size()
                      << " rounds) -> " << model_path << "\n";
        } else if (eval->parsed()) {
            const rseg::Corpus corpus = rseg::load_corpus(corpus_dir);
            const rseg::LabeledCorpus labeled = rseg::label_corpus(corpus, cfg);
            rseg::run_experiment(labeled, corpus, cfg, opts.out_dir);
            std::cout << "experiment reports written to " << opts.out_dir << "\n";
            if (!labeled.failures.empty()) return 2;
        } else if (infer_cmd->parsed()) {
            const rseg::BoostModel model = rseg::load_model(model_path);
            const rseg::InferResult result =
                rseg::infer(model, image_path, cfg, opts.out_dir);
            std::cout << "{\"image\":\"" << image_path << "\",\"level\":" << result.level
                      << ",\"time\":" << result.time << ",\"mask\":\"" << result.mask_path
                      << "\"}\n";
        } else if (report->parsed()) {
            rseg::render_report(opts.out_dir);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
