#include "rseg/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "rseg/image_io.hpp"
#include "rseg/rng.hpp"

namespace rseg {

namespace {

std::string fmt(double v, int prec = 6) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

bool parse_bool(const std::string& v) {
    if (v == "1" || v == "true" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "no") return false;
    throw std::invalid_argument("config: bad boolean '" + v + "'");
}

}  // namespace

std::vector<std::string> ExperimentConfig::learners() const {
    if (learner == "both") return {"adaboost", "ramoboost"};
    if (learner == "adaboost" || learner == "ramoboost") return {learner};
    throw std::invalid_argument("config: learner must be adaboost, ramoboost or both");
}

void apply_config_kv(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "r") cfg.r = std::stoi(value);
    else if (key == "alpha") cfg.alpha = std::stod(value);
    else if (key == "segmenter") cfg.segmenter = value;
    else if (key == "learner") cfg.learner = value;
    else if (key == "folds") cfg.folds = std::stoi(value);
    else if (key == "repeats") cfg.repeats = std::stoi(value);
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "timing") {
        if (value == "wall") cfg.timing = TimingMode::WallClock;
        else if (value == "cost") cfg.timing = TimingMode::DeterministicCost;
        else throw std::invalid_argument("config: timing must be wall or cost");
    }
    else if (key == "refine_tau") cfg.refine_tau = std::stod(value);
    else if (key == "feature_rows") cfg.features.rows = std::stoi(value);
    else if (key == "feature_cols") cfg.features.cols = std::stoi(value);
    else if (key == "feature_bins") cfg.features.bins = std::stoi(value);
    else if (key == "boost_rounds") cfg.boost.n_rounds = std::stoi(value);
    else if (key == "tree_max_depth") cfg.boost.tree.max_depth = std::stoi(value);
    else if (key == "tree_min_leaf_fraction")
        cfg.boost.tree.min_leaf_fraction = std::stod(value);
    else if (key == "ramo_k1") cfg.ramo.k1 = std::stoi(value);
    else if (key == "ramo_k2") cfg.ramo.k2 = std::stoi(value);
    else if (key == "ramo_n_syn") cfg.ramo.n_syn_per_round = std::stoi(value);
    else if (key == "use_adasyn") cfg.use_adasyn = parse_bool(value);
    else if (key == "adasyn_beta") cfg.adasyn_beta = std::stod(value);
    else if (key == "adasyn_k") cfg.adasyn_k = std::stoi(value);
    else if (key == "cv_max_iters") cfg.chanvese.max_iters = std::stoi(value);
    else if (key == "cv_min_iters") cfg.chanvese.min_iters = std::stoi(value);
    else if (key == "cv_eta") cfg.chanvese.eta = std::stoi(value);
    else if (key == "cv_nu") cfg.chanvese.nu = std::stod(value);
    else if (key == "cv_dt") cfg.chanvese.dt = std::stod(value);
    else if (key == "rg_tau") cfg.regiongrow.tau = std::stod(value);
    else if (key == "gen_n") cfg.gen.n = std::stoi(value);
    else if (key == "gen_size") cfg.gen.size = std::stoi(value);
    else if (key == "gen_skew") cfg.gen.skew_majority_fraction = std::stod(value);
    else throw std::invalid_argument("config: unknown key '" + key + "'");
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open");
    ExperimentConfig cfg;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected key=value");
        apply_config_kv(cfg, line.substr(0, eq), line.substr(eq + 1));
    }
    cfg.gen.seed = cfg.seed;
    return cfg;
}

LabeledCorpus label_corpus(const Corpus& corpus, const ExperimentConfig& cfg) {
    LabeledCorpus out;
    out.r = cfg.r;
    out.alpha = cfg.alpha;
    const auto segmenter = make_segmenter(cfg.segmenter, cfg.chanvese, cfg.regiongrow);
    const auto level_cfg = cfg.level_config();

    for (size_t i = 0; i < corpus.entries.size(); ++i) {
        try {
            const GrayImage img = load_image(corpus.image_file(i));
            const BinaryMask gold = load_mask(corpus.mask_file(i));
            if (gold.width() != img.width() || gold.height() != img.height())
                throw std::runtime_error("gold mask dimensions differ from image");

            const Pyramid pyr = build_pyramid(img, cfg.r);
            LabeledImage li;
            li.index = i;
            for (int level = 0; level < cfg.r; ++level) {
                auto rec = segment_at_level(pyr, level, *segmenter, gold,
                                            corpus.entries[i].click, level_cfg);
                rec.mask = BinaryMask();  // (A, T) is all downstream needs
                li.runs.push_back(std::move(rec));
            }
            const ResolutionLabel label = label_best_resolution(li.runs, cfg.alpha);
            li.best_level = label.best_level;
            li.omegas = label.omegas;
            li.features = extract_features(img, cfg.features);
            out.images.push_back(std::move(li));
        } catch (const std::exception& e) {
            out.failures.emplace_back(i, e.what());
        }
    }
    return out;
}

Dataset labeled_dataset(const LabeledCorpus& labeled) {
    Dataset ds;
    for (const auto& li : labeled.images)
        ds.instances.push_back({li.features, li.best_level});
    return ds;
}

void write_label_outputs(const LabeledCorpus& labeled, const Corpus& corpus,
                         const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    save_dataset_csv(labeled_dataset(labeled), out_dir + "/dataset.csv");

    std::ofstream labels(out_dir + "/labels.csv");
    labels << "image,best_level";
    for (int i = 0; i < labeled.r; ++i) labels << ",omega_" << i;
    labels << ",alpha\n";
    std::ofstream runs(out_dir + "/runs.csv");
    runs << "image,level,dice,time\n";
    for (const auto& li : labeled.images) {
        const std::string& name = corpus.entries[li.index].image_path;
        labels << name << "," << li.best_level;
        for (const double w : li.omegas) labels << "," << fmt(w);
        labels << "," << fmt(labeled.alpha, 3) << "\n";
        for (const auto& rec : li.runs)
            runs << name << "," << rec.level << "," << fmt(rec.accuracy) << ","
                 << fmt(rec.time) << "\n";
    }
    if (!labeled.failures.empty()) {
        std::ofstream fails(out_dir + "/failures.csv");
        fails << "image,error\n";
        for (const auto& [idx, reason] : labeled.failures)
            fails << corpus.entries[idx].image_path << ",\"" << reason << "\"\n";
    }
}

namespace {

int mode_level(const std::vector<int>& labels, int r) {
    std::vector<int> hist(r, 0);
    for (const int l : labels) ++hist[l];
    int peak = 0;
    for (int l = 1; l < r; ++l)
        if (hist[l] >= hist[peak]) peak = l;  // ties toward the coarser level
    return peak;
}

BoostModel train_one(const std::string& learner, const Dataset& train,
                     const ExperimentConfig& cfg, const Rng& rng, uint64_t stream_index) {
    Dataset data = train;
    if (cfg.use_adasyn) {
        auto g = rng.stream("adasyn", stream_index);
        data = adasyn_sample(data, cfg.adasyn_beta, cfg.adasyn_k, g);
    }
    if (learner == "adaboost") return adaboost_train(data, cfg.boost);
    auto g = rng.stream("ramo", stream_index);
    return ramoboost_train(data, cfg.boost, cfg.ramo, g);
}

void write_report_csvs(const ExperimentReport& report, const ExperimentConfig& cfg,
                       const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const int k = report.labeled.r;

    for (const auto& lr : report.learners) {
        {
            std::ofstream out(out_dir + "/confusion_" + lr.learner + ".csv");
            out << "stat,actual";
            for (int j = 0; j < k; ++j) out << ",pred_" << j;
            out << "\n";
            for (int i = 0; i < k; ++i) {
                out << "mean," << i;
                for (int j = 0; j < k; ++j) out << "," << fmt(lr.confusion_stats.mean[i][j]);
                out << "\n";
            }
            for (int i = 0; i < k; ++i) {
                out << "std," << i;
                for (int j = 0; j < k; ++j) out << "," << fmt(lr.confusion_stats.stddev[i][j]);
                out << "\n";
            }
        }
        {
            std::ofstream out(out_dir + "/f1_" + lr.learner + ".csv");
            out << "class,mean_f1\n";
            for (int c = 0; c < k; ++c) {
                out << c << ",";
                out << (std::isnan(lr.mean_f1[c]) ? std::string("NA") : fmt(lr.mean_f1[c]));
                out << "\n";
            }
        }
        {
            std::ofstream out(out_dir + "/impact_" + lr.learner + ".csv");
            out << "alpha,acc_est_orig,acc_est_min,acc_est_peak,acc_est_sel,"
                   "time_orig_est,time_min_est,time_peak_est,time_sel_est,locality\n";
            const auto& m = lr.mean_impact;
            out << fmt(cfg.alpha, 3) << "," << fmt(m.acc_est_orig) << ","
                << fmt(m.acc_est_min) << "," << fmt(m.acc_est_peak) << ","
                << fmt(m.acc_est_sel) << "," << fmt(m.time_orig_est) << ","
                << fmt(m.time_min_est) << "," << fmt(m.time_peak_est) << ","
                << fmt(m.time_sel_est) << "," << fmt(lr.mean_locality) << "\n";
        }
    }

    // Human-readable tables in the paper's layout.
    std::ofstream out(out_dir + "/summary.txt");
    out << "Experiment: alpha=" << fmt(cfg.alpha, 2) << " r=" << k
        << " folds=" << cfg.folds << " repeats=" << cfg.repeats
        << " seed=" << cfg.seed << " segmenter=" << cfg.segmenter << "\n";
    out << "Labeled images: " << report.labeled.images.size()
        << "  failures: " << report.labeled.failures.size() << "\n\n";

    {
        std::vector<int> hist(k, 0);
        for (const auto& li : report.labeled.images) ++hist[li.best_level];
        out << "Best-resolution label histogram:\n";
        for (int l = 0; l < k; ++l) out << "  level " << l << ": " << hist[l] << "\n";
        out << "\n";
    }

    for (const auto& lr : report.learners) {
        out << "== " << lr.learner << " ==\n";
        out << "Per-class F1 (mean over repeats):\n ";
        for (int c = 0; c < k; ++c)
            out << "  L" << c << "="
                << (std::isnan(lr.mean_f1[c]) ? std::string("---") : fmt(lr.mean_f1[c], 4));
        out << "\n";
        out << "Impact on accuracy:  Est/Orig=" << fmt(lr.mean_impact.acc_est_orig, 2)
            << "  Est/Min=" << fmt(lr.mean_impact.acc_est_min, 2)
            << "  Est/Peak=" << fmt(lr.mean_impact.acc_est_peak, 2)
            << "  Est/Sel=" << fmt(lr.mean_impact.acc_est_sel, 2) << "\n";
        out << "Impact on time:      Orig/Est=" << fmt(lr.mean_impact.time_orig_est, 2)
            << "  Min/Est=" << fmt(lr.mean_impact.time_min_est, 2)
            << "  Peak/Est=" << fmt(lr.mean_impact.time_peak_est, 2)
            << "  Sel/Est=" << fmt(lr.mean_impact.time_sel_est, 2) << "\n";
        out << "Misclassified within +/-1 level: " << fmt(lr.mean_locality, 4) << "\n";
        out << "Mean confusion matrix (rows actual, cols predicted, rounded):\n";
        for (int i = 0; i < k; ++i) {
            out << " ";
            for (int j = 0; j < k; ++j) {
                char buf[16];
                std::snprintf(buf, sizeof buf, " %6.0f", lr.confusion_stats.mean[i][j]);
                out << buf;
            }
            out << "\n";
        }
        out << "\n";
    }
}

}  // namespace

ExperimentReport run_experiment(const LabeledCorpus& labeled, const Corpus& corpus,
                                const ExperimentConfig& cfg, const std::string& out_dir) {
    if (cfg.folds < 2) throw std::invalid_argument("run_experiment: folds must be >= 2");
    if (cfg.repeats < 1) throw std::invalid_argument("run_experiment: repeats must be >= 1");
    const size_t n = labeled.images.size();
    if (n < static_cast<size_t>(cfg.folds))
        throw std::invalid_argument("run_experiment: fewer labeled images than folds");
    const int k = labeled.r;
    const Rng rng(cfg.seed);

    ExperimentReport report;
    report.labeled = labeled;

    {
        std::vector<size_t> counts(k, 0);
        for (const auto& li : labeled.images) ++counts[li.best_level];
        // The minority class must have enough support for a per-class F1 to
        // mean anything; classes with only a handful of stragglers are noise.
        const size_t floor = std::max<size_t>(5, n / 40);
        size_t best = SIZE_MAX;
        for (int c = 0; c < k; ++c)
            if (counts[c] >= floor && counts[c] < best) {
                best = counts[c];
                report.minority_class = c;
            }
        if (report.minority_class < 0)
            for (int c = 0; c < k; ++c)
                if (counts[c] > 0 && counts[c] < best) {
                    best = counts[c];
                    report.minority_class = c;
                }
    }

    for (const std::string& learner : cfg.learners()) {
        LearnerResult lr;
        lr.learner = learner;

        for (int rep = 0; rep < cfg.repeats; ++rep) {
            std::vector<size_t> order(n);
            std::iota(order.begin(), order.end(), 0);
            auto g = rng.stream("folds", static_cast<uint64_t>(rep));
            // Fisher-Yates with the portable uniform so shuffles reproduce.
            for (size_t i = n - 1; i > 0; --i)
                std::swap(order[i], order[uniform_index(g, i + 1)]);

            RepeatResult rr;
            rr.confusion = ConfusionMatrix(k);
            std::vector<ImpactRecord> impacts;
            long long within_one = 0;

            for (int fold = 0; fold < cfg.folds; ++fold) {
                Dataset train;
                std::vector<size_t> test_idx;
                std::vector<int> train_labels;
                for (size_t pos = 0; pos < n; ++pos) {
                    const auto& li = labeled.images[order[pos]];
                    if (static_cast<int>(pos % cfg.folds) == fold) {
                        test_idx.push_back(order[pos]);
                    } else {
                        train.instances.push_back({li.features, li.best_level});
                        train_labels.push_back(li.best_level);
                    }
                }
                const int peak = mode_level(train_labels, k);
                const uint64_t stream_index =
                    static_cast<uint64_t>(rep) * cfg.folds + fold;
                const BoostModel model = train_one(learner, train, cfg, rng, stream_index);

                for (const size_t idx : test_idx) {
                    const auto& li = labeled.images[idx];
                    const auto [pred, scores] = predict(model, li.features);
                    rr.confusion.add(li.best_level, pred);
                    if (pred != li.best_level) {
                        ++rr.misclassified;
                        if (std::abs(pred - li.best_level) <= 1) ++within_one;
                    }
                    // Deterministic-cost runs are reused; they are identical
                    // to a re-run by construction.
                    ImpactRecord rec{};
                    rec.est_acc = li.runs[pred].accuracy;
                    rec.est_time = li.runs[pred].time;
                    rec.orig_acc = li.runs[0].accuracy;
                    rec.orig_time = li.runs[0].time;
                    rec.min_acc = li.runs[k - 1].accuracy;
                    rec.min_time = li.runs[k - 1].time;
                    rec.peak_acc = li.runs[peak].accuracy;
                    rec.peak_time = li.runs[peak].time;
                    rec.sel_acc = li.runs[li.best_level].accuracy;
                    rec.sel_time = li.runs[li.best_level].time;
                    impacts.push_back(rec);
                }
            }

            rr.impact = impact_ratios(impacts);
            rr.locality = rr.misclassified > 0
                              ? static_cast<double>(within_one) / rr.misclassified
                              : 1.0;
            const auto metrics = classification_metrics(rr.confusion);
            rr.f1 = metrics.f1;
            lr.repeats.push_back(std::move(rr));
        }

        std::vector<ConfusionMatrix> cms;
        for (const auto& rr : lr.repeats) cms.push_back(rr.confusion);
        lr.confusion_stats = aggregate_confusions(cms);

        lr.mean_f1.assign(k, std::numeric_limits<double>::quiet_NaN());
        for (int c = 0; c < k; ++c) {
            double sum = 0;
            int cnt = 0;
            for (const auto& rr : lr.repeats)
                if (!std::isnan(rr.f1[c])) {
                    sum += rr.f1[c];
                    ++cnt;
                }
            if (cnt > 0) lr.mean_f1[c] = sum / cnt;
        }

        auto mean_of = [&](double ImpactRatios::*field) {
            double s = 0;
            for (const auto& rr : lr.repeats) s += rr.impact.*field;
            return s / lr.repeats.size();
        };
        lr.mean_impact.acc_est_orig = mean_of(&ImpactRatios::acc_est_orig);
        lr.mean_impact.acc_est_min = mean_of(&ImpactRatios::acc_est_min);
        lr.mean_impact.acc_est_peak = mean_of(&ImpactRatios::acc_est_peak);
        lr.mean_impact.acc_est_sel = mean_of(&ImpactRatios::acc_est_sel);
        lr.mean_impact.time_orig_est = mean_of(&ImpactRatios::time_orig_est);
        lr.mean_impact.time_min_est = mean_of(&ImpactRatios::time_min_est);
        lr.mean_impact.time_peak_est = mean_of(&ImpactRatios::time_peak_est);
        lr.mean_impact.time_sel_est = mean_of(&ImpactRatios::time_sel_est);
        double loc = 0;
        for (const auto& rr : lr.repeats) loc += rr.locality;
        lr.mean_locality = loc / lr.repeats.size();

        report.learners.push_back(std::move(lr));
    }

    if (!out_dir.empty()) {
        write_label_outputs(labeled, corpus, out_dir);
        write_report_csvs(report, cfg, out_dir);
    }
    return report;
}

InferResult infer(const BoostModel& model, const std::string& image_path,
                  const ExperimentConfig& cfg, const std::string& out_dir) {
    const GrayImage img = load_image(image_path);
    const std::vector<double> features = extract_features(img, cfg.features);
    if (static_cast<int>(features.size()) != model.feature_dim)
        throw std::invalid_argument(
            "infer: model feature dimension (" + std::to_string(model.feature_dim) +
            ") does not match config (" + std::to_string(features.size()) + ")");
    const auto [level, scores] = predict(model, features);

    const Pyramid pyr = build_pyramid(img, level + 1);
    const auto segmenter = make_segmenter(cfg.segmenter, cfg.chanvese, cfg.regiongrow);
    auto [mask, time] = run_coarse_to_fine(pyr, level, *segmenter, std::nullopt,
                                           cfg.level_config());

    std::filesystem::create_directories(out_dir);
    const std::string stem = std::filesystem::path(image_path).stem().string();
    InferResult result;
    result.level = level;
    result.time = time;
    result.mask_path = out_dir + "/" + stem + "_mask.png";
    save_mask(mask, result.mask_path);

    nlohmann::json j;
    j["image"] = image_path;
    j["level"] = level;
    j["time"] = time;
    j["mask"] = result.mask_path;
    std::ofstream rec(out_dir + "/" + stem + "_result.json");
    rec << j.dump() << "\n";
    return result;
}

void render_report(const std::string& out_dir) {
    namespace fs = std::filesystem;
    const std::string summary = out_dir + "/summary.txt";
    if (fs::exists(summary)) {
        std::ifstream in(summary);
        std::cout << in.rdbuf();
        return;
    }
    // No summary yet: align whatever report CSVs exist.
    for (const auto& entry : fs::directory_iterator(out_dir)) {
        const std::string name = entry.path().filename().string();
        if (entry.path().extension() != ".csv" || name.rfind("impact_", 0) != 0) continue;
        std::cout << "[" << name << "]\n";
        std::ifstream in(entry.path());
        std::string line;
        while (std::getline(in, line)) {
            std::replace(line.begin(), line.end(), ',', '\t');
            std::cout << "  " << line << "\n";
        }
    }
}

}  // namespace rseg
