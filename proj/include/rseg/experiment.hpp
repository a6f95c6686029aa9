#pragma once

#include <string>
#include <vector>

#include "rseg/boosting.hpp"
#include "rseg/corpus.hpp"
#include "rseg/lbp.hpp"
#include "rseg/metrics.hpp"
#include "rseg/sampling.hpp"
#include "rseg/segment.hpp"
#include "rseg/tradeoff.hpp"

namespace rseg {

struct ExperimentConfig {
    int r = 6;
    double alpha = 0.5;
    std::string segmenter = "chanvese";
    ChanVeseConfig chanvese;
    RegionGrowConfig regiongrow;
    FeatureGrid features;
    std::string learner = "ramoboost";  // adaboost | ramoboost | both
    BoostConfig boost;
    RamoConfig ramo;
    bool use_adasyn = false;
    double adasyn_beta = 0.7;
    int adasyn_k = 5;
    int folds = 10;
    int repeats = 10;
    uint64_t seed = 42;
    TimingMode timing = TimingMode::DeterministicCost;
    double refine_tau = 60.0;
    GeneratorConfig gen;  // for the gen subcommand; shares `seed`

    std::vector<std::string> learners() const;
    SegmentAtLevelConfig level_config() const { return {timing, refine_tau}; }
};

/// Flat key=value config file; '#' starts a comment. Unknown keys throw.
ExperimentConfig load_config(const std::string& path);
void apply_config_kv(ExperimentConfig& cfg, const std::string& key, const std::string& value);

struct LabeledImage {
    size_t index = 0;  // manifest index
    std::vector<double> features;
    int best_level = 0;
    std::vector<double> omegas;
    std::vector<ResolutionRunRecord> runs;  // masks dropped, (A, T) kept
};

struct LabeledCorpus {
    std::vector<LabeledImage> images;
    std::vector<std::pair<size_t, std::string>> failures;  // manifest index, reason
    int r = 0;
    double alpha = 0.0;
};

/// Algorithm-1 labeling over a whole corpus: per image, pyramid, timed
/// segmentation at every level, trade-off labeling, LBP features. Per-image
/// failures are recorded and skipped.
LabeledCorpus label_corpus(const Corpus& corpus, const ExperimentConfig& cfg);

/// Writes dataset.csv (features+label), labels.csv (image,best_level,
/// omegas,alpha) and runs.csv (image,level,dice,time) under out_dir.
void write_label_outputs(const LabeledCorpus& labeled, const Corpus& corpus,
                         const std::string& out_dir);

Dataset labeled_dataset(const LabeledCorpus& labeled);

struct RepeatResult {
    ConfusionMatrix confusion;
    std::vector<double> f1;        // per class, from this repeat's pooled confusion
    ImpactRatios impact{};
    double locality = 1.0;         // misclassified within +/-1 level
    long long misclassified = 0;
};

struct LearnerResult {
    std::string learner;
    std::vector<RepeatResult> repeats;
    MatrixStats confusion_stats;
    std::vector<double> mean_f1;
    ImpactRatios mean_impact{};
    double mean_locality = 1.0;
};

struct ExperimentReport {
    LabeledCorpus labeled;
    std::vector<LearnerResult> learners;
    int minority_class = -1;  // least-frequent nonzero label class
};

/// Repeated k-fold cross-validation over an already labeled corpus, with
/// per-image impact records against the original / minimum / peak / selected
/// resolutions. Writes report CSVs and a text summary under out_dir when
/// out_dir is nonempty.
ExperimentReport run_experiment(const LabeledCorpus& labeled, const Corpus& corpus,
                                const ExperimentConfig& cfg, const std::string& out_dir);

struct InferResult {
    int level = 0;
    double time = 0.0;
    std::string mask_path;
};

/// Algorithm-3 online path: features -> predicted level -> coarse-to-fine
/// segmentation; writes the mask and a one-line JSON record under out_dir.
InferResult infer(const BoostModel& model, const std::string& image_path,
                  const ExperimentConfig& cfg, const std::string& out_dir);

/// Re-renders the text summary from report CSVs already present in out_dir.
void render_report(const std::string& out_dir);

}  // namespace rseg
