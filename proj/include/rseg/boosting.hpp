#pragma once

#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rseg/dataset.hpp"
#include "rseg/tree.hpp"

namespace rseg {

struct BoostConfig {
    int n_rounds = 40;
    TreeConfig tree;
};

struct RamoConfig {
    int k1 = 5;  // neighborhood for the minority sampling weights
    int k2 = 5;  // neighborhood for synthetic interpolation partners
    // Synthetics generated per round; -1 = total class deficit, capped at the
    // dataset size.
    int n_syn_per_round = -1;
    // Inspection hook: called each round with the augmented fit set and the
    // count of real instances at its front. Tests only; never serialized.
    std::function<void(int round, const Dataset& fit_data, size_t n_real)> observe_round;
};

struct BoostRound {
    DecisionTree tree;
    double beta = 0.0;

    bool operator==(const BoostRound&) const = default;
};

struct BoostModel {
    std::string algorithm;  // "adaboost" | "ramoboost"
    int n_classes = 0;
    int feature_dim = 0;
    std::vector<BoostRound> rounds;
    // Instance-weight totals after each retained round's renormalization;
    // diagnostic only, not serialized.
    std::vector<double> weight_sum_trace;
};

/// SAMME multiclass AdaBoost with weighted decision trees.
BoostModel adaboost_train(const Dataset& data, const BoostConfig& cfg);

/// AdaBoost plus per-round adaptive minority oversampling: each round,
/// minority instances are ranked by (1 + majority-neighbor fraction) times
/// their boosting weight, and interpolated synthetics join the tree fit only.
BoostModel ramoboost_train(const Dataset& data, const BoostConfig& cfg,
                           const RamoConfig& ramo, std::mt19937_64& rng);

/// Weighted vote: score(c) = sum of beta over rounds predicting c; ties go
/// to the larger class index.
std::pair<int, std::vector<double>> predict(const BoostModel& model,
                                            const std::vector<double>& x);

std::string serialize_model(const BoostModel& model);
BoostModel deserialize_model(const std::string& json_text);
void save_model(const BoostModel& model, const std::string& path);
BoostModel load_model(const std::string& path);

}  // namespace rseg
