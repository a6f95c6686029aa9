#pragma once

#include <vector>

#include "rseg/dataset.hpp"

namespace rseg {

struct TreeConfig {
    int max_depth = 6;
    double min_leaf_fraction = 0.01;  // of total instance weight
};

/// CART-style binary tree with axis-aligned threshold splits minimizing
/// weighted Gini impurity. Stored as flat arrays; node 0 is the root.
/// Internal nodes route x[feature] < threshold to `left`, else `right`.
/// Leaves have feature == -1; their `left` indexes a row of leaf_probs.
class DecisionTree {
public:
    std::vector<int> feature;
    std::vector<double> threshold;
    std::vector<int> left;
    std::vector<int> right;
    std::vector<std::vector<double>> leaf_probs;  // indexed by -left-1 at leaves
    int n_classes = 0;

    int predict(const std::vector<double>& x) const;
    const std::vector<double>& predict_proba(const std::vector<double>& x) const;

    bool operator==(const DecisionTree&) const = default;
};

/// Fits a weighted tree; duplicates in feature space collapse to a leaf with
/// the weighted class distribution. Throws if weights sum to 0.
DecisionTree train_tree(const Dataset& data, const std::vector<double>& weights,
                        const TreeConfig& cfg, int n_classes);

}  // namespace rseg
