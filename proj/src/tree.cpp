#include "rseg/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rseg {

int DecisionTree::predict(const std::vector<double>& x) const {
    const auto& p = predict_proba(x);
    // Ties toward the larger class index, mirroring the trade-off tie rule.
    int best = 0;
    for (int c = 1; c < n_classes; ++c)
        if (p[c] >= p[best]) best = c;
    return best;
}

const std::vector<double>& DecisionTree::predict_proba(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) < 1 || feature.empty())
        throw std::invalid_argument("DecisionTree: empty tree or input");
    int node = 0;
    while (feature[node] >= 0) {
        if (feature[node] >= static_cast<int>(x.size()))
            throw std::invalid_argument("DecisionTree: feature dimension mismatch");
        node = x[feature[node]] < threshold[node] ? left[node] : right[node];
    }
    return leaf_probs[left[node]];
}

namespace {

struct Builder {
    const Dataset& data;
    const std::vector<double>& weights;
    const TreeConfig& cfg;
    int n_classes;
    double min_leaf_weight;
    DecisionTree tree;

    int make_leaf(const std::vector<size_t>& idx) {
        std::vector<double> probs(n_classes, 0.0);
        double total = 0;
        for (const size_t i : idx) {
            probs[data.instances[i].label] += weights[i];
            total += weights[i];
        }
        if (total > 0)
            for (auto& p : probs) p /= total;
        else
            probs.assign(n_classes, 1.0 / n_classes);
        const int node = static_cast<int>(tree.feature.size());
        tree.feature.push_back(-1);
        tree.threshold.push_back(0.0);
        tree.left.push_back(static_cast<int>(tree.leaf_probs.size()));
        tree.right.push_back(-1);
        tree.leaf_probs.push_back(std::move(probs));
        return node;
    }

    static double gini(const std::vector<double>& class_w, double total) {
        if (total <= 0) return 0.0;
        double g = 1.0;
        for (const double w : class_w) g -= (w / total) * (w / total);
        return g;
    }

    // Best split over all features; returns false when no admissible split
    // improves on a leaf.
    bool find_split(const std::vector<size_t>& idx, int& best_f, double& best_t) {
        const int d = data.feature_dim();
        double best_impurity = std::numeric_limits<double>::max();
        best_f = -1;
        std::vector<size_t> order(idx);
        std::vector<double> left_w(n_classes), right_w(n_classes);
        for (int f = 0; f < d; ++f) {
            std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
                const double va = data.instances[a].features[f];
                const double vb = data.instances[b].features[f];
                return va != vb ? va < vb : a < b;
            });
            std::fill(left_w.begin(), left_w.end(), 0.0);
            std::fill(right_w.begin(), right_w.end(), 0.0);
            double total = 0;
            for (const size_t i : order) {
                right_w[data.instances[i].label] += weights[i];
                total += weights[i];
            }
            double lw = 0;
            for (size_t k = 0; k + 1 < order.size(); ++k) {
                const size_t i = order[k];
                const double w = weights[i];
                left_w[data.instances[i].label] += w;
                right_w[data.instances[i].label] -= w;
                lw += w;
                const double va = data.instances[i].features[f];
                const double vb = data.instances[order[k + 1]].features[f];
                if (va == vb) continue;
                if (lw < min_leaf_weight || total - lw < min_leaf_weight) continue;
                const double impurity =
                    lw * gini(left_w, lw) + (total - lw) * gini(right_w, total - lw);
                if (impurity + 1e-12 < best_impurity) {
                    best_impurity = impurity;
                    best_f = f;
                    best_t = (va + vb) / 2.0;
                }
            }
        }
        return best_f >= 0;
    }

    int build(const std::vector<size_t>& idx, int depth) {
        bool pure = true;
        for (size_t k = 1; k < idx.size() && pure; ++k)
            pure = data.instances[idx[k]].label == data.instances[idx[0]].label;
        if (pure || depth >= cfg.max_depth) return make_leaf(idx);

        int f;
        double t;
        if (!find_split(idx, f, t)) return make_leaf(idx);

        std::vector<size_t> li, ri;
        for (const size_t i : idx)
            (data.instances[i].features[f] < t ? li : ri).push_back(i);

        const int node = static_cast<int>(tree.feature.size());
        tree.feature.push_back(f);
        tree.threshold.push_back(t);
        tree.left.push_back(-1);
        tree.right.push_back(-1);
        const int l = build(li, depth + 1);
        const int r = build(ri, depth + 1);
        tree.left[node] = l;
        tree.right[node] = r;
        return node;
    }
};

}  // namespace

DecisionTree train_tree(const Dataset& data, const std::vector<double>& weights,
                        const TreeConfig& cfg, int n_classes) {
    if (data.size() == 0) throw std::invalid_argument("train_tree: empty dataset");
    if (weights.size() != data.size())
        throw std::invalid_argument("train_tree: weights/instances length mismatch");
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(total > 0)) throw std::invalid_argument("train_tree: weights must sum > 0");

    Builder b{data, weights, cfg, n_classes, cfg.min_leaf_fraction * total, {}};
    b.tree.n_classes = n_classes;
    std::vector<size_t> idx(data.size());
    std::iota(idx.begin(), idx.end(), 0);
    b.build(idx, 0);
    return std::move(b.tree);
}

}  // namespace rseg
