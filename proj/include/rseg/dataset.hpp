#pragma once

#include <string>
#include <vector>

namespace rseg {

struct Instance {
    std::vector<double> features;
    int label = 0;
};

struct Dataset {
    std::vector<Instance> instances;

    size_t size() const { return instances.size(); }
    int feature_dim() const {
        return instances.empty() ? 0 : static_cast<int>(instances[0].features.size());
    }
    /// Largest label + 1.
    int n_classes() const;
    std::vector<size_t> class_counts(int n_classes) const;

    void validate() const;  // consistent dims, labels >= 0
};

/// CSV with header f0..f{d-1},label. The label column is optional on load
/// (instances then get label 0) and controlled by with_labels on save.
Dataset load_dataset_csv(const std::string& path);
void save_dataset_csv(const Dataset& ds, const std::string& path, bool with_labels = true);

}  // namespace rseg
