#include "rseg/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rseg {

int Dataset::n_classes() const {
    int n = 0;
    for (const auto& inst : instances) n = std::max(n, inst.label + 1);
    return n;
}

std::vector<size_t> Dataset::class_counts(int n_classes) const {
    std::vector<size_t> counts(n_classes, 0);
    for (const auto& inst : instances) {
        if (inst.label < 0 || inst.label >= n_classes)
            throw std::invalid_argument("Dataset: label out of range");
        ++counts[inst.label];
    }
    return counts;
}

void Dataset::validate() const {
    if (instances.empty()) return;
    const size_t d = instances[0].features.size();
    for (const auto& inst : instances) {
        if (inst.features.size() != d)
            throw std::invalid_argument("Dataset: inconsistent feature dimensions");
        if (inst.label < 0)
            throw std::invalid_argument("Dataset: negative label");
    }
}

Dataset load_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");

    // Header decides whether a label column is present.
    bool has_label = false;
    size_t n_cols = 0;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            ++n_cols;
            if (cell == "label") has_label = true;
        }
    }
    if (n_cols == 0) throw std::runtime_error(path + ": empty header");

    Dataset ds;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        Instance inst;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != n_cols)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": wrong column count");
        const size_t n_feat = has_label ? n_cols - 1 : n_cols;
        for (size_t i = 0; i < n_feat; ++i)
            inst.features.push_back(std::stod(cells[i]));
        if (has_label) inst.label = std::stoi(cells.back());
        ds.instances.push_back(std::move(inst));
    }
    ds.validate();
    return ds;
}

void save_dataset_csv(const Dataset& ds, const std::string& path, bool with_labels) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    const int d = ds.feature_dim();
    for (int i = 0; i < d; ++i) out << (i ? ",f" : "f") << i;
    if (with_labels) out << (d ? ",label" : "label");
    out << "\n";
    char buf[40];
    for (const auto& inst : ds.instances) {
        for (size_t i = 0; i < inst.features.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", inst.features[i]);
            out << (i ? "," : "") << buf;
        }
        if (with_labels) out << (inst.features.empty() ? "" : ",") << inst.label;
        out << "\n";
    }
    if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace rseg
