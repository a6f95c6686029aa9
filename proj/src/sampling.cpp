#include "rseg/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rseg/rng.hpp"

namespace rseg {

std::vector<std::vector<size_t>> knn_indices(const Dataset& data, int k) {
    const size_t n = data.size();
    if (k < 1 || static_cast<size_t>(k) >= n)
        throw std::invalid_argument("knn_indices: need 1 <= k < dataset size");
    std::vector<std::vector<size_t>> result(n);
    std::vector<std::pair<double, size_t>> dist;
    for (size_t i = 0; i < n; ++i) {
        dist.clear();
        const auto& xi = data.instances[i].features;
        for (size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const auto& xj = data.instances[j].features;
            double d2 = 0;
            for (size_t f = 0; f < xi.size(); ++f) {
                const double d = xi[f] - xj[f];
                d2 += d * d;
            }
            dist.emplace_back(d2, j);
        }
        std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
        result[i].reserve(k);
        for (int t = 0; t < k; ++t) result[i].push_back(dist[t].second);
    }
    return result;
}

namespace {

// Integer allocation of `total` over nonnegative shares, largest remainder.
std::vector<long> allocate(const std::vector<double>& shares, long total) {
    const double sum = std::accumulate(shares.begin(), shares.end(), 0.0);
    std::vector<long> alloc(shares.size(), 0);
    if (total <= 0 || sum <= 0) return alloc;
    std::vector<std::pair<double, size_t>> rema;
    long assigned = 0;
    for (size_t i = 0; i < shares.size(); ++i) {
        const double exact = total * shares[i] / sum;
        alloc[i] = static_cast<long>(std::floor(exact));
        assigned += alloc[i];
        rema.emplace_back(-(exact - alloc[i]), i);  // largest remainder first
    }
    std::sort(rema.begin(), rema.end());
    for (long r = 0; r < total - assigned; ++r) ++alloc[rema[r % rema.size()].second];
    return alloc;
}

}  // namespace

Dataset adasyn_sample(const Dataset& data, double beta, int k, std::mt19937_64& rng) {
    if (!(beta > 0.0 && beta <= 1.0))
        throw std::invalid_argument("adasyn_sample: beta must be in (0, 1]");
    data.validate();
    const int n_classes = data.n_classes();
    const auto counts = data.class_counts(n_classes);
    const size_t n_maj = *std::max_element(counts.begin(), counts.end());

    Dataset out = data;
    bool any_deficit = false;
    for (int c = 0; c < n_classes; ++c)
        if (counts[c] > 0 && counts[c] < n_maj) any_deficit = true;
    if (!any_deficit) return out;

    const auto knn = knn_indices(data, k);

    for (int c = 0; c < n_classes; ++c) {
        if (counts[c] == 0 || counts[c] >= n_maj) continue;
        const long g_total =
            static_cast<long>(std::floor((n_maj - counts[c]) * beta));
        if (g_total == 0) continue;

        std::vector<size_t> members;
        for (size_t i = 0; i < data.size(); ++i)
            if (data.instances[i].label == c) members.push_back(i);

        // Difficulty: fraction of neighbors outside the class.
        std::vector<double> delta(members.size(), 0.0);
        double delta_sum = 0;
        for (size_t m = 0; m < members.size(); ++m) {
            int outside = 0;
            for (const size_t j : knn[members[m]])
                if (data.instances[j].label != c) ++outside;
            delta[m] = static_cast<double>(outside) / k;
            delta_sum += delta[m];
        }
        if (delta_sum == 0.0) delta.assign(members.size(), 1.0);  // uniform fallback

        const auto alloc = allocate(delta, g_total);

        // Same-class neighbor lists for interpolation.
        std::vector<std::vector<size_t>> same_class(members.size());
        for (size_t m = 0; m < members.size(); ++m)
            for (const size_t j : knn[members[m]])
                if (data.instances[j].label == c) same_class[m].push_back(j);

        for (size_t m = 0; m < members.size(); ++m) {
            const auto& x = data.instances[members[m]].features;
            for (long s = 0; s < alloc[m]; ++s) {
                Instance synth;
                synth.label = c;
                if (same_class[m].empty()) {
                    synth.features = x;  // lone instance: duplicate
                } else {
                    const size_t pick =
                        same_class[m][uniform_index(rng, same_class[m].size())];
                    const auto& xn = data.instances[pick].features;
                    const double u = uniform01(rng);
                    synth.features.resize(x.size());
                    for (size_t f = 0; f < x.size(); ++f)
                        synth.features[f] = x[f] + u * (xn[f] - x[f]);
                }
                out.instances.push_back(std::move(synth));
            }
        }
    }
    return out;
}

}  // namespace rseg
