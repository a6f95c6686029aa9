#include "rseg/boosting.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "rseg/rng.hpp"
#include "rseg/sampling.hpp"

namespace rseg {

namespace {

constexpr double kEpsFloor = 1e-10;

// Per-round tree fit + SAMME weight update shared by both trainers. The
// sampler hook supplies this round's synthetic instances (may be empty).
template <typename Sampler>
BoostModel boost_train(const Dataset& data, const BoostConfig& cfg, const char* tag,
                       Sampler make_synthetics) {
    data.validate();
    const size_t n = data.size();
    const int k = data.n_classes();
    if (n == 0 || k < 2)
        throw std::invalid_argument("boosting: need a non-empty dataset with >= 2 classes");

    std::vector<double> weights(n, 1.0 / n);
    BoostModel model;
    model.algorithm = tag;
    model.n_classes = k;
    model.feature_dim = data.feature_dim();

    for (int round = 0; round < cfg.n_rounds; ++round) {
        Dataset fit_data = data;
        std::vector<double> fit_weights = weights;
        make_synthetics(round, weights, fit_data, fit_weights);

        DecisionTree tree = train_tree(fit_data, fit_weights, cfg.tree, k);

        // Weighted error over the real instances only.
        double eps = 0;
        std::vector<char> wrong(n, 0);
        for (size_t i = 0; i < n; ++i) {
            wrong[i] = tree.predict(data.instances[i].features) != data.instances[i].label;
            if (wrong[i]) eps += weights[i];
        }

        if (eps >= 1.0 - 1.0 / k) continue;  // worse than chance: skip round

        const double eps_c = std::max(eps, kEpsFloor);
        const double beta = std::log((1.0 - eps_c) / eps_c) + std::log(k - 1.0);
        model.rounds.push_back({std::move(tree), beta});

        if (eps <= 0.0) {
            model.weight_sum_trace.push_back(1.0);
            break;  // perfect round, nothing left to reweight
        }

        double sum = 0;
        for (size_t i = 0; i < n; ++i) {
            if (wrong[i]) weights[i] *= std::exp(beta);
            sum += weights[i];
        }
        for (auto& w : weights) w /= sum;
        model.weight_sum_trace.push_back(
            std::accumulate(weights.begin(), weights.end(), 0.0));
    }

    if (model.rounds.empty())
        throw std::runtime_error("boosting: every round was skipped (error >= 1 - 1/K)");
    return model;
}

}  // namespace

BoostModel adaboost_train(const Dataset& data, const BoostConfig& cfg) {
    return boost_train(data, cfg, "adaboost",
                       [](int, const std::vector<double>&, Dataset&, std::vector<double>&) {});
}

BoostModel ramoboost_train(const Dataset& data, const BoostConfig& cfg,
                           const RamoConfig& ramo, std::mt19937_64& rng) {
    data.validate();
    const size_t n = data.size();
    const int k_classes = data.n_classes();
    if (n == 0 || k_classes < 2)
        throw std::invalid_argument("boosting: need a non-empty dataset with >= 2 classes");
    if (ramo.k1 < 1 || ramo.k2 < 1 || static_cast<size_t>(ramo.k1) >= n ||
        static_cast<size_t>(ramo.k2) >= n)
        throw std::invalid_argument("ramoboost: need 1 <= k1, k2 < dataset size");

    const auto counts = data.class_counts(k_classes);
    const size_t n_maj = *std::max_element(counts.begin(), counts.end());
    std::vector<double> deficits(k_classes, 0.0);
    long total_deficit = 0;
    for (int c = 0; c < k_classes; ++c)
        if (counts[c] > 0) {
            deficits[c] = static_cast<double>(n_maj - counts[c]);
            total_deficit += n_maj - counts[c];
        }

    long n_syn = ramo.n_syn_per_round;
    if (n_syn < 0) n_syn = std::min<long>(total_deficit, static_cast<long>(n));

    if (n_syn == 0 || total_deficit == 0)
        return boost_train(
            data, cfg, "ramoboost",
            [](int, const std::vector<double>&, Dataset&, std::vector<double>&) {});

    // Neighborhoods are over the fixed real dataset; compute once.
    const auto knn1 = knn_indices(data, ramo.k1);
    const auto knn2 = ramo.k2 == ramo.k1 ? knn1 : knn_indices(data, ramo.k2);

    std::vector<std::vector<size_t>> class_members(k_classes);
    for (size_t i = 0; i < n; ++i)
        class_members[data.instances[i].label].push_back(i);

    std::vector<long> per_class(k_classes, 0);
    {
        std::vector<std::pair<double, size_t>> rema;
        long assigned = 0;
        for (int c = 0; c < k_classes; ++c) {
            const double exact = n_syn * deficits[c] / total_deficit;
            per_class[c] = static_cast<long>(std::floor(exact));
            assigned += per_class[c];
            rema.emplace_back(-(exact - per_class[c]), c);
        }
        std::sort(rema.begin(), rema.end());
        for (long r = 0; r < n_syn - assigned; ++r) ++per_class[rema[r % rema.size()].second];
    }

    auto sampler = [&](int round, const std::vector<double>& weights, Dataset& fit_data,
                       std::vector<double>& fit_weights) {
        const double mean_weight =
            std::accumulate(weights.begin(), weights.end(), 0.0) / weights.size();
        for (int c = 0; c < k_classes; ++c) {
            if (per_class[c] == 0) continue;
            const auto& members = class_members[c];

            // Sampling weight: (1 + majority-neighbor fraction) x boosting weight.
            std::vector<double> sample_w(members.size());
            for (size_t m = 0; m < members.size(); ++m) {
                int outside = 0;
                for (const size_t j : knn1[members[m]])
                    if (data.instances[j].label != c) ++outside;
                const double delta = static_cast<double>(outside) / ramo.k1;
                sample_w[m] = (1.0 + delta) * weights[members[m]];
            }
            const double sample_total =
                std::accumulate(sample_w.begin(), sample_w.end(), 0.0);

            for (long s = 0; s < per_class[c]; ++s) {
                // Inverse-CDF draw; kept by hand so the RNG stream is portable.
                double u = uniform01(rng) * sample_total;
                size_t m = 0;
                while (m + 1 < sample_w.size() && u >= sample_w[m]) u -= sample_w[m++];
                const size_t i = members[m];
                std::vector<size_t> partners;
                for (const size_t j : knn2[i])
                    if (data.instances[j].label == c) partners.push_back(j);

                Instance synth;
                synth.label = c;
                if (partners.empty()) {
                    synth.features = data.instances[i].features;  // lone instance
                } else {
                    const size_t j = partners[uniform_index(rng, partners.size())];
                    const double t = uniform01(rng);
                    const auto& x = data.instances[i].features;
                    const auto& xn = data.instances[j].features;
                    synth.features.resize(x.size());
                    for (size_t f = 0; f < x.size(); ++f)
                        synth.features[f] = x[f] + t * (xn[f] - x[f]);
                }
                fit_data.instances.push_back(std::move(synth));
                fit_weights.push_back(mean_weight);
            }
        }
        if (ramo.observe_round) ramo.observe_round(round, fit_data, n);
    };

    return boost_train(data, cfg, "ramoboost", sampler);
}

std::pair<int, std::vector<double>> predict(const BoostModel& model,
                                            const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != model.feature_dim)
        throw std::invalid_argument("predict: feature dimension mismatch");
    std::vector<double> scores(model.n_classes, 0.0);
    for (const auto& round : model.rounds)
        scores[round.tree.predict(x)] += round.beta;
    int best = 0;
    for (int c = 1; c < model.n_classes; ++c)
        if (scores[c] >= scores[best]) best = c;
    return {best, std::move(scores)};
}

std::string serialize_model(const BoostModel& model) {
    nlohmann::json j;
    j["version"] = 1;
    j["algorithm"] = model.algorithm;
    j["n_classes"] = model.n_classes;
    j["feature_dim"] = model.feature_dim;
    j["rounds"] = nlohmann::json::array();
    for (const auto& round : model.rounds) {
        nlohmann::json t;
        t["beta"] = round.beta;
        t["feature"] = round.tree.feature;
        t["threshold"] = round.tree.threshold;
        t["left"] = round.tree.left;
        t["right"] = round.tree.right;
        t["leaf_probs"] = round.tree.leaf_probs;
        j["rounds"].push_back(std::move(t));
    }
    return j.dump(2);
}

BoostModel deserialize_model(const std::string& json_text) {
    const auto j = nlohmann::json::parse(json_text);
    if (j.at("version").get<int>() != 1)
        throw std::runtime_error("model file: unsupported version");
    BoostModel model;
    model.algorithm = j.at("algorithm").get<std::string>();
    model.n_classes = j.at("n_classes").get<int>();
    model.feature_dim = j.at("feature_dim").get<int>();
    for (const auto& t : j.at("rounds")) {
        BoostRound round;
        round.beta = t.at("beta").get<double>();
        round.tree.n_classes = model.n_classes;
        round.tree.feature = t.at("feature").get<std::vector<int>>();
        round.tree.threshold = t.at("threshold").get<std::vector<double>>();
        round.tree.left = t.at("left").get<std::vector<int>>();
        round.tree.right = t.at("right").get<std::vector<int>>();
        round.tree.leaf_probs = t.at("leaf_probs").get<std::vector<std::vector<double>>>();
        model.rounds.push_back(std::move(round));
    }
    return model;
}

void save_model(const BoostModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << serialize_model(model) << "\n";
    if (!out) throw std::runtime_error(path + ": write failed");
}

BoostModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open");
    std::stringstream ss;
    ss << in.rdbuf();
    return deserialize_model(ss.str());
}

}  // namespace rseg
