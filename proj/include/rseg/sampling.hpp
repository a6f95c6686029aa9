#pragma once

#include <random>
#include <vector>

#include "rseg/dataset.hpp"

namespace rseg {

/// Indices of the k nearest neighbors (Euclidean, self excluded) of each
/// instance, over the whole dataset. Ties resolve by index order.
std::vector<std::vector<size_t>> knn_indices(const Dataset& data, int k);

/// ADASYN oversampling, extended per non-majority class: generates
/// floor((N_maj - N_c) * beta) synthetics for class c, spread over its
/// instances in proportion to their fraction of out-of-class neighbors.
/// Returns originals followed by the synthetics.
Dataset adasyn_sample(const Dataset& data, double beta, int k, std::mt19937_64& rng);

}  // namespace rseg
