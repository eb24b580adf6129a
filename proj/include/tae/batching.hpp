#pragma once

#include <cstddef>
#include <vector>

#include "tae/nn.hpp"

namespace tae {

/// One epoch worth of shuffled index batches covering 0..n-1 exactly once.
/// The final batch is short when batch_size does not divide n.
std::vector<std::vector<std::size_t>> minibatches(std::size_t n, std::size_t batch_size, Rng& rng);

}  // namespace tae
