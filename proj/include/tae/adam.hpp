#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tae/matrix.hpp"

namespace tae {

struct AdamConfig {
    double learning_rate = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Adam with bias-corrected moments. One instance owns the moment buffers for a
/// fixed list of parameter buffers; the buffer shapes are captured at construction.
class Adam {
public:
    Adam(AdamConfig config, std::span<const std::size_t> buffer_sizes);

    /// Applies one update. Throws TrainingError, leaving params and state untouched,
    /// if any gradient entry is non-finite.
    void step(std::span<const std::span<double>> params,
              std::span<const std::span<const double>> grads);

    std::size_t steps_taken() const { return step_; }
    const AdamConfig& config() const { return config_; }

private:
    AdamConfig config_;
    std::size_t step_ = 0;
    std::vector<Vector> first_;
    std::vector<Vector> second_;
};

}  // namespace tae
