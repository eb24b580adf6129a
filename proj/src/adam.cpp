#include "tae/adam.hpp"

#include <cmath>
#include <string>

#include "tae/errors.hpp"

namespace tae {

Adam::Adam(AdamConfig config, std::span<const std::size_t> buffer_sizes) : config_(config) {
    for (std::size_t n : buffer_sizes) {
        first_.emplace_back(n, 0.0);
        second_.emplace_back(n, 0.0);
    }
}

void Adam::step(std::span<const std::span<double>> params,
                std::span<const std::span<const double>> grads) {
    if (params.size() != first_.size() || grads.size() != first_.size()) {
        throw ShapeError("adam: expected " + std::to_string(first_.size()) + " buffers");
    }
    for (std::size_t b = 0; b < grads.size(); ++b) {
        if (params[b].size() != first_[b].size() || grads[b].size() != first_[b].size()) {
            throw ShapeError("adam: buffer " + std::to_string(b) + " size mismatch");
        }
        if (!all_finite(grads[b])) {
            throw TrainingError("adam: non-finite gradient in buffer " + std::to_string(b) +
                                " at step " + std::to_string(step_ + 1));
        }
    }

    ++step_;
    const double t = static_cast<double>(step_);
    const double c1 = 1.0 - std::pow(config_.beta1, t);
    const double c2 = 1.0 - std::pow(config_.beta2, t);
    for (std::size_t b = 0; b < params.size(); ++b) {
        auto p = params[b];
        auto g = grads[b];
        auto& m = first_[b];
        auto& v = second_[b];
        for (std::size_t i = 0; i < p.size(); ++i) {
            m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * g[i];
            v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * g[i] * g[i];
            const double m_hat = m[i] / c1;
            const double v_hat = v[i] / c2;
            p[i] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
        }
    }
}

}  // namespace tae
