#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "tae/nn.hpp"

namespace tae::test {

/// Central finite difference of `loss` with respect to every entry of `params`,
/// perturbing in place and restoring.
inline std::vector<std::vector<double>> finite_differences(std::vector<std::span<double>> params,
                                                           const std::function<double()>& loss,
                                                           double h = 1e-5) {
    std::vector<std::vector<double>> out;
    for (auto p : params) {
        std::vector<double> g(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double keep = p[i];
            p[i] = keep + h;
            const double up = loss();
            p[i] = keep - h;
            const double down = loss();
            p[i] = keep;
            g[i] = (up - down) / (2.0 * h);
        }
        out.push_back(std::move(g));
    }
    return out;
}

/// |a - b| / max(|a|, |b|, floor); the floor keeps near-zero gradients from
/// turning round-off into large relative errors.
inline double relative_error(double a, double b, double floor = 1e-6) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace tae::test
