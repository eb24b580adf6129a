#include "tae/training.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include <spdlog/fmt/fmt.h>

namespace tae {

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
    if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
    if (early_stop_window < 1) throw std::invalid_argument("early_stop_window must be >= 1");
    if (std::isnan(early_stop_threshold) || early_stop_threshold < 0.0) {
        throw std::invalid_argument("early_stop_threshold must be >= 0");
    }
    if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
        throw std::invalid_argument("validation_fraction must lie strictly between 0 and 1");
    }
    if (!(scale > 0.0)) throw std::invalid_argument("scale S must be > 0");
}

std::size_t default_latent_dim(std::size_t input_dim) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(input_dim)))));
}

std::size_t default_hidden_width(std::size_t input_dim, std::size_t latent_dim) {
    // Widths used for the reference dataset families.
    static const std::map<std::size_t, std::size_t> known{{115, 50}, {41, 30}, {42, 30}, {32, 20}, {24, 15}};
    if (const auto it = known.find(input_dim); it != known.end() && it->second > latent_dim) return it->second;
    const auto scaled = static_cast<std::size_t>(std::lround(0.625 * static_cast<double>(input_dim)));
    return std::max({scaled, 2 * latent_dim, std::size_t{2}});
}

namespace detail {

std::string describe(const LossBreakdown& l) {
    return fmt::format("total={:.6g} (x={:.6g} z|xhat={:.6g} z|x={:.6g} shrink={:.6g})", l.total,
                       l.recon_x, l.recon_z_from_xhat, l.recon_z_from_x, l.shrink);
}

}  // namespace detail

}  // namespace tae
