#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "tae/adam.hpp"
#include "tae/batching.hpp"
#include "tae/data.hpp"
#include "tae/errors.hpp"
#include "tae/kernels.hpp"
#include "tae/nn.hpp"
#include "tae/transform.hpp"

namespace tae {

struct TrainConfig {
    double learning_rate = 1e-4;
    std::size_t epochs = 5000;
    std::size_t batch_size = 100;
    std::size_t early_stop_window = 10;
    double early_stop_threshold = 1.0;
    double validation_fraction = 0.30;
    double scale = 0.5;              ///< S of the transformation operator
    std::size_t latent_dim = 0;      ///< 0 picks round(sqrt(d_x))
    std::size_t hidden_encoder = 0;  ///< 0 picks the default width
    std::size_t hidden_hermaphrodite = 0;
    std::size_t hidden_decoder = 0;
    Activation activation = Activation::Relu;
    CenterRule center_rule = CenterRule::MeanOfClassMeans;
    std::uint64_t seed = 0;
    kernels::Exec exec = kernels::Exec::Parallel;

    /// Throws std::invalid_argument on out-of-range values.
    void validate() const;
};

std::size_t default_latent_dim(std::size_t input_dim);
/// Hidden width for a subnetwork bridging input_dim and latent_dim.
std::size_t default_hidden_width(std::size_t input_dim, std::size_t latent_dim);

/// Per-sample squared errors summed over coordinates, averaged over samples.
struct LossBreakdown {
    double recon_x = 0.0;            ///< |x - x_hat|^2
    double recon_z_from_xhat = 0.0;  ///< |z - decoder(x_hat)|^2
    double recon_z_from_x = 0.0;     ///< |z - decoder(x)|^2
    double shrink = 0.0;             ///< |e - mu_c|^2
    double total = 0.0;

    void add(const LossBreakdown& o) {
        recon_x += o.recon_x;
        recon_z_from_xhat += o.recon_z_from_xhat;
        recon_z_from_x += o.recon_z_from_x;
        shrink += o.shrink;
        total += o.total;
    }
    void scale(double f) {
        recon_x *= f;
        recon_z_from_xhat *= f;
        recon_z_from_x *= f;
        shrink *= f;
        total *= f;
    }
    bool finite() const {
        return std::isfinite(recon_x) && std::isfinite(recon_z_from_xhat) &&
               std::isfinite(recon_z_from_x) && std::isfinite(shrink) && std::isfinite(total);
    }
};

struct EpochRecord {
    std::size_t epoch = 0;  ///< 1-based
    LossBreakdown train;
    LossBreakdown validation;
};

template <class Model>
struct TrainResult {
    Model model;
    std::vector<EpochRecord> history;
    std::size_t best_epoch = 0;  ///< 0 means the initial weights were best
    bool stopped_early = false;
};

namespace detail {

std::string describe(const LossBreakdown& l);

/// Mini-batch Adam with validation-based early stopping and best-snapshot
/// selection. `Model` provides parameters(); the free functions
/// make_gradients, batch_gradients and evaluate_loss are found by overload.
template <class Model>
TrainResult<Model> run_training(Model model, const Dataset& train, const Dataset& validation,
                                const TrainConfig& config, Rng& rng) {
    TrainResult<Model> result{model, {}, 0, false};
    if (config.epochs == 0) return result;

    auto grads = make_gradients(model);
    std::vector<std::size_t> sizes;
    for (auto p : model.parameters()) sizes.push_back(p.size());
    Adam adam({config.learning_rate}, sizes);

    auto check = [](const LossBreakdown& l, const char* where, std::size_t epoch) {
        if (!l.finite()) {
            throw TrainingError(std::string("non-finite ") + where + " loss at epoch " +
                                std::to_string(epoch) + ": " + describe(l));
        }
    };

    std::vector<double> val_totals;
    val_totals.push_back(evaluate_loss(model, validation, config.exec).total);
    double best = val_totals.back();

    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        for (const auto& batch : minibatches(train.size(), config.batch_size, rng)) {
            const LossBreakdown batch_loss = batch_gradients(model, train, batch, config.exec, grads);
            check(batch_loss, "batch", epoch);
            adam.step(model.parameters(), grads.parameters());
        }
        EpochRecord rec{epoch, evaluate_loss(model, train, config.exec),
                        evaluate_loss(model, validation, config.exec)};
        check(rec.train, "training", epoch);
        check(rec.validation, "validation", epoch);
        result.history.push_back(rec);
        val_totals.push_back(rec.validation.total);
        spdlog::debug("epoch {} train {} val {}", epoch, describe(rec.train), describe(rec.validation));

        if (rec.validation.total < best) {
            best = rec.validation.total;
            result.model = model;
            result.best_epoch = epoch;
        }
        if (epoch >= config.early_stop_window) {
            const double delta =
                std::abs(val_totals[epoch] - val_totals[epoch - config.early_stop_window]);
            if (delta < config.early_stop_threshold) {
                result.stopped_early = epoch < config.epochs;
                spdlog::info("early stop at epoch {} (|delta val loss| = {:.6g})", epoch, delta);
                break;
            }
        }
    }
    return result;
}

}  // namespace detail

}  // namespace tae
