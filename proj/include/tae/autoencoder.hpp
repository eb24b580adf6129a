#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tae/data.hpp"
#include "tae/kernels.hpp"
#include "tae/nn.hpp"
#include "tae/training.hpp"

namespace tae {

/// Plain reconstruction auto-encoder used as the comparison representation.
struct AutoEncoder {
    std::size_t input_dim = 0;
    std::size_t latent_dim = 0;
    Mlp encoder;  ///< d_x -> h -> latent
    Mlp decoder;  ///< latent -> h -> d_x

    std::vector<std::span<double>> parameters();

    bool operator==(const AutoEncoder&) const = default;
};

struct AeGradients {
    MlpGradients encoder;
    MlpGradients decoder;
    LossBreakdown loss;  ///< only recon_x and total are used

    void zero();
    void add(const AeGradients& other);
    void scale(double factor);
    std::vector<std::span<const double>> parameters() const;
};

AutoEncoder build_ae(std::size_t input_dim, const TrainConfig& config, Rng& rng);

AeGradients make_gradients(const AutoEncoder& model);
LossBreakdown batch_gradients(const AutoEncoder& model, const Dataset& data,
                              std::span<const std::size_t> batch, kernels::Exec exec,
                              AeGradients& grads);
LossBreakdown evaluate_loss(const AutoEncoder& model, const Dataset& data,
                            kernels::Exec exec = kernels::Exec::Parallel);

/// Unsupervised: labels are used only to stratify the validation split when present.
TrainResult<AutoEncoder> train_ae(const Dataset& data, const TrainConfig& config);

Vector ae_encode(const AutoEncoder& model, std::span<const double> x);
Matrix ae_encode(const AutoEncoder& model, const Matrix& X, kernels::Exec exec = kernels::Exec::Parallel);
Vector ae_reconstruct(const AutoEncoder& model, std::span<const double> x);

}  // namespace tae
