#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tae/data.hpp"
#include "tae/kernels.hpp"
#include "tae/nn.hpp"
#include "tae/pca.hpp"
#include "tae/training.hpp"
#include "tae/transform.hpp"

namespace tae {

/// encoder: x -> e, hermaphrodite: z -> x_hat, decoder: x or x_hat -> z_hat.
struct TwinAutoEncoder {
    std::size_t input_dim = 0;
    std::size_t latent_dim = 0;
    Mlp encoder;
    Mlp hermaphrodite;
    Mlp decoder;
    std::optional<PcaModel> pca;
    std::optional<TransformPlan> plan;

    /// Encoder, hermaphrodite, decoder buffers in that order.
    std::vector<std::span<double>> parameters();

    bool operator==(const TwinAutoEncoder&) const = default;
};

struct TaeGradients {
    MlpGradients encoder;
    MlpGradients hermaphrodite;
    MlpGradients decoder;
    LossBreakdown loss;

    void zero();
    void add(const TaeGradients& other);
    void scale(double factor);
    std::vector<std::span<const double>> parameters() const;
};

/// Untrained model with one hidden layer per subnetwork and linear outputs.
TwinAutoEncoder build_tae(std::size_t input_dim, const TrainConfig& config, Rng& rng);

/// Fits PCA (k = latent_dim) on X and freezes the transformation plan.
void fit_plan(TwinAutoEncoder& model, const Matrix& X, std::span<const int> labels, double scale,
              CenterRule rule = CenterRule::MeanOfClassMeans);

struct TaeForward {
    ForwardCache encoder;            ///< output: e
    Vector z;                        ///< e + v[class]
    ForwardCache hermaphrodite;      ///< output: x_hat
    ForwardCache decoder_from_xhat;  ///< output: decoder(x_hat)
    ForwardCache decoder_from_x;     ///< output: decoder(x)

    const Vector& latent() const { return encoder.output(); }
    const Vector& x_hat() const { return hermaphrodite.output(); }
    const Vector& z_hat_from_xhat() const { return decoder_from_xhat.output(); }
    const Vector& z_hat_from_x() const { return decoder_from_x.output(); }
};

TaeForward tae_forward(const TwinAutoEncoder& model, std::span<const double> x, int class_id);

/// Loss terms of one sample (not averaged).
LossBreakdown tae_sample_loss(const TaeForward& fwd, std::span<const double> x,
                              std::span<const double> class_mean);

/// Mean loss over a set of forward results.
LossBreakdown tae_loss(std::span<const TaeForward> batch, std::span<const Vector> inputs,
                       std::span<const int> labels, const TransformPlan& plan);

/// Mean loss over all rows of a labelled dataset.
LossBreakdown evaluate_loss(const TwinAutoEncoder& model, const Dataset& data,
                            kernels::Exec exec = kernels::Exec::Parallel);

TaeGradients make_gradients(const TwinAutoEncoder& model);

/// Gradient of the mean batch loss; `grads` is overwritten.
LossBreakdown batch_gradients(const TwinAutoEncoder& model, const Dataset& data,
                              std::span<const std::size_t> batch, kernels::Exec exec,
                              TaeGradients& grads);

/// Splits off the validation part, fits the plan on the rest, and trains.
TrainResult<TwinAutoEncoder> train_tae(const Dataset& data, const TrainConfig& config);

/// Reconstruction representation: decoder(x). Never touches the plan.
Vector infer_representation(const TwinAutoEncoder& model, std::span<const double> x);
Matrix infer_representation(const TwinAutoEncoder& model, const Matrix& X,
                            kernels::Exec exec = kernels::Exec::Parallel);

/// Latent representation: encoder(x).
Vector encode(const TwinAutoEncoder& model, std::span<const double> x);
Matrix encode(const TwinAutoEncoder& model, const Matrix& X,
              kernels::Exec exec = kernels::Exec::Parallel);

}  // namespace tae
