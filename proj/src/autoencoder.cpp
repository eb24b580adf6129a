#include "tae/autoencoder.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

#include "tae/errors.hpp"

namespace tae {

std::vector<std::span<double>> AutoEncoder::parameters() {
    std::vector<std::span<double>> out = encoder.parameters();
    for (auto p : decoder.parameters()) out.push_back(p);
    return out;
}

void AeGradients::zero() {
    encoder.zero();
    decoder.zero();
    loss = {};
}

void AeGradients::add(const AeGradients& other) {
    encoder.add(other.encoder);
    decoder.add(other.decoder);
    loss.add(other.loss);
}

void AeGradients::scale(double factor) {
    encoder.scale(factor);
    decoder.scale(factor);
    loss.scale(factor);
}

std::vector<std::span<const double>> AeGradients::parameters() const {
    std::vector<std::span<const double>> out = encoder.parameters();
    for (auto p : decoder.parameters()) out.push_back(p);
    return out;
}

AutoEncoder build_ae(std::size_t input_dim, const TrainConfig& config, Rng& rng) {
    if (input_dim < 1) throw std::invalid_argument("build_ae: input dimension must be >= 1");
    const std::size_t latent = config.latent_dim ? config.latent_dim : default_latent_dim(input_dim);
    if (latent > input_dim) {
        throw std::invalid_argument("latent dimension " + std::to_string(latent) +
                                    " exceeds input dimension " + std::to_string(input_dim));
    }
    const std::size_t fallback = default_hidden_width(input_dim, latent);
    const std::size_t h1 = config.hidden_encoder ? config.hidden_encoder : fallback;
    const std::size_t h2 = config.hidden_hermaphrodite ? config.hidden_hermaphrodite : fallback;

    AutoEncoder m;
    m.input_dim = input_dim;
    m.latent_dim = latent;
    const std::size_t enc[] = {input_dim, h1, latent};
    const std::size_t dec[] = {latent, h2, input_dim};
    m.encoder = Mlp::make(enc, config.activation, Activation::Identity, rng);
    m.decoder = Mlp::make(dec, config.activation, Activation::Identity, rng);
    return m;
}

AeGradients make_gradients(const AutoEncoder& model) {
    return {MlpGradients(model.encoder), MlpGradients(model.decoder), {}};
}

LossBreakdown batch_gradients(const AutoEncoder& model, const Dataset& data,
                              std::span<const std::size_t> batch, kernels::Exec exec,
                              AeGradients& grads) {
    if (batch.empty()) throw std::invalid_argument("batch_gradients: empty batch");
    if (data.dim() != model.input_dim) throw ShapeError("batch_gradients: feature count mismatch");
    grads.zero();
    kernels::accumulate(exec, batch.size(), grads, [&](std::size_t i, AeGradients& acc) {
        const auto x = data.X.row(batch[i]);
        const ForwardCache enc = model.encoder.forward(x);
        const ForwardCache dec = model.decoder.forward(enc.output());
        const double err = squared_distance(x, dec.output());
        acc.loss.recon_x += err;
        acc.loss.total += err;

        Vector g(x.size());
        for (std::size_t k = 0; k < g.size(); ++k) g[k] = 2.0 * (dec.output()[k] - x[k]);
        const Vector g_latent = model.decoder.backward(dec, g, acc.decoder);
        model.encoder.backward(enc, g_latent, acc.encoder);
    });
    grads.scale(1.0 / static_cast<double>(batch.size()));
    return grads.loss;
}

namespace {

struct LossSum {
    LossBreakdown loss;
    void zero() { loss = {}; }
    void add(const LossSum& o) { loss.add(o.loss); }
};

}  // namespace

LossBreakdown evaluate_loss(const AutoEncoder& model, const Dataset& data, kernels::Exec exec) {
    if (data.size() == 0) throw std::invalid_argument("evaluate_loss: empty dataset");
    if (data.dim() != model.input_dim) throw ShapeError("evaluate_loss: feature count mismatch");
    LossSum sum;
    kernels::accumulate(exec, data.size(), sum, [&](std::size_t r, LossSum& acc) {
        const auto x = data.X.row(r);
        const double err = squared_distance(x, ae_reconstruct(model, x));
        acc.loss.recon_x += err;
        acc.loss.total += err;
    });
    sum.loss.scale(1.0 / static_cast<double>(data.size()));
    return sum.loss;
}

TrainResult<AutoEncoder> train_ae(const Dataset& data, const TrainConfig& config) {
    config.validate();
    if (data.size() < 2) throw std::invalid_argument("train_ae: need at least 2 samples");

    Rng rng(config.seed);
    const std::uint64_t split_seed = rng();
    Dataset train;
    Dataset validation;
    if (data.labels.size() == data.size()) {
        std::tie(train, validation) = stratified_split(data, config.validation_fraction, split_seed);
    } else {
        std::vector<int> single(data.size(), 0);
        auto [a, b] = stratified_split_indices(single, config.validation_fraction, split_seed);
        train = data.subset(a);
        validation = data.subset(b);
    }
    AutoEncoder model = build_ae(data.dim(), config, rng);
    return detail::run_training(std::move(model), train, validation, config, rng);
}

Vector ae_encode(const AutoEncoder& model, std::span<const double> x) { return model.encoder.predict(x); }

Matrix ae_encode(const AutoEncoder& model, const Matrix& X, kernels::Exec exec) {
    if (X.cols() != model.input_dim) {
        throw ShapeError("input has " + std::to_string(X.cols()) + " features, model expects " +
                         std::to_string(model.input_dim));
    }
    return kernels::map_rows(exec, X, model.latent_dim,
                             [&](std::span<const double> x) { return model.encoder.predict(x); });
}

Vector ae_reconstruct(const AutoEncoder& model, std::span<const double> x) {
    return model.decoder.predict(model.encoder.predict(x));
}

}  // namespace tae
