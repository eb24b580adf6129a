#include "tae/twin_autoencoder.hpp"

#include <stdexcept>
#include <string>

#include "tae/errors.hpp"

namespace tae {

std::vector<std::span<double>> TwinAutoEncoder::parameters() {
    std::vector<std::span<double>> out = encoder.parameters();
    for (auto p : hermaphrodite.parameters()) out.push_back(p);
    for (auto p : decoder.parameters()) out.push_back(p);
    return out;
}

void TaeGradients::zero() {
    encoder.zero();
    hermaphrodite.zero();
    decoder.zero();
    loss = {};
}

void TaeGradients::add(const TaeGradients& other) {
    encoder.add(other.encoder);
    hermaphrodite.add(other.hermaphrodite);
    decoder.add(other.decoder);
    loss.add(other.loss);
}

void TaeGradients::scale(double factor) {
    encoder.scale(factor);
    hermaphrodite.scale(factor);
    decoder.scale(factor);
    loss.scale(factor);
}

std::vector<std::span<const double>> TaeGradients::parameters() const {
    std::vector<std::span<const double>> out = encoder.parameters();
    for (auto p : hermaphrodite.parameters()) out.push_back(p);
    for (auto p : decoder.parameters()) out.push_back(p);
    return out;
}

TwinAutoEncoder build_tae(std::size_t input_dim, const TrainConfig& config, Rng& rng) {
    if (input_dim < 1) throw std::invalid_argument("build_tae: input dimension must be >= 1");
    const std::size_t latent = config.latent_dim ? config.latent_dim : default_latent_dim(input_dim);
    if (latent > input_dim) {
        throw std::invalid_argument("latent dimension " + std::to_string(latent) +
                                    " exceeds input dimension " + std::to_string(input_dim) +
                                    " (PCA cannot produce more components than features)");
    }
    const std::size_t fallback = default_hidden_width(input_dim, latent);
    const std::size_t h1 = config.hidden_encoder ? config.hidden_encoder : fallback;
    const std::size_t h2 = config.hidden_hermaphrodite ? config.hidden_hermaphrodite : fallback;
    const std::size_t h3 = config.hidden_decoder ? config.hidden_decoder : fallback;

    TwinAutoEncoder m;
    m.input_dim = input_dim;
    m.latent_dim = latent;
    const std::size_t enc[] = {input_dim, h1, latent};
    const std::size_t herm[] = {latent, h2, input_dim};
    const std::size_t dec[] = {input_dim, h3, latent};
    m.encoder = Mlp::make(enc, config.activation, Activation::Identity, rng);
    m.hermaphrodite = Mlp::make(herm, config.activation, Activation::Identity, rng);
    m.decoder = Mlp::make(dec, config.activation, Activation::Identity, rng);
    return m;
}

void fit_plan(TwinAutoEncoder& model, const Matrix& X, std::span<const int> labels, double scale,
              CenterRule rule) {
    if (X.cols() != model.input_dim) {
        throw ShapeError("fit_plan: data has " + std::to_string(X.cols()) + " features, model expects " +
                         std::to_string(model.input_dim));
    }
    PcaModel pca = fit_pca(X, model.latent_dim);
    model.plan = build_transform_plan(pca_project(pca, X), labels, scale, rule);
    model.pca = std::move(pca);
}

TaeForward tae_forward(const TwinAutoEncoder& model, std::span<const double> x, int class_id) {
    if (!model.plan) throw std::logic_error("tae_forward: transformation plan has not been fitted");
    TaeForward f;
    f.encoder = model.encoder.forward(x);
    f.z = apply_transform(*model.plan, f.encoder.output(), class_id);
    f.hermaphrodite = model.hermaphrodite.forward(f.z);
    f.decoder_from_xhat = model.decoder.forward(f.hermaphrodite.output());
    f.decoder_from_x = model.decoder.forward(x);
    return f;
}

LossBreakdown tae_sample_loss(const TaeForward& fwd, std::span<const double> x,
                              std::span<const double> class_mean) {
    LossBreakdown l;
    l.recon_x = squared_distance(x, fwd.x_hat());
    l.recon_z_from_xhat = squared_distance(fwd.z, fwd.z_hat_from_xhat());
    l.recon_z_from_x = squared_distance(fwd.z, fwd.z_hat_from_x());
    l.shrink = squared_distance(fwd.latent(), class_mean);
    l.total = l.recon_x + l.recon_z_from_xhat + l.recon_z_from_x + l.shrink;
    return l;
}

LossBreakdown tae_loss(std::span<const TaeForward> batch, std::span<const Vector> inputs,
                       std::span<const int> labels, const TransformPlan& plan) {
    if (batch.empty()) throw std::invalid_argument("tae_loss: empty batch");
    if (inputs.size() != batch.size() || labels.size() != batch.size()) {
        throw ShapeError("tae_loss: batch, inputs and labels differ in length");
    }
    LossBreakdown sum;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        sum.add(tae_sample_loss(batch[i], inputs[i], plan.mean_of(labels[i])));
    }
    sum.scale(1.0 / static_cast<double>(batch.size()));
    return sum;
}

namespace {

// Adds one sample's loss and parameter gradients into `acc`.
void sample_gradients(const TwinAutoEncoder& model, std::span<const double> x, int label,
                      TaeGradients& acc) {
    const TaeForward f = tae_forward(model, x, label);
    const Vector& mu = model.plan->mean_of(label);
    acc.loss.add(tae_sample_loss(f, x, mu));

    const std::size_t dz = model.latent_dim;
    const std::size_t dx = model.input_dim;

    Vector g_zhat_xhat(dz);
    Vector g_zhat_x(dz);
    for (std::size_t i = 0; i < dz; ++i) {
        g_zhat_xhat[i] = 2.0 * (f.z_hat_from_xhat()[i] - f.z[i]);
        g_zhat_x[i] = 2.0 * (f.z_hat_from_x()[i] - f.z[i]);
    }
    Vector g_xhat = model.decoder.backward(f.decoder_from_xhat, g_zhat_xhat, acc.decoder);
    model.decoder.backward(f.decoder_from_x, g_zhat_x, acc.decoder);
    for (std::size_t i = 0; i < dx; ++i) g_xhat[i] += 2.0 * (f.x_hat()[i] - x[i]);

    const Vector g_z = model.hermaphrodite.backward(f.hermaphrodite, g_xhat, acc.hermaphrodite);
    Vector g_e(dz);
    for (std::size_t i = 0; i < dz; ++i) {
        // z enters both latent reconstruction terms as the target.
        g_e[i] = g_z[i] - g_zhat_xhat[i] - g_zhat_x[i] + 2.0 * (f.latent()[i] - mu[i]);
    }
    model.encoder.backward(f.encoder, g_e, acc.encoder);
}

}  // namespace

TaeGradients make_gradients(const TwinAutoEncoder& model) {
    return {MlpGradients(model.encoder), MlpGradients(model.hermaphrodite), MlpGradients(model.decoder), {}};
}

LossBreakdown batch_gradients(const TwinAutoEncoder& model, const Dataset& data,
                              std::span<const std::size_t> batch, kernels::Exec exec,
                              TaeGradients& grads) {
    if (batch.empty()) throw std::invalid_argument("batch_gradients: empty batch");
    if (!model.plan) throw std::logic_error("batch_gradients: transformation plan has not been fitted");
    if (data.dim() != model.input_dim) throw ShapeError("batch_gradients: feature count mismatch");
    for (std::size_t row : batch) model.plan->index_of(data.labels.at(row));
    grads.zero();
    kernels::accumulate(exec, batch.size(), grads, [&](std::size_t i, TaeGradients& acc) {
        const std::size_t row = batch[i];
        sample_gradients(model, data.X.row(row), data.labels[row], acc);
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

LossBreakdown evaluate_loss(const TwinAutoEncoder& model, const Dataset& data, kernels::Exec exec) {
    if (data.size() == 0) throw std::invalid_argument("evaluate_loss: empty dataset");
    if (!model.plan) throw std::logic_error("evaluate_loss: transformation plan has not been fitted");
    if (data.dim() != model.input_dim) throw ShapeError("evaluate_loss: feature count mismatch");
    if (data.labels.size() != data.size()) throw std::invalid_argument("evaluate_loss: dataset is unlabeled");
    for (int label : data.labels) model.plan->index_of(label);
    LossSum sum;
    kernels::accumulate(exec, data.size(), sum, [&](std::size_t r, LossSum& acc) {
        const auto x = data.X.row(r);
        const int label = data.labels[r];
        acc.loss.add(tae_sample_loss(tae_forward(model, x, label), x, model.plan->mean_of(label)));
    });
    sum.loss.scale(1.0 / static_cast<double>(data.size()));
    return sum.loss;
}

TrainResult<TwinAutoEncoder> train_tae(const Dataset& data, const TrainConfig& config) {
    config.validate();
    if (data.labels.size() != data.size()) throw std::invalid_argument("train_tae: dataset is unlabeled");
    const auto counts = data.class_counts();
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] < 2) {
            throw std::invalid_argument("train_tae: class '" + data.class_names[c] +
                                        "' needs at least 2 samples");
        }
    }

    Rng rng(config.seed);
    const auto [train, validation] = stratified_split(data, config.validation_fraction, rng());
    TwinAutoEncoder model = build_tae(data.dim(), config, rng);
    fit_plan(model, train.X, train.labels, config.scale, config.center_rule);
    return detail::run_training(std::move(model), train, validation, config, rng);
}

Vector infer_representation(const TwinAutoEncoder& model, std::span<const double> x) {
    return model.decoder.predict(x);
}

Matrix infer_representation(const TwinAutoEncoder& model, const Matrix& X, kernels::Exec exec) {
    if (X.cols() != model.input_dim) {
        throw ShapeError("input has " + std::to_string(X.cols()) + " features, model expects " +
                         std::to_string(model.input_dim));
    }
    return kernels::map_rows(exec, X, model.latent_dim,
                             [&](std::span<const double> x) { return model.decoder.predict(x); });
}

Vector encode(const TwinAutoEncoder& model, std::span<const double> x) { return model.encoder.predict(x); }

Matrix encode(const TwinAutoEncoder& model, const Matrix& X, kernels::Exec exec) {
    if (X.cols() != model.input_dim) {
        throw ShapeError("input has " + std::to_string(X.cols()) + " features, model expects " +
                         std::to_string(model.input_dim));
    }
    return kernels::map_rows(exec, X, model.latent_dim,
                             [&](std::span<const double> x) { return model.encoder.predict(x); });
}

}  // namespace tae
