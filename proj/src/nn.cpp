#include "tae/nn.hpp"

#include <cmath>
#include <string>

#include "tae/errors.hpp"

namespace tae {

std::string_view to_string(Activation a) {
    switch (a) {
        case Activation::Identity: return "identity";
        case Activation::Relu: return "relu";
        case Activation::Tanh: return "tanh";
    }
    return "identity";
}

Activation parse_activation(std::string_view name) {
    if (name == "identity" || name == "linear") return Activation::Identity;
    if (name == "relu") return Activation::Relu;
    if (name == "tanh") return Activation::Tanh;
    throw std::invalid_argument("unknown activation '" + std::string(name) + "'");
}

Matrix glorot_init(std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    if (fan_in == 0 || fan_out == 0) {
        throw std::invalid_argument("glorot_init: fan_in and fan_out must be >= 1");
    }
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    Matrix w(fan_out, fan_in);
    for (double& v : w.flat()) v = dist(rng);
    return w;
}

namespace {

double activate(Activation a, double x) {
    switch (a) {
        case Activation::Relu: return x > 0.0 ? x : 0.0;
        case Activation::Tanh: return std::tanh(x);
        case Activation::Identity: break;
    }
    return x;
}

// Derivative expressed through the post-activation value.
double activation_slope(Activation a, double y) {
    switch (a) {
        case Activation::Relu: return y > 0.0 ? 1.0 : 0.0;
        case Activation::Tanh: return 1.0 - y * y;
        case Activation::Identity: break;
    }
    return 1.0;
}

}  // namespace

Mlp::Mlp(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
    if (layers_.empty()) throw std::invalid_argument("Mlp needs at least one layer");
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const auto& l = layers_[i];
        if (l.bias.size() != l.weights.rows()) {
            throw ShapeError("layer " + std::to_string(i) + ": bias length " +
                             std::to_string(l.bias.size()) + " != weight rows " +
                             std::to_string(l.weights.rows()));
        }
        if (i + 1 < layers_.size() && l.out_dim() != layers_[i + 1].in_dim()) {
            throw ShapeError("layer " + std::to_string(i) + " output " +
                             std::to_string(l.out_dim()) + " does not feed layer input " +
                             std::to_string(layers_[i + 1].in_dim()));
        }
    }
}

Mlp Mlp::make(std::span<const std::size_t> widths, Activation hidden, Activation output,
              Rng& rng) {
    if (widths.size() < 2) throw std::invalid_argument("Mlp::make needs >= 2 widths");
    std::vector<DenseLayer> layers;
    for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
        const bool last = i + 2 == widths.size();
        layers.push_back({glorot_init(widths[i], widths[i + 1], rng), Vector(widths[i + 1], 0.0),
                          last ? output : hidden});
    }
    return Mlp(std::move(layers));
}

std::size_t Mlp::input_dim() const { return layers_.empty() ? 0 : layers_.front().in_dim(); }
std::size_t Mlp::output_dim() const { return layers_.empty() ? 0 : layers_.back().out_dim(); }

std::size_t Mlp::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers_) n += l.weights.size() + l.bias.size();
    return n;
}

ForwardCache Mlp::forward(std::span<const double> x) const {
    if (x.size() != input_dim()) {
        throw ShapeError("mlp input length " + std::to_string(x.size()) + " != " +
                         std::to_string(input_dim()));
    }
    ForwardCache cache;
    cache.values.reserve(layers_.size() + 1);
    cache.values.emplace_back(x.begin(), x.end());
    for (const auto& l : layers_) {
        const Vector& in = cache.values.back();
        Vector out(l.out_dim());
        for (std::size_t r = 0; r < out.size(); ++r) {
            out[r] = activate(l.activation, dot(l.weights.row(r), in) + l.bias[r]);
        }
        cache.values.push_back(std::move(out));
    }
    return cache;
}

Vector Mlp::backward(const ForwardCache& cache, std::span<const double> output_grad,
                     MlpGradients& grads) const {
    if (cache.values.size() != layers_.size() + 1 || cache.values.front().size() != input_dim()) {
        throw std::logic_error("backward: cache does not belong to this network");
    }
    if (output_grad.size() != output_dim()) {
        throw ShapeError("backward: output gradient length " + std::to_string(output_grad.size()) +
                         " != " + std::to_string(output_dim()));
    }
    if (grads.layer_count() != layers_.size()) {
        throw ShapeError("backward: gradient buffers do not match network");
    }
    Vector delta(output_grad.begin(), output_grad.end());
    for (std::size_t li = layers_.size(); li-- > 0;) {
        const auto& l = layers_[li];
        const Vector& out = cache.values[li + 1];
        const Vector& in = cache.values[li];
        for (std::size_t r = 0; r < delta.size(); ++r) delta[r] *= activation_slope(l.activation, out[r]);

        Matrix& gw = grads.weights(li);
        Vector& gb = grads.bias(li);
        Vector next(l.in_dim(), 0.0);
        for (std::size_t r = 0; r < l.out_dim(); ++r) {
            const double d = delta[r];
            gb[r] += d;
            auto grow = gw.row(r);
            auto wrow = l.weights.row(r);
            for (std::size_t c = 0; c < l.in_dim(); ++c) {
                grow[c] += d * in[c];
                next[c] += d * wrow[c];
            }
        }
        delta = std::move(next);
    }
    return delta;
}

std::vector<std::span<double>> Mlp::parameters() {
    std::vector<std::span<double>> out;
    for (auto& l : layers_) {
        out.push_back(l.weights.flat());
        out.push_back(l.bias);
    }
    return out;
}

MlpGradients::MlpGradients(const Mlp& net) {
    for (const auto& l : net.layers()) {
        weights_.emplace_back(l.weights.rows(), l.weights.cols());
        bias_.emplace_back(l.bias.size(), 0.0);
    }
}

void MlpGradients::zero() {
    for (auto& w : weights_) std::fill(w.flat().begin(), w.flat().end(), 0.0);
    for (auto& b : bias_) std::fill(b.begin(), b.end(), 0.0);
}

void MlpGradients::add(const MlpGradients& other) {
    if (other.layer_count() != layer_count()) throw ShapeError("gradient layer count mismatch");
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        auto dst = weights_[l].flat();
        auto src = other.weights_[l].flat();
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
        for (std::size_t i = 0; i < bias_[l].size(); ++i) bias_[l][i] += other.bias_[l][i];
    }
}

void MlpGradients::scale(double factor) {
    for (auto& w : weights_) {
        for (double& v : w.flat()) v *= factor;
    }
    for (auto& b : bias_) {
        for (double& v : b) v *= factor;
    }
}

std::vector<std::span<const double>> MlpGradients::parameters() const {
    std::vector<std::span<const double>> out;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        out.push_back(weights_[l].flat());
        out.push_back(bias_[l]);
    }
    return out;
}

}  // namespace tae
