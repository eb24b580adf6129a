#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "tae/matrix.hpp"

namespace tae {

using Rng = std::mt19937_64;

enum class Activation { Identity, Relu, Tanh };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view name);

/// Uniform Glorot initialization, returned as a fan_out x fan_in weight matrix.
Matrix glorot_init(std::size_t fan_in, std::size_t fan_out, Rng& rng);

/// y = act(W x + b). Weights are stored out x in.
struct DenseLayer {
    Matrix weights;
    Vector bias;
    Activation activation = Activation::Identity;

    std::size_t in_dim() const { return weights.cols(); }
    std::size_t out_dim() const { return weights.rows(); }

    bool operator==(const DenseLayer&) const = default;
};

/// Post-activation values of every layer; values[0] is the input.
struct ForwardCache {
    std::vector<Vector> values;

    const Vector& output() const { return values.back(); }
};

class MlpGradients;

class Mlp {
public:
    Mlp() = default;
    explicit Mlp(std::vector<DenseLayer> layers);

    /// Glorot weights, zero biases. `widths` lists every layer boundary, input first.
    static Mlp make(std::span<const std::size_t> widths, Activation hidden, Activation output,
                    Rng& rng);

    std::size_t input_dim() const;
    std::size_t output_dim() const;
    std::size_t parameter_count() const;

    const std::vector<DenseLayer>& layers() const { return layers_; }

    ForwardCache forward(std::span<const double> x) const;
    Vector predict(std::span<const double> x) const { return forward(x).output(); }

    /// Reverse pass for one sample. Gradients are added into `grads`; the gradient
    /// with respect to the network input is returned.
    Vector backward(const ForwardCache& cache, std::span<const double> output_grad,
                    MlpGradients& grads) const;

    /// Weight and bias buffers in a fixed order (layer by layer, weights then bias).
    std::vector<std::span<double>> parameters();

    bool operator==(const Mlp&) const = default;

private:
    std::vector<DenseLayer> layers_;
};

/// Gradient buffers shaped like an Mlp's parameters.
class MlpGradients {
public:
    MlpGradients() = default;
    explicit MlpGradients(const Mlp& net);

    void zero();
    void add(const MlpGradients& other);
    void scale(double factor);

    Matrix& weights(std::size_t layer) { return weights_[layer]; }
    const Matrix& weights(std::size_t layer) const { return weights_[layer]; }
    Vector& bias(std::size_t layer) { return bias_[layer]; }
    const Vector& bias(std::size_t layer) const { return bias_[layer]; }
    std::size_t layer_count() const { return weights_.size(); }

    /// Same order as Mlp::parameters().
    std::vector<std::span<const double>> parameters() const;

private:
    std::vector<Matrix> weights_;
    std::vector<Vector> bias_;
};

}  // namespace tae
