#include <doctest.h>

#include <cmath>

#include "tae/errors.hpp"
#include "tae/nn.hpp"
#include "test_helpers.hpp"

using namespace tae;

TEST_CASE("glorot entries stay inside the uniform bound") {
    Rng rng(7);
    const Matrix w = glorot_init(2, 3, rng);
    CHECK(w.rows() == 3);
    CHECK(w.cols() == 2);
    const double limit = std::sqrt(6.0 / 5.0);
    CHECK(limit == doctest::Approx(1.0954).epsilon(1e-4));
    for (double v : w.flat()) CHECK(std::abs(v) <= limit);

    Rng rng0(0);
    const Matrix one = glorot_init(1, 1, rng0);
    CHECK(std::abs(one(0, 0)) <= std::sqrt(3.0));

    Rng big(1);
    const Matrix many = glorot_init(40, 60, big);
    const double bound = std::sqrt(6.0 / 100.0);
    for (double v : many.flat()) CHECK(std::abs(v) <= bound);
}

TEST_CASE("glorot is deterministic per seed and rejects empty fans") {
    Rng a(7), b(7);
    CHECK(glorot_init(4, 5, a) == glorot_init(4, 5, b));
    Rng c(0);
    CHECK_THROWS_AS(glorot_init(0, 3, c), std::invalid_argument);
    CHECK_THROWS_AS(glorot_init(3, 0, c), std::invalid_argument);
}

TEST_CASE("forward pass on hand-built layers") {
    SUBCASE("identity") {
        Mlp net({DenseLayer{Matrix(2, 2, {1, 0, 0, 1}), {0, 0}, Activation::Identity}});
        const double x[] = {3, 4};
        CHECK(net.predict(x) == Vector{3, 4});
    }
    SUBCASE("relu clips the negative unit") {
        Mlp net({DenseLayer{Matrix(2, 1, {1, -1}), {0, 0}, Activation::Relu}});
        const double x[] = {2};
        CHECK(net.predict(x) == Vector{2, 0});
    }
    SUBCASE("tanh against a scalar evaluation") {
        Mlp net({DenseLayer{Matrix(1, 1, {0.5}), {0.1}, Activation::Tanh}});
        const double x[] = {1.0};
        const double expected = std::tanh(0.5 * 1.0 + 0.1);
        CHECK(net.predict(x)[0] == doctest::Approx(expected).epsilon(1e-15));
    }
    SUBCASE("wrong input length") {
        Mlp net({DenseLayer{Matrix(1, 2), {0}, Activation::Identity}});
        const double x[] = {1, 2, 3};
        CHECK_THROWS_AS(net.forward(x), ShapeError);
    }
}

TEST_CASE("mlp construction validates shapes") {
    CHECK_THROWS_AS(Mlp({DenseLayer{Matrix(2, 2), {0}, Activation::Identity}}), ShapeError);
    CHECK_THROWS_AS(Mlp({DenseLayer{Matrix(3, 2), {0, 0, 0}, Activation::Relu},
                         DenseLayer{Matrix(1, 2), {0}, Activation::Identity}}),
                    ShapeError);
    CHECK(parse_activation("relu") == Activation::Relu);
    CHECK_THROWS(parse_activation("sigmoid"));
}

TEST_CASE("single identity layer with half squared norm loss") {
    Mlp net({DenseLayer{Matrix(2, 3, {0.1, -0.2, 0.3, 0.4, 0.5, -0.6}), {0.05, -0.05}, Activation::Identity}});
    const double x[] = {1.0, 2.0, -1.0};
    const auto cache = net.forward(x);
    const Vector& y = cache.output();
    MlpGradients g(net);
    net.backward(cache, y, g);  // dL/dy = y for L = 0.5 |y|^2
    for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t c = 0; c < 3; ++c) CHECK(g.weights(0)(r, c) == doctest::Approx(y[r] * x[c]));
        CHECK(g.bias(0)[r] == doctest::Approx(y[r]));
    }
}

TEST_CASE("zero output gradient gives zero parameter gradients") {
    Rng rng(3);
    const std::size_t widths[] = {3, 5, 2};
    Mlp net = Mlp::make(widths, Activation::Tanh, Activation::Identity, rng);
    const double x[] = {0.3, -0.7, 1.1};
    MlpGradients g(net);
    const Vector zero(2, 0.0);
    const Vector gin = net.backward(net.forward(x), zero, g);
    for (auto p : g.parameters()) {
        for (double v : p) CHECK(v == 0.0);
    }
    for (double v : gin) CHECK(v == 0.0);
}

TEST_CASE("analytic gradients match central finite differences on random small nets") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        Rng rng(seed);
        std::uniform_int_distribution<std::size_t> width(1, 8);
        std::uniform_int_distribution<int> depth(1, 3);
        std::vector<std::size_t> widths{width(rng)};
        const int layers = depth(rng);
        for (int i = 0; i < layers; ++i) widths.push_back(width(rng));
        const Activation hidden = seed % 2 ? Activation::Tanh : Activation::Relu;
        Mlp net = Mlp::make(widths, hidden, Activation::Identity, rng);
        // Nonzero biases move ReLU kinks away from exact zero.
        std::uniform_real_distribution<double> u(-0.5, 0.5);
        std::vector<DenseLayer> ls = net.layers();
        for (auto& l : ls) {
            for (double& b : l.bias) b = u(rng);
        }
        net = Mlp(ls);

        Vector x(widths.front());
        for (double& v : x) v = u(rng) * 2.0;
        Vector target(widths.back());
        for (double& v : target) v = u(rng);

        const auto loss = [&] {
            const Vector y = net.predict(x);
            double s = 0.0;
            for (std::size_t i = 0; i < y.size(); ++i) s += 0.5 * (y[i] - target[i]) * (y[i] - target[i]);
            return s;
        };
        const auto cache = net.forward(x);
        Vector gy(target.size());
        for (std::size_t i = 0; i < gy.size(); ++i) gy[i] = cache.output()[i] - target[i];
        MlpGradients g(net);
        const Vector gx = net.backward(cache, gy, g);

        const auto numeric = test::finite_differences(net.parameters(), loss);
        const auto analytic = g.parameters();
        for (std::size_t b = 0; b < numeric.size(); ++b) {
            for (std::size_t i = 0; i < numeric[b].size(); ++i) {
                CHECK(test::relative_error(analytic[b][i], numeric[b][i]) < 1e-4);
            }
        }
        std::vector<std::span<double>> input{x};
        const auto numeric_x = test::finite_differences(input, loss);
        for (std::size_t i = 0; i < x.size(); ++i) CHECK(test::relative_error(gx[i], numeric_x[0][i]) < 1e-4);
    }
}

TEST_CASE("activation ranges and forward determinism") {
    Rng rng(9);
    const std::size_t widths[] = {4, 6, 6};
    Mlp relu = Mlp::make(widths, Activation::Relu, Activation::Relu, rng);
    Mlp tanh_net = Mlp::make(widths, Activation::Tanh, Activation::Tanh, rng);
    std::normal_distribution<double> n(0.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        Vector x(4);
        for (double& v : x) v = n(rng);
        for (double v : relu.predict(x)) CHECK(v >= 0.0);
        for (double v : tanh_net.predict(x)) {
            CHECK(v > -1.0);
            CHECK(v < 1.0);
        }
        CHECK(relu.predict(x) == relu.predict(x));
    }
}

TEST_CASE("backward rejects a cache from another network") {
    Rng rng(1);
    const std::size_t a[] = {2, 3, 1};
    const std::size_t b[] = {3, 3, 1};
    Mlp na = Mlp::make(a, Activation::Relu, Activation::Identity, rng);
    Mlp nb = Mlp::make(b, Activation::Relu, Activation::Identity, rng);
    const double x[] = {1, 2, 3};
    const auto cache = nb.forward(x);
    MlpGradients g(na);
    const double gy[] = {1};
    CHECK_THROWS_AS(na.backward(cache, gy, g), std::logic_error);
}
