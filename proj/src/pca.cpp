#include "tae/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "tae/errors.hpp"

namespace tae {

SymmetricEigen jacobi_eigen(const Matrix& symmetric, double tolerance, std::size_t max_sweeps) {
    const std::size_t n = symmetric.rows();
    if (symmetric.cols() != n) throw ShapeError("jacobi_eigen: matrix is not square");

    Matrix a = symmetric;
    Matrix v(n, n);  // columns accumulate the eigenvectors
    for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

    double scale = 0.0;
    for (double x : a.flat()) scale = std::max(scale, std::abs(x));
    const double threshold = tolerance * std::max(scale, 1e-300);

    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
        }
        if (off <= threshold) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= threshold * 1e-3) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    SymmetricEigen out{Vector(n), Matrix(n, n)};
    for (std::size_t r = 0; r < n; ++r) {
        out.values[r] = a(order[r], order[r]);
        for (std::size_t k = 0; k < n; ++k) out.vectors(r, k) = v(k, order[r]);
    }
    return out;
}

PcaModel fit_pca(const Matrix& X, std::size_t k) {
    const std::size_t n = X.rows();
    const std::size_t d = X.cols();
    if (n < 2) throw std::invalid_argument("fit_pca: need at least 2 samples");
    if (k < 1 || k > d) {
        throw std::invalid_argument("fit_pca: k=" + std::to_string(k) + " must lie in [1, " +
                                    std::to_string(d) + "]");
    }

    PcaModel model;
    model.mean.assign(d, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        auto row = X.row(r);
        for (std::size_t c = 0; c < d; ++c) model.mean[c] += row[c];
    }
    for (double& m : model.mean) m /= static_cast<double>(n);

    Matrix cov(d, d);
    Vector centered(d);
    for (std::size_t r = 0; r < n; ++r) {
        auto row = X.row(r);
        for (std::size_t c = 0; c < d; ++c) centered[c] = row[c] - model.mean[c];
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = i; j < d; ++j) cov(i, j) += centered[i] * centered[j];
        }
    }
    const double denom = static_cast<double>(n - 1);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i; j < d; ++j) {
            cov(i, j) /= denom;
            cov(j, i) = cov(i, j);
        }
    }

    const SymmetricEigen eig = jacobi_eigen(cov);
    model.components = Matrix(k, d);
    model.explained_variance.assign(k, 0.0);
    for (std::size_t r = 0; r < k; ++r) {
        auto src = eig.vectors.row(r);
        std::size_t pivot = 0;
        for (std::size_t c = 1; c < d; ++c) {
            if (std::abs(src[c]) > std::abs(src[pivot])) pivot = c;
        }
        const double sign = src[pivot] < 0.0 ? -1.0 : 1.0;
        for (std::size_t c = 0; c < d; ++c) model.components(r, c) = sign * src[c];
        // Rank-deficient covariances can leave tiny negative round-off.
        model.explained_variance[r] = std::max(eig.values[r], 0.0);
    }
    return model;
}

Vector pca_project(const PcaModel& model, std::span<const double> x) {
    if (x.size() != model.input_dim()) {
        throw ShapeError("pca_project: input length " + std::to_string(x.size()) + " != " +
                         std::to_string(model.input_dim()));
    }
    Vector centered(x.size());
    for (std::size_t c = 0; c < x.size(); ++c) centered[c] = x[c] - model.mean[c];
    Vector out(model.output_dim());
    for (std::size_t r = 0; r < out.size(); ++r) out[r] = dot(model.components.row(r), centered);
    return out;
}

Matrix pca_project(const PcaModel& model, const Matrix& X) {
    Matrix out(X.rows(), model.output_dim());
    for (std::size_t r = 0; r < X.rows(); ++r) {
        const Vector p = pca_project(model, X.row(r));
        std::copy(p.begin(), p.end(), out.row(r).begin());
    }
    return out;
}

Vector pca_reconstruct(const PcaModel& model, std::span<const double> projected) {
    if (projected.size() != model.output_dim()) throw ShapeError("pca_reconstruct: length mismatch");
    Vector x = model.mean;
    for (std::size_t r = 0; r < projected.size(); ++r) {
        auto comp = model.components.row(r);
        for (std::size_t c = 0; c < x.size(); ++c) x[c] += projected[r] * comp[c];
    }
    return x;
}

}  // namespace tae
