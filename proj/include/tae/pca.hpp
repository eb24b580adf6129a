#pragma once

#include <cstddef>
#include <span>

#include "tae/matrix.hpp"

namespace tae {

struct SymmetricEigen {
    Vector values;   ///< descending
    Matrix vectors;  ///< row i is the unit eigenvector for values[i]
};

/// Cyclic Jacobi rotations on a symmetric matrix.
SymmetricEigen jacobi_eigen(const Matrix& symmetric, double tolerance = 1e-14,
                            std::size_t max_sweeps = 100);

/// Principal axes of a sample. Component rows are orthonormal, ordered by
/// descending variance, and signed so the largest-magnitude entry is positive.
struct PcaModel {
    Vector mean;
    Matrix components;  ///< k x d
    Vector explained_variance;

    std::size_t input_dim() const { return mean.size(); }
    std::size_t output_dim() const { return components.rows(); }

    bool operator==(const PcaModel&) const = default;
};

/// Fits on the rows of X (n >= 2, 1 <= k <= d) with 1/(n-1) covariance.
PcaModel fit_pca(const Matrix& X, std::size_t k);

Vector pca_project(const PcaModel& model, std::span<const double> x);
Matrix pca_project(const PcaModel& model, const Matrix& X);
Vector pca_reconstruct(const PcaModel& model, std::span<const double> projected);

}  // namespace tae
