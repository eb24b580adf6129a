#pragma once

// Data-parallel loops over samples. Every parallel kernel has a serial
// counterpart used as the reference in tests and benchmarks.

#include <concepts>
#include <cstddef>
#include <span>
#include <vector>

#include <omp.h>

#include "tae/matrix.hpp"

namespace tae::kernels {

enum class Exec { Serial, Parallel };

template <class T>
concept Accumulator = std::copyable<T> && requires(T a, const T& b) {
    a.zero();
    a.add(b);
};

/// Serial reference: sample i adds its contribution straight into `acc`, in index order.
template <Accumulator Acc, class PerSample>
void accumulate_serial(std::size_t n, Acc& acc, PerSample&& per_sample) {
    for (std::size_t i = 0; i < n; ++i) per_sample(i, acc);
}

/// Each sample fills its own zeroed slot in parallel; slots are then folded into
/// `acc` in index order. The result does not depend on the thread count.
template <Accumulator Acc, class PerSample>
void accumulate_parallel(std::size_t n, Acc& acc, PerSample&& per_sample) {
    Acc blank = acc;
    blank.zero();
    std::vector<Acc> slots(n, blank);
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        per_sample(static_cast<std::size_t>(i), slots[static_cast<std::size_t>(i)]);
    }
    for (const auto& s : slots) acc.add(s);
}

template <Accumulator Acc, class PerSample>
void accumulate(Exec exec, std::size_t n, Acc& acc, PerSample&& per_sample) {
    if (exec == Exec::Parallel) {
        accumulate_parallel(n, acc, per_sample);
    } else {
        accumulate_serial(n, acc, per_sample);
    }
}

/// Applies `fn(row) -> Vector` to every row of X, producing an n x out_dim matrix.
template <class RowFn>
Matrix map_rows(Exec exec, const Matrix& X, std::size_t out_dim, RowFn&& fn) {
    Matrix out(X.rows(), out_dim);
    const auto count = static_cast<std::ptrdiff_t>(X.rows());
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t r = 0; r < count; ++r) {
            const Vector y = fn(X.row(static_cast<std::size_t>(r)));
            std::copy(y.begin(), y.end(), out.row(static_cast<std::size_t>(r)).begin());
        }
    } else {
        for (std::ptrdiff_t r = 0; r < count; ++r) {
            const Vector y = fn(X.row(static_cast<std::size_t>(r)));
            std::copy(y.begin(), y.end(), out.row(static_cast<std::size_t>(r)).begin());
        }
    }
    return out;
}

inline int max_threads() { return omp_get_max_threads(); }

}  // namespace tae::kernels
