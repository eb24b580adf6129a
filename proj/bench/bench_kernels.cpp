// Serial vs OpenMP timings for the per-sample kernels on an IoT-sized model
// (115 -> 50 -> 10). Usage: bench_kernels [repetitions]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>

#include "tae/kernels.hpp"
#include "tae/twin_autoencoder.hpp"

namespace {

template <class Fn>
double time_ms(int reps, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) fn();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count() / reps;
}

double max_abs_diff(const tae::TaeGradients& a, const tae::TaeGradients& b) {
    double worst = 0.0;
    const auto pa = a.parameters();
    const auto pb = b.parameters();
    for (std::size_t i = 0; i < pa.size(); ++i) {
        for (std::size_t k = 0; k < pa[i].size(); ++k) worst = std::max(worst, std::abs(pa[i][k] - pb[i][k]));
    }
    return worst;
}

}  // namespace

int main(int argc, char** argv) {
    const int reps = argc > 1 ? std::atoi(argv[1]) : 20;

    tae::BlobSpec spec{5, 400, 115, 1.0, 1.0, 3};
    const tae::Dataset raw = tae::synth_blobs(spec);
    const tae::Dataset data = tae::minmax_apply(tae::minmax_fit(raw), raw);

    tae::TrainConfig cfg;
    cfg.latent_dim = 10;
    tae::Rng rng(11);
    tae::TwinAutoEncoder model = tae::build_tae(data.dim(), cfg, rng);
    tae::fit_plan(model, data.X, data.labels, 0.5);

    std::vector<std::size_t> batch(100);
    std::iota(batch.begin(), batch.end(), std::size_t{0});
    auto serial = tae::make_gradients(model);
    auto parallel = tae::make_gradients(model);

    using tae::kernels::Exec;
    std::printf("threads: %d, parameters: %zu\n", tae::kernels::max_threads(),
                model.encoder.parameter_count() + model.hermaphrodite.parameter_count() +
                    model.decoder.parameter_count());

    const double g_serial = time_ms(reps, [&] { tae::batch_gradients(model, data, batch, Exec::Serial, serial); });
    const double g_parallel = time_ms(reps, [&] { tae::batch_gradients(model, data, batch, Exec::Parallel, parallel); });
    std::printf("batch gradients (100 samples): serial %.3f ms, parallel %.3f ms, speedup %.2fx, max |diff| %.3g\n",
                g_serial, g_parallel, g_serial / g_parallel, max_abs_diff(serial, parallel));

    const double i_serial = time_ms(reps, [&] { (void)tae::infer_representation(model, data.X, Exec::Serial); });
    const double i_parallel = time_ms(reps, [&] { (void)tae::infer_representation(model, data.X, Exec::Parallel); });
    std::printf("inference (%zu rows): serial %.3f ms, parallel %.3f ms, speedup %.2fx\n", data.size(), i_serial,
                i_parallel, i_serial / i_parallel);

    const double l_serial = time_ms(reps, [&] { (void)tae::evaluate_loss(model, data, Exec::Serial); });
    const double l_parallel = time_ms(reps, [&] { (void)tae::evaluate_loss(model, data, Exec::Parallel); });
    std::printf("full-data loss (%zu rows): serial %.3f ms, parallel %.3f ms, speedup %.2fx\n", data.size(),
                l_serial, l_parallel, l_serial / l_parallel);
    return 0;
}
