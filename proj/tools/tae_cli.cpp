// Command-line front end: train, eval, transform, sweep, synth.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <omp.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "tae/commands.hpp"

namespace {

struct CommonFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> representation;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config, "Run configuration (key = value file)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--seed", f.seed, "Override the seed");
    cmd->add_option("--out", f.out, "Override the output directory");
    cmd->add_option("--representation", f.representation, "raw | ae-latent | tae-latent | tae-reconstruction");
    cmd->add_option("--set", f.overrides, "Override any config key: --set epochs=50");
}

tae::RunConfig resolve(const CommonFlags& f) {
    tae::RunConfig c = tae::load_run_config(f.config);
    for (const auto& kv : f.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw tae::ParseError("--set expects key=value, got '" + kv + "'");
        tae::apply_setting(c, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (f.seed) c.train.seed = *f.seed;
    if (f.out) c.out_dir = *f.out;
    if (f.representation) c.representation = tae::parse_representation(*f.representation);
    if (c.threads > 1) omp_set_num_threads(static_cast<int>(c.threads));
    return c;
}

void configure_logging() {
    auto logger = spdlog::stderr_color_mt("tae");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::info);
    if (const char* level = std::getenv("TAE_LOG_LEVEL")) {
        spdlog::set_level(spdlog::level::from_str(level));
    }
}

}  // namespace

int main(int argc, char** argv) {
    configure_logging();
    CLI::App app{"Twin auto-encoder representation toolkit"};
    app.require_subcommand(1);

    CommonFlags train_flags;
    auto* train = app.add_subcommand("train", "Train a model; writes model.json and history.csv");
    add_common(train, train_flags);

    CommonFlags eval_flags;
    std::optional<std::string> eval_model;
    auto* eval = app.add_subcommand("eval", "Fit the decision-tree grid on a representation and report metrics");
    add_common(eval, eval_flags);
    eval->add_option("--model", eval_model, "Model file (default <out>/model.json)");

    std::string tr_model;
    std::string tr_input;
    std::string tr_output;
    std::string tr_label = "label";
    bool tr_no_header = false;
    std::optional<std::string> tr_rep;
    auto* transform = app.add_subcommand("transform", "Write the representation of every input row");
    transform->add_option("--model", tr_model, "Model file")->required()->check(CLI::ExistingFile);
    transform->add_option("--input", tr_input, "Input CSV")->required();
    transform->add_option("--output", tr_output, "Output CSV")->required();
    transform->add_option("--label-column", tr_label, "Column to drop if present (name, or index with --no-header)");
    transform->add_flag("--no-header", tr_no_header, "Input has no header row");
    transform->add_option("--representation", tr_rep, "tae-reconstruction (default), tae-latent or ae-latent");

    CommonFlags sweep_flags;
    auto* sweep = app.add_subcommand("sweep", "Train and score over the S and D_z grids");
    add_common(sweep, sweep_flags);

    tae::BlobSpec blob;
    std::string synth_out;
    auto* synth = app.add_subcommand("synth", "Write a synthetic Gaussian-blob dataset");
    synth->add_option("--out", synth_out, "Output CSV")->required();
    synth->add_option("--classes", blob.classes, "Number of classes")->capture_default_str();
    synth->add_option("--per-class", blob.per_class, "Samples per class")->capture_default_str();
    synth->add_option("--dim", blob.dim, "Feature dimension")->capture_default_str();
    synth->add_option("--radius", blob.radius, "Distance of class centres from the origin")->capture_default_str();
    synth->add_option("--spread", blob.spread, "Per-coordinate standard deviation")->capture_default_str();
    synth->add_option("--seed", blob.seed, "Seed")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train) {
            const auto r = tae::cmd_train(resolve(train_flags));
            spdlog::info("wrote {} and {}", r.model_path.string(), r.history_path.string());
        } else if (*eval) {
            const auto r = tae::cmd_eval(resolve(eval_flags), eval_model ? std::optional<std::filesystem::path>(*eval_model) : std::nullopt);
            spdlog::info("accuracy {:.4f}; wrote {}", r.detection.accuracy, r.report_json.string());
        } else if (*transform) {
            tae::LabelColumn label = tae::LabelColumn::by_name(tr_label);
            if (tr_no_header) {
                label = tr_label.empty() || tr_label == "none" ? tae::LabelColumn::none()
                                                               : tae::LabelColumn::by_index(std::stoul(tr_label));
            }
            const auto n = tae::cmd_transform(tr_model, tr_input, tr_output, label, !tr_no_header,
                                              tr_rep ? std::optional(tae::parse_representation(*tr_rep)) : std::nullopt);
            spdlog::info("wrote {} rows to {}", n, tr_output);
        } else if (*sweep) {
            const auto cells = tae::cmd_sweep(resolve(sweep_flags));
            std::size_t failed = 0;
            for (const auto& c : cells) failed += c.error.empty() ? 0 : 1;
            spdlog::info("sweep finished: {} cells, {} failed", cells.size(), failed);
        } else if (*synth) {
            tae::cmd_synth(blob, synth_out);
            spdlog::info("wrote {} samples to {}", blob.classes * blob.per_class, synth_out);
        }
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 1;
    }
    return 0;
}
