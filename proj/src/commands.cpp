#include "tae/commands.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>

#include <json.hpp>
#include <spdlog/fmt/fmt.h>
#include <spdlog/spdlog.h>

#include "tae/errors.hpp"

namespace tae {

using nlohmann::json;

namespace {

LabelColumn label_of(const RunConfig& c) {
    if (c.header) return LabelColumn::by_name(c.label_column);
    std::size_t index = 0;
    const auto [p, ec] = std::from_chars(c.label_column.data(), c.label_column.data() + c.label_column.size(), index);
    if (ec != std::errc{} || p != c.label_column.data() + c.label_column.size()) {
        throw std::invalid_argument("label_column must be a column index when header = false");
    }
    return LabelColumn::by_index(index);
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ParseError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path.string() + "'");
    return out;
}

Dataset normalized(const Dataset& d, const NormStats& stats) {
    if (d.dim() != stats.min.size()) {
        throw ShapeError("data has " + std::to_string(d.dim()) + " features but the model expects " +
                         std::to_string(stats.min.size()));
    }
    return minmax_apply(stats, d);
}

json quality_json(const QualityReport& q) {
    return {{"d_between", q.d_between},
            {"d_within", q.d_within},
            {"quality", q.unbounded ? json(nullptr) : json(q.quality)},
            {"unbounded", q.unbounded}};
}

}  // namespace

DataSplits load_splits(const RunConfig& config) {
    const auto label = label_of(config);
    Dataset all = load_csv(config.train_path, label, config.header);
    if (config.test_path) {
        Dataset test = load_csv(*config.test_path, label, config.header, all.class_names);
        if (test.dim() != all.dim()) {
            throw ShapeError("test data has " + std::to_string(test.dim()) + " features, training data has " +
                             std::to_string(all.dim()));
        }
        all.class_names = test.class_names;
        return {std::move(all), std::move(test)};
    }
    auto [train, test] = stratified_split(all, config.test_fraction, config.train.seed);
    return {std::move(train), std::move(test)};
}

Matrix represent(const ModelFile* model, Representation rep, const Matrix& X, kernels::Exec exec) {
    if (rep == Representation::Raw) return X;
    if (model == nullptr) throw std::invalid_argument("representation needs a trained model");
    if (X.cols() != model->input_dim()) {
        throw ShapeError("data has " + std::to_string(X.cols()) + " features but the model expects " +
                         std::to_string(model->input_dim()));
    }
    if (rep == Representation::AeLatent) {
        const auto* ae = std::get_if<AutoEncoder>(&model->model);
        if (!ae) throw std::invalid_argument("representation ae-latent needs an 'ae' model file");
        return ae_encode(*ae, X, exec);
    }
    const auto* tae = std::get_if<TwinAutoEncoder>(&model->model);
    if (!tae) throw std::invalid_argument("representation " + std::string(to_string(rep)) + " needs a 'tae' model file");
    return rep == Representation::TaeLatent ? encode(*tae, X, exec) : infer_representation(*tae, X, exec);
}

int resolve_normal_class(const RunConfig& config, const std::vector<std::string>& class_names) {
    if (class_names.empty()) throw std::invalid_argument("dataset has no classes");
    if (config.normal_class.empty()) return 0;
    const auto it = std::find(class_names.begin(), class_names.end(), config.normal_class);
    if (it == class_names.end()) {
        throw std::invalid_argument("normal_class '" + config.normal_class + "' does not occur in the data");
    }
    return static_cast<int>(it - class_names.begin());
}

DetectionResult evaluate_detection(const Matrix& train_X, std::span<const int> train_y, const Matrix& test_X,
                                   std::span<const int> test_y, std::size_t classes, int normal_class,
                                   std::span<const std::size_t> depths, std::size_t min_leaf,
                                   double validation_fraction, std::uint64_t seed) {
    if (depths.empty()) throw std::invalid_argument("evaluate_detection: empty depth grid");
    if (test_X.rows() == 0) throw std::invalid_argument("evaluate_detection: no test samples");

    DetectionResult r;
    const auto [fit_idx, val_idx] = stratified_split_indices(train_y, validation_fraction, seed);
    double best = -1.0;
    if (!val_idx.empty() && !fit_idx.empty()) {
        const Matrix fit_X = train_X.select_rows(fit_idx);
        const Matrix val_X = train_X.select_rows(val_idx);
        std::vector<int> fit_y;
        std::vector<int> val_y;
        for (auto i : fit_idx) fit_y.push_back(train_y[i]);
        for (auto i : val_idx) val_y.push_back(train_y[i]);
        for (std::size_t depth : depths) {
            const auto tree = DecisionTree::fit(fit_X, fit_y, classes, {depth, min_leaf});
            const auto cm = ConfusionMatrix::from_predictions(val_y, tree.predict(val_X), classes);
            const double acc = accuracy(cm);
            r.validation_accuracy.push_back(acc);
            if (acc > best || (acc == best && depth < r.max_depth)) {
                best = acc;
                r.max_depth = depth;
            }
        }
    } else {
        r.max_depth = *std::min_element(depths.begin(), depths.end());
    }

    const auto tree = DecisionTree::fit(train_X, train_y, classes, {r.max_depth, min_leaf});
    r.confusion = ConfusionMatrix::from_predictions(test_y, tree.predict(test_X), classes);
    r.accuracy = accuracy(r.confusion);
    r.f_score = f_score(r.confusion);
    const auto has_normal = r.confusion.row_sum(static_cast<std::size_t>(normal_class)) > 0;
    const auto has_attack = r.confusion.total() > r.confusion.row_sum(static_cast<std::size_t>(normal_class));
    r.far = has_normal ? far(r.confusion, normal_class) : 0.0;
    r.mdr = has_attack ? mdr(r.confusion, normal_class) : 0.0;
    return r;
}

void write_history_csv(const std::filesystem::path& path, const std::vector<EpochRecord>& history) {
    auto out = open_out(path);
    out << "epoch";
    for (const char* part : {"train", "val"}) {
        out << fmt::format(",{0}_recon_x,{0}_recon_z_from_xhat,{0}_recon_z_from_x,{0}_shrink,{0}_total", part);
    }
    out << '\n';
    for (const auto& rec : history) {
        out << rec.epoch;
        for (const auto* l : {&rec.train, &rec.validation}) {
            out << fmt::format(",{},{},{},{},{}", l->recon_x, l->recon_z_from_xhat, l->recon_z_from_x, l->shrink,
                               l->total);
        }
        out << '\n';
    }
}

TrainOutcome cmd_train(const RunConfig& config) {
    config.validate();
    if (config.representation == Representation::Raw) {
        throw std::invalid_argument("representation 'raw' has no model to train");
    }
    const DataSplits splits = load_splits(config);
    const NormStats stats = minmax_fit(splits.train);
    const Dataset train = minmax_apply(stats, splits.train);

    ModelFile file;
    file.class_names = train.class_names;
    file.feature_names = train.feature_names;
    file.norm = stats;

    std::vector<EpochRecord> history;
    std::size_t best_epoch = 0;
    if (config.representation == Representation::AeLatent) {
        auto result = train_ae(train, config.train);
        history = std::move(result.history);
        best_epoch = result.best_epoch;
        file.model = std::move(result.model);
    } else {
        auto result = train_tae(train, config.train);
        history = std::move(result.history);
        best_epoch = result.best_epoch;
        file.model = std::move(result.model);
    }

    ensure_dir(config.out_dir);
    TrainOutcome outcome{config.out_dir / "model.json", config.out_dir / "history.csv", history.size(), best_epoch};
    save_model(outcome.model_path, file);
    write_history_csv(outcome.history_path, history);
    spdlog::info("trained {} model: {} epochs, best epoch {}", file.variant_name(), outcome.epochs_run, best_epoch);
    return outcome;
}

EvalOutcome cmd_eval(const RunConfig& config, std::optional<std::filesystem::path> model_path) {
    config.validate();
    const DataSplits splits = load_splits(config);

    std::optional<ModelFile> model;
    NormStats stats;
    if (config.representation == Representation::Raw) {
        stats = minmax_fit(splits.train);
    } else {
        model = load_model(model_path.value_or(config.out_dir / "model.json"));
        if (!model->norm) throw std::invalid_argument("model file carries no normalization statistics");
        stats = *model->norm;
    }
    const Dataset train = normalized(splits.train, stats);
    const Dataset test = normalized(splits.test, stats);
    const auto exec = config.train.exec;
    const Matrix rep_train = represent(model ? &*model : nullptr, config.representation, train.X, exec);
    const Matrix rep_test = represent(model ? &*model : nullptr, config.representation, test.X, exec);

    const std::size_t classes = test.class_count();
    const int normal = resolve_normal_class(config, test.class_names);
    EvalOutcome outcome;
    outcome.detection = evaluate_detection(rep_train, train.labels, rep_test, test.labels, classes, normal,
                                           config.max_depths, config.min_leaf, config.train.validation_fraction,
                                           config.train.seed);
    outcome.raw_quality = representation_quality(test.X, test.labels);
    outcome.representation_quality = representation_quality(rep_test, test.labels);

    const auto& d = outcome.detection;
    json grid = json::array();
    for (std::size_t i = 0; i < d.validation_accuracy.size(); ++i) {
        grid.push_back({{"max_depth", config.max_depths[i]}, {"validation_accuracy", d.validation_accuracy[i]}});
    }
    json counts = json::array();
    for (std::size_t t = 0; t < classes; ++t) {
        std::vector<std::uint64_t> row;
        for (std::size_t p = 0; p < classes; ++p) row.push_back(d.confusion(t, p));
        counts.push_back(row);
    }
    json report = {
        {"schema", "twin-ae-eval-report"},
        {"schema_version", 1},
        {"representation", std::string(to_string(config.representation))},
        {"model_variant", model ? json(model->variant_name()) : json(nullptr)},
        {"train_samples", train.size()},
        {"test_samples", test.size()},
        {"normal_class", test.class_names[static_cast<std::size_t>(normal)]},
        {"classifier", {{"kind", "decision-tree"}, {"criterion", "gini"}, {"min_leaf", config.min_leaf},
                        {"grid", grid}, {"max_depth", d.max_depth}}},
        {"metrics", {{"accuracy", d.accuracy}, {"f_score_macro", d.f_score}, {"far", d.far}, {"mdr", d.mdr}}},
        {"confusion_matrix", {{"classes", test.class_names}, {"counts", counts}}},
        {"quality", {{"raw", quality_json(outcome.raw_quality)},
                     {"representation", quality_json(outcome.representation_quality)}}},
    };

    ensure_dir(config.out_dir);
    outcome.report_json = config.out_dir / "report.json";
    outcome.report_text = config.out_dir / "report.txt";
    open_out(outcome.report_json) << report.dump(2) << '\n';

    auto txt = open_out(outcome.report_text);
    txt << fmt::format("representation     {}\n", to_string(config.representation));
    txt << fmt::format("samples            train {}  test {}\n", train.size(), test.size());
    txt << fmt::format("decision tree      max_depth {} (gini, min_leaf {})\n", d.max_depth, config.min_leaf);
    txt << fmt::format("accuracy           {:.4f}\n", d.accuracy);
    txt << fmt::format("f-score (macro)    {:.4f}\n", d.f_score);
    txt << fmt::format("FAR                {:.4f}   (normal = {})\n", d.far, test.class_names[static_cast<std::size_t>(normal)]);
    txt << fmt::format("MDR                {:.4f}\n", d.mdr);
    const auto qtext = [](const QualityReport& q) {
        return q.unbounded ? std::string("inf") : fmt::format("{:.4f}", q.quality);
    };
    txt << fmt::format("quality raw        {}  (d_bet {:.4f}, d_wit {:.4f})\n", qtext(outcome.raw_quality),
                       outcome.raw_quality.d_between, outcome.raw_quality.d_within);
    txt << fmt::format("quality repr       {}  (d_bet {:.4f}, d_wit {:.4f})\n",
                       qtext(outcome.representation_quality), outcome.representation_quality.d_between,
                       outcome.representation_quality.d_within);
    txt << "\nconfusion matrix (rows = true, cols = predicted)\n";
    std::size_t width = 8;
    for (const auto& n : test.class_names) width = std::max(width, n.size() + 2);
    txt << fmt::format("{:>{}}", "", width);
    for (const auto& n : test.class_names) txt << fmt::format("{:>{}}", n, width);
    txt << '\n';
    for (std::size_t t = 0; t < classes; ++t) {
        txt << fmt::format("{:>{}}", test.class_names[t], width);
        for (std::size_t p = 0; p < classes; ++p) txt << fmt::format("{:>{}}", d.confusion(t, p), width);
        txt << '\n';
    }
    return outcome;
}

std::size_t cmd_transform(const std::filesystem::path& model_path, const std::filesystem::path& input,
                          const std::filesystem::path& output, const LabelColumn& label, bool header,
                          std::optional<Representation> rep) {
    const ModelFile model = load_model(model_path);
    const Representation chosen =
        rep.value_or(model.is_tae() ? Representation::TaeReconstruction : Representation::AeLatent);

    // A named label column that is absent from the input is fine: transform is label-free.
    LabelColumn effective = label;
    if (label.name && header) {
        std::ifstream probe(input);
        if (!probe) throw ParseError("cannot open '" + input.string() + "'");
        std::string first;
        std::getline(probe, first);
        std::vector<std::string> names;
        for (std::size_t start = 0;;) {
            const auto comma = first.find(',', start);
            std::string f = first.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            f.erase(std::remove_if(f.begin(), f.end(), [](char ch) { return ch == '\r' || ch == '"' || ch == ' '; }), f.end());
            names.push_back(f);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (std::find(names.begin(), names.end(), *label.name) == names.end()) effective = LabelColumn::none();
    }
    Dataset data = load_csv(input, effective, header);
    if (data.size() > 0 && data.dim() != model.input_dim()) {
        throw ShapeError("input has " + std::to_string(data.dim()) + " features but the model expects " +
                         std::to_string(model.input_dim()));
    }
    if (data.size() == 0) data.X = Matrix(0, model.input_dim());
    if (model.norm) data = minmax_apply(*model.norm, data);
    const Matrix z = represent(&model, chosen, data.X, kernels::Exec::Parallel);

    auto out = open_out(output);
    const std::size_t width = z.cols() ? z.cols() : model.latent_dim();
    for (std::size_t c = 0; c < width; ++c) out << (c ? "," : "") << "z" << c;
    out << '\n';
    for (std::size_t r = 0; r < z.rows(); ++r) {
        auto row = z.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << fmt::format("{}", row[c]);
        out << '\n';
    }
    return z.rows();
}

std::vector<SweepCell> cmd_sweep(const RunConfig& config) {
    config.validate();
    if (config.sweep_scales.empty() || config.sweep_latent_dims.empty()) {
        throw std::invalid_argument("sweep grids must be non-empty");
    }
    const DataSplits splits = load_splits(config);
    const NormStats stats = minmax_fit(splits.train);
    const Dataset train = minmax_apply(stats, splits.train);
    const Dataset test = minmax_apply(stats, splits.test);
    const int normal = resolve_normal_class(config, test.class_names);

    std::vector<double> scales = config.sweep_scales;
    std::vector<std::size_t> dims = config.sweep_latent_dims;
    std::sort(scales.begin(), scales.end());
    std::sort(dims.begin(), dims.end());

    std::vector<SweepCell> cells;
    for (double s : scales) {
        for (std::size_t dz : dims) {
            SweepCell cell{s, dz, std::nullopt, std::nullopt, {}};
            try {
                TrainConfig tc = config.train;
                tc.scale = s;
                tc.latent_dim = dz;
                const auto result = train_tae(train, tc);
                const auto r = evaluate_detection(infer_representation(result.model, train.X, tc.exec), train.labels,
                                                  infer_representation(result.model, test.X, tc.exec), test.labels,
                                                  test.class_count(), normal, config.max_depths, config.min_leaf,
                                                  tc.validation_fraction, tc.seed);
                cell.accuracy = r.accuracy;
                cell.f_score = r.f_score;
                spdlog::info("sweep S={} D_z={}: accuracy {:.4f}", s, dz, r.accuracy);
            } catch (const std::exception& e) {
                cell.error = e.what();
                spdlog::warn("sweep S={} D_z={} failed: {}", s, dz, e.what());
            }
            cells.push_back(std::move(cell));
        }
    }

    ensure_dir(config.out_dir);
    auto csv = open_out(config.out_dir / "sweep.csv");
    csv << "scale,latent_dim,accuracy,f_score,error\n";
    json rows = json::array();
    for (const auto& c : cells) {
        std::string err = c.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        csv << fmt::format("{},{},{},{},{}\n", c.scale, c.latent_dim, c.accuracy ? fmt::format("{}", *c.accuracy) : "",
                           c.f_score ? fmt::format("{}", *c.f_score) : "", err);
        rows.push_back({{"scale", c.scale},
                        {"latent_dim", c.latent_dim},
                        {"accuracy", c.accuracy ? json(*c.accuracy) : json(nullptr)},
                        {"f_score_macro", c.f_score ? json(*c.f_score) : json(nullptr)},
                        {"error", c.error.empty() ? json(nullptr) : json(c.error)}});
    }
    open_out(config.out_dir / "sweep.json")
        << json{{"schema", "twin-ae-sweep-report"}, {"schema_version", 1}, {"cells", rows}}.dump(2) << '\n';
    return cells;
}

void cmd_synth(const BlobSpec& spec, const std::filesystem::path& output) {
    if (output.has_parent_path()) ensure_dir(output.parent_path());
    write_csv(output, synth_blobs(spec));
}

}  // namespace tae
