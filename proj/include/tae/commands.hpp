#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tae/data.hpp"
#include "tae/errors.hpp"
#include "tae/metrics.hpp"
#include "tae/model_io.hpp"
#include "tae/run_config.hpp"
#include "tae/tree.hpp"

namespace tae {

/// Raw (unnormalized) train and test parts for a run. When the config has no
/// test file the training file is split with test_fraction and the seed.
struct DataSplits {
    Dataset train;
    Dataset test;
};
DataSplits load_splits(const RunConfig& config);

/// Feature matrix for `rep` given normalized inputs. Raw passes X through.
Matrix represent(const ModelFile* model, Representation rep, const Matrix& X, kernels::Exec exec);

struct DetectionResult {
    std::size_t max_depth = 0;                    ///< chosen on the validation part
    std::vector<double> validation_accuracy;      ///< one entry per grid depth
    ConfusionMatrix confusion{0};
    double accuracy = 0.0;
    double f_score = 0.0;
    double far = 0.0;
    double mdr = 0.0;
};

/// Picks max_depth from the grid by accuracy on a stratified validation part
/// of the training rows (ties go to the shallower tree), refits on all
/// training rows and scores the test rows.
DetectionResult evaluate_detection(const Matrix& train_X, std::span<const int> train_y, const Matrix& test_X,
                                   std::span<const int> test_y, std::size_t classes, int normal_class,
                                   std::span<const std::size_t> depths, std::size_t min_leaf,
                                   double validation_fraction, std::uint64_t seed);

int resolve_normal_class(const RunConfig& config, const std::vector<std::string>& class_names);

struct TrainOutcome {
    std::filesystem::path model_path;
    std::filesystem::path history_path;
    std::size_t epochs_run = 0;
    std::size_t best_epoch = 0;
};

/// Trains the model the representation calls for and writes
/// <out>/model.json and <out>/history.csv.
TrainOutcome cmd_train(const RunConfig& config);

struct EvalOutcome {
    std::filesystem::path report_json;
    std::filesystem::path report_text;
    DetectionResult detection;
    QualityReport raw_quality;
    QualityReport representation_quality;
};

/// Writes <out>/report.json and <out>/report.txt. `model_path` defaults to
/// <out>/model.json and is ignored for the raw representation.
EvalOutcome cmd_eval(const RunConfig& config, std::optional<std::filesystem::path> model_path = std::nullopt);

/// One output row per input row. Returns the number of rows written.
std::size_t cmd_transform(const std::filesystem::path& model_path, const std::filesystem::path& input,
                          const std::filesystem::path& output, const LabelColumn& label, bool header,
                          std::optional<Representation> rep = std::nullopt);

struct SweepCell {
    double scale = 0.0;
    std::size_t latent_dim = 0;
    std::optional<double> accuracy;
    std::optional<double> f_score;
    std::string error;
};

/// Trains and scores a TAE for every (scale, latent_dim) pair; writes
/// <out>/sweep.csv and <out>/sweep.json. Failed cells are recorded and skipped.
std::vector<SweepCell> cmd_sweep(const RunConfig& config);

void cmd_synth(const BlobSpec& spec, const std::filesystem::path& output);

/// History table: one row per epoch with train and validation components.
void write_history_csv(const std::filesystem::path& path, const std::vector<EpochRecord>& history);

}  // namespace tae
