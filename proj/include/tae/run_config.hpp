#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tae/training.hpp"

namespace tae {

enum class Representation { Raw, AeLatent, TaeLatent, TaeReconstruction };

std::string_view to_string(Representation r);
Representation parse_representation(std::string_view name);

/// Everything one pipeline run needs. Loaded from a flat `key = value` file;
/// see docs/config.md for the keys.
struct RunConfig {
    std::filesystem::path train_path;
    std::optional<std::filesystem::path> test_path;
    std::string label_column = "label";
    bool header = true;
    double test_fraction = 0.30;  ///< held out of train_path when no test file is given
    std::string normal_class;     ///< empty means the first class in the catalogue

    TrainConfig train;
    Representation representation = Representation::TaeReconstruction;

    std::vector<std::size_t> max_depths{5, 10, 20, 50, 100};
    std::size_t min_leaf = 1;

    std::vector<double> sweep_scales{0.0001, 0.01, 0.1, 0.2, 0.5, 1.0, 5, 10, 20, 40, 80};
    std::vector<std::size_t> sweep_latent_dims{1, 2, 5, 10, 15, 20, 30, 40};

    std::filesystem::path out_dir = "out";
    std::size_t threads = 0;  ///< 0 leaves the OpenMP default; 1 selects the serial path


    void validate() const;
};

/// Sets one key; throws ParseError naming the key on bad input.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value,
                   const std::filesystem::path& base_dir = {});

RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir = {},
                           const std::string& source = "<memory>");
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace tae
