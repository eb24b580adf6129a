#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tae/autoencoder.hpp"
#include "tae/data.hpp"
#include "tae/twin_autoencoder.hpp"

namespace tae {

inline constexpr int kModelFormatVersion = 1;

/// A trained model plus what is needed to apply it to raw CSV rows.
struct ModelFile {
    std::variant<TwinAutoEncoder, AutoEncoder> model;
    std::vector<std::string> class_names;
    std::vector<std::string> feature_names;
    std::optional<NormStats> norm;

    bool is_tae() const { return std::holds_alternative<TwinAutoEncoder>(model); }
    std::string variant_name() const { return is_tae() ? "tae" : "ae"; }
    std::size_t input_dim() const;
    std::size_t latent_dim() const;
};

/// JSON text; doubles are written in shortest round-trip form so loading
/// restores every parameter bit for bit.
std::string serialize_model(const ModelFile& file);
ModelFile deserialize_model(const std::string& text, const std::string& source = "<memory>");

void save_model(const std::filesystem::path& path, const ModelFile& file);
ModelFile load_model(const std::filesystem::path& path);

}  // namespace tae
