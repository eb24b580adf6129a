#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tae/matrix.hpp"

namespace tae {

/// Per-feature range seen on the training split.
struct NormStats {
    Vector min;
    Vector max;

    bool operator==(const NormStats&) const = default;
};

struct Dataset {
    Matrix X;
    std::vector<int> labels;               ///< dense ids into class_names
    std::vector<std::string> class_names;
    std::vector<std::string> feature_names;
    std::optional<NormStats> norm;

    std::size_t size() const { return X.rows(); }
    std::size_t dim() const { return X.cols(); }
    std::size_t class_count() const { return class_names.size(); }

    /// Rows by index; the class catalogue is kept whole.
    Dataset subset(std::span<const std::size_t> indices) const;

    /// Number of samples per class id.
    std::vector<std::size_t> class_counts() const;
};

/// Selects the label column of a CSV: by header name or by zero-based index.
struct LabelColumn {
    std::optional<std::string> name;
    std::optional<std::size_t> index;

    static LabelColumn by_name(std::string n) { return {std::move(n), std::nullopt}; }
    static LabelColumn by_index(std::size_t i) { return {std::nullopt, i}; }
    static LabelColumn none() { return {}; }
    bool present() const { return name.has_value() || index.has_value(); }
};

/// Reads comma-separated numeric features plus one label column. Labels are
/// interned to dense ids in order of first appearance unless `known_classes` is
/// given, in which case ids follow that catalogue and unseen names are appended.
Dataset load_csv(const std::filesystem::path& path, const LabelColumn& label, bool header,
                 const std::vector<std::string>& known_classes = {});

/// Same parser over in-memory text; `source` names the input in errors.
Dataset parse_csv(std::string_view text, const LabelColumn& label, bool header,
                  const std::string& source = "<memory>",
                  const std::vector<std::string>& known_classes = {});

void write_csv(const std::filesystem::path& path, const Dataset& data);

NormStats minmax_fit(const Dataset& train);
/// (x - min) / (max - min); constant features map to 0; no clipping.
Dataset minmax_apply(const NormStats& stats, const Dataset& data);
Vector minmax_apply(const NormStats& stats, std::span<const double> x);

/// Per-class proportional split. `fraction` of every class goes to the second
/// part; a class with a single sample stays in the first part.
std::pair<Dataset, Dataset> stratified_split(const Dataset& data, double fraction, std::uint64_t seed);

/// Same split returned as index lists (first part, second part).
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split_indices(
    std::span<const int> labels, double fraction, std::uint64_t seed);

struct BlobSpec {
    std::size_t classes = 4;
    std::size_t per_class = 400;
    std::size_t dim = 6;
    double radius = 1.0;
    double spread = 1.0;
    std::uint64_t seed = 0;
};

/// Isotropic Gaussian blobs. Class c is centred at radius * (cos, sin)(2 pi c / m)
/// in the first two coordinates, zero elsewhere. 1-D centres are spread evenly over [-radius, radius].
Dataset synth_blobs(const BlobSpec& spec);
std::vector<Vector> blob_centers(const BlobSpec& spec);

}  // namespace tae
