#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tae/matrix.hpp"

namespace tae {

/// Per-class statistics that move the latent clusters apart. Class entries are
/// stored in ascending class-id order; classes[i] is the id for row i of every
/// per-class table.
struct TransformPlan {
    std::vector<int> classes;
    std::vector<Vector> means;              ///< class means in PCA space
    Vector center;                          ///< mean of the class means
    std::vector<Vector> directions;         ///< entries are +1 / -1
    double scale_base = 0.0;                ///< S
    Vector class_scales;                    ///< S * (index + 3)
    std::vector<Vector> transformed_means;  ///< class_scales[c] * directions[c]
    std::vector<Vector> translations;       ///< transformed_means - means

    std::size_t latent_dim() const { return center.size(); }
    std::size_t class_count() const { return classes.size(); }

    /// Row index of a class id; throws std::invalid_argument if unknown.
    std::size_t index_of(int class_id) const;

    const Vector& mean_of(int class_id) const { return means[index_of(class_id)]; }
    const Vector& translation_of(int class_id) const { return translations[index_of(class_id)]; }

    bool operator==(const TransformPlan&) const = default;
};

struct ClassMeans {
    std::vector<int> classes;  ///< ascending
    std::vector<Vector> means;
    Vector center;
};

/// How the reference point for the sign directions is formed.
enum class CenterRule {
    MeanOfClassMeans,  ///< (1/|C|) sum of class means
    SampleMean,        ///< mean over every sample
};

ClassMeans compute_class_means(const Matrix& projected, std::span<const int> labels,
                               CenterRule rule = CenterRule::MeanOfClassMeans);

/// +1 where the class mean is >= the center, -1 otherwise.
std::vector<Vector> compute_directions(std::span<const Vector> means, std::span<const double> center);

struct TransformedMeans {
    Vector class_scales;
    std::vector<Vector> means;
};

/// Class at position c (0-based, ascending id order) gets scale S * (c + 3).
TransformedMeans compute_transformed_means(std::span<const Vector> directions, double scale);

std::vector<Vector> compute_translation_vectors(std::span<const Vector> means,
                                                std::span<const Vector> transformed_means);

/// Runs every step on already projected samples.
TransformPlan build_transform_plan(const Matrix& projected, std::span<const int> labels, double scale,
                                   CenterRule rule = CenterRule::MeanOfClassMeans);

/// Assembles a plan from given class means (used when the means are known directly).
TransformPlan build_transform_plan(std::vector<int> classes, std::vector<Vector> means, double scale,
                                   CenterRule rule = CenterRule::MeanOfClassMeans);

/// z = e + v[class]
Vector apply_transform(const TransformPlan& plan, std::span<const double> latent, int class_id);

}  // namespace tae
