#include "tae/transform.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

#include "tae/errors.hpp"

namespace tae {

std::size_t TransformPlan::index_of(int class_id) const {
    const auto it = std::lower_bound(classes.begin(), classes.end(), class_id);
    if (it == classes.end() || *it != class_id) {
        throw std::invalid_argument("class " + std::to_string(class_id) + " is not in the plan");
    }
    return static_cast<std::size_t>(it - classes.begin());
}

namespace {

Vector mean_of_vectors(std::span<const Vector> vs) {
    Vector m(vs.front().size(), 0.0);
    for (const auto& v : vs) {
        for (std::size_t i = 0; i < m.size(); ++i) m[i] += v[i];
    }
    for (double& x : m) x /= static_cast<double>(vs.size());
    return m;
}

}  // namespace

ClassMeans compute_class_means(const Matrix& projected, std::span<const int> labels, CenterRule rule) {
    if (labels.size() != projected.rows()) {
        throw ShapeError("compute_class_means: " + std::to_string(labels.size()) + " labels for " +
                         std::to_string(projected.rows()) + " samples");
    }
    if (projected.rows() == 0) throw std::invalid_argument("compute_class_means: no samples");

    const std::size_t d = projected.cols();
    std::map<int, std::pair<Vector, std::size_t>> sums;
    for (std::size_t r = 0; r < projected.rows(); ++r) {
        auto& [sum, count] = sums.try_emplace(labels[r], Vector(d, 0.0), 0).first->second;
        auto row = projected.row(r);
        for (std::size_t c = 0; c < d; ++c) sum[c] += row[c];
        ++count;
    }

    ClassMeans out;
    for (auto& [id, entry] : sums) {
        auto& [sum, count] = entry;
        for (double& x : sum) x /= static_cast<double>(count);
        out.classes.push_back(id);
        out.means.push_back(std::move(sum));
    }
    if (rule == CenterRule::MeanOfClassMeans) {
        out.center = mean_of_vectors(out.means);
    } else {
        out.center.assign(d, 0.0);
        for (std::size_t r = 0; r < projected.rows(); ++r) {
            for (std::size_t c = 0; c < d; ++c) out.center[c] += projected(r, c);
        }
        for (double& x : out.center) x /= static_cast<double>(projected.rows());
    }
    return out;
}

std::vector<Vector> compute_directions(std::span<const Vector> means, std::span<const double> center) {
    std::vector<Vector> dirs;
    dirs.reserve(means.size());
    for (const auto& mu : means) {
        if (mu.size() != center.size()) throw ShapeError("compute_directions: length mismatch");
        Vector t(mu.size());
        for (std::size_t i = 0; i < mu.size(); ++i) t[i] = mu[i] >= center[i] ? 1.0 : -1.0;
        dirs.push_back(std::move(t));
    }
    return dirs;
}

TransformedMeans compute_transformed_means(std::span<const Vector> directions, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("transform scale S must be > 0");
    TransformedMeans out;
    for (std::size_t c = 0; c < directions.size(); ++c) {
        const double sc = scale * static_cast<double>(c + 3);
        Vector mu_hat(directions[c].size());
        for (std::size_t i = 0; i < mu_hat.size(); ++i) mu_hat[i] = sc * directions[c][i];
        out.class_scales.push_back(sc);
        out.means.push_back(std::move(mu_hat));
    }
    return out;
}

std::vector<Vector> compute_translation_vectors(std::span<const Vector> means,
                                                std::span<const Vector> transformed_means) {
    if (means.size() != transformed_means.size()) {
        throw ShapeError("compute_translation_vectors: class count mismatch");
    }
    std::vector<Vector> out;
    for (std::size_t c = 0; c < means.size(); ++c) {
        if (means[c].size() != transformed_means[c].size()) {
            throw ShapeError("compute_translation_vectors: length mismatch");
        }
        Vector v(means[c].size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = transformed_means[c][i] - means[c][i];
        out.push_back(std::move(v));
    }
    return out;
}

namespace {

TransformPlan finish_plan(ClassMeans cm, double scale) {
    TransformPlan plan;
    plan.directions = compute_directions(cm.means, cm.center);
    auto transformed = compute_transformed_means(plan.directions, scale);
    plan.translations = compute_translation_vectors(cm.means, transformed.means);
    plan.classes = std::move(cm.classes);
    plan.means = std::move(cm.means);
    plan.center = std::move(cm.center);
    plan.scale_base = scale;
    plan.class_scales = std::move(transformed.class_scales);
    plan.transformed_means = std::move(transformed.means);
    return plan;
}

}  // namespace

TransformPlan build_transform_plan(const Matrix& projected, std::span<const int> labels, double scale,
                                   CenterRule rule) {
    return finish_plan(compute_class_means(projected, labels, rule), scale);
}

TransformPlan build_transform_plan(std::vector<int> classes, std::vector<Vector> means, double scale,
                                   CenterRule rule) {
    if (classes.empty() || classes.size() != means.size()) {
        throw std::invalid_argument("build_transform_plan: need one mean per class");
    }
    if (rule == CenterRule::SampleMean) {
        throw std::invalid_argument("build_transform_plan: sample-mean center needs the samples");
    }
    std::vector<std::size_t> order(classes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return classes[a] < classes[b]; });

    ClassMeans cm;
    for (std::size_t i : order) {
        if (!cm.classes.empty() && cm.classes.back() == classes[i]) {
            throw std::invalid_argument("build_transform_plan: duplicate class id");
        }
        cm.classes.push_back(classes[i]);
        cm.means.push_back(std::move(means[i]));
    }
    cm.center = mean_of_vectors(cm.means);
    return finish_plan(std::move(cm), scale);
}

Vector apply_transform(const TransformPlan& plan, std::span<const double> latent, int class_id) {
    const Vector& v = plan.translation_of(class_id);
    if (latent.size() != v.size()) {
        throw ShapeError("apply_transform: latent length " + std::to_string(latent.size()) +
                         " != " + std::to_string(v.size()));
    }
    Vector z(latent.begin(), latent.end());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] += v[i];
    return z;
}

}  // namespace tae
