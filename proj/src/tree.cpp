#include "tae/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "tae/errors.hpp"

namespace tae {

double gini_impurity(std::span<const double> class_counts) {
    double n = 0.0;
    for (double c : class_counts) n += c;
    if (n <= 0.0) return 0.0;
    double sum_sq = 0.0;
    for (double c : class_counts) sum_sq += (c / n) * (c / n);
    return 1.0 - sum_sq;
}

DecisionTree::DecisionTree(std::vector<TreeNode> nodes, std::size_t input_dim, std::size_t class_count)
    : nodes_(std::move(nodes)), input_dim_(input_dim), class_count_(class_count) {
    if (nodes_.empty()) throw std::invalid_argument("DecisionTree: no nodes");
    for (const auto& n : nodes_) {
        if (n.is_leaf()) {
            if (n.distribution.size() != class_count_) throw ShapeError("DecisionTree: leaf distribution size");
            continue;
        }
        const auto bad = [&](int i) { return i < 0 || static_cast<std::size_t>(i) >= nodes_.size(); };
        if (static_cast<std::size_t>(n.feature) >= input_dim_ || bad(n.left) || bad(n.right) ||
            !std::isfinite(n.threshold)) {
            throw std::invalid_argument("DecisionTree: malformed split node");
        }
    }
}

namespace {

struct Builder {
    const Matrix& X;
    std::span<const int> labels;
    std::size_t classes;
    TreeParams params;
    std::vector<TreeNode> nodes;

    Vector counts_of(std::span<const std::size_t> idx) const {
        Vector counts(classes, 0.0);
        for (std::size_t i : idx) counts[static_cast<std::size_t>(labels[i])] += 1.0;
        return counts;
    }

    struct Split {
        int feature = -1;
        double threshold = 0.0;
        double impurity = std::numeric_limits<double>::infinity();
    };

    Split best_split(std::span<const std::size_t> idx, const Vector& parent_counts) const {
        Split best;
        const std::size_t n = idx.size();
        std::vector<std::size_t> order(idx.begin(), idx.end());
        for (std::size_t f = 0; f < X.cols(); ++f) {
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return X(a, f) < X(b, f) || (X(a, f) == X(b, f) && a < b);
            });
            Vector left(classes, 0.0);
            Vector right = parent_counts;
            for (std::size_t k = 0; k + 1 < n; ++k) {
                const auto label = static_cast<std::size_t>(labels[order[k]]);
                left[label] += 1.0;
                right[label] -= 1.0;
                const double here = X(order[k], f);
                const double next = X(order[k + 1], f);
                if (!(here < next)) continue;
                const std::size_t n_left = k + 1;
                if (n_left < params.min_leaf || n - n_left < params.min_leaf) continue;
                const double weighted = static_cast<double>(n_left) * gini_impurity(left) +
                                        static_cast<double>(n - n_left) * gini_impurity(right);
                // Earlier (feature, threshold) wins unless strictly better.
                if (weighted < best.impurity - 1e-12) {
                    double mid = here + (next - here) / 2.0;
                    if (!(mid < next)) mid = here;
                    best = {static_cast<int>(f), mid, weighted};
                }
            }
        }
        return best;
    }

    int grow(std::vector<std::size_t> idx, std::size_t depth) {
        Vector counts = counts_of(idx);
        const double n = static_cast<double>(idx.size());
        Vector distribution(classes);
        for (std::size_t c = 0; c < classes; ++c) distribution[c] = counts[c] / n;

        const int id = static_cast<int>(nodes.size());
        nodes.push_back({-1, 0.0, -1, -1, distribution});

        const bool pure = std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0.0; }) <= 1;
        if (pure || depth >= params.max_depth || idx.size() < 2 * params.min_leaf) return id;

        const Split split = best_split(idx, counts);
        if (split.feature < 0) return id;

        std::vector<std::size_t> left;
        std::vector<std::size_t> right;
        for (std::size_t i : idx) {
            (X(i, static_cast<std::size_t>(split.feature)) <= split.threshold ? left : right).push_back(i);
        }
        idx.clear();
        idx.shrink_to_fit();
        const int l = grow(std::move(left), depth + 1);
        const int r = grow(std::move(right), depth + 1);
        nodes[static_cast<std::size_t>(id)].feature = split.feature;
        nodes[static_cast<std::size_t>(id)].threshold = split.threshold;
        nodes[static_cast<std::size_t>(id)].left = l;
        nodes[static_cast<std::size_t>(id)].right = r;
        return id;
    }
};

}  // namespace

DecisionTree DecisionTree::fit(const Matrix& X, std::span<const int> labels, std::size_t class_count,
                               TreeParams params) {
    if (X.rows() == 0) throw std::invalid_argument("fit_tree: empty data");
    if (labels.size() != X.rows()) {
        throw ShapeError("fit_tree: " + std::to_string(labels.size()) + " labels for " +
                         std::to_string(X.rows()) + " samples");
    }
    if (params.min_leaf < 1) throw std::invalid_argument("fit_tree: min_leaf must be >= 1");
    for (int l : labels) {
        if (l < 0 || static_cast<std::size_t>(l) >= class_count) {
            throw std::invalid_argument("fit_tree: label " + std::to_string(l) + " outside class range");
        }
    }
    Builder b{X, labels, class_count, params, {}};
    std::vector<std::size_t> all(X.rows());
    std::iota(all.begin(), all.end(), std::size_t{0});
    b.grow(std::move(all), 0);
    return DecisionTree(std::move(b.nodes), X.cols(), class_count);
}

int DecisionTree::predict(std::span<const double> x) const {
    if (x.size() != input_dim_) {
        throw ShapeError("tree_predict: input length " + std::to_string(x.size()) + " != " +
                         std::to_string(input_dim_));
    }
    std::size_t at = 0;
    while (!nodes_[at].is_leaf()) {
        const auto& n = nodes_[at];
        at = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
    }
    const auto& dist = nodes_[at].distribution;
    return static_cast<int>(std::max_element(dist.begin(), dist.end()) - dist.begin());
}

std::vector<int> DecisionTree::predict(const Matrix& X) const {
    std::vector<int> out(X.rows());
    for (std::size_t r = 0; r < X.rows(); ++r) out[r] = predict(X.row(r));
    return out;
}

std::size_t DecisionTree::depth() const {
    std::vector<std::size_t> d(nodes_.size(), 0);
    std::size_t deepest = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        deepest = std::max(deepest, d[i]);
        if (!nodes_[i].is_leaf()) {
            d[static_cast<std::size_t>(nodes_[i].left)] = d[i] + 1;
            d[static_cast<std::size_t>(nodes_[i].right)] = d[i] + 1;
        }
    }
    return deepest;
}

std::size_t DecisionTree::leaf_count() const {
    return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

}  // namespace tae
