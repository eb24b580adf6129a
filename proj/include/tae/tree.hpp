#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tae/matrix.hpp"

namespace tae {

/// Either an axis-aligned split (x[feature] <= threshold goes left) or a leaf.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    Vector distribution;  ///< class proportions of the training samples reaching this node (sums to 1)

    bool is_leaf() const { return feature < 0; }
};

struct TreeParams {
    std::size_t max_depth = 5;
    std::size_t min_leaf = 1;
};

/// CART classifier with Gini impurity.
class DecisionTree {
public:
    DecisionTree() = default;
    DecisionTree(std::vector<TreeNode> nodes, std::size_t input_dim, std::size_t class_count);

    /// Labels must lie in [0, class_count).
    static DecisionTree fit(const Matrix& X, std::span<const int> labels, std::size_t class_count,
                            TreeParams params);

    /// Argmax of the leaf distribution; ties go to the smaller class id.
    int predict(std::span<const double> x) const;
    std::vector<int> predict(const Matrix& X) const;

    const std::vector<TreeNode>& nodes() const { return nodes_; }
    std::size_t depth() const;
    std::size_t leaf_count() const;
    std::size_t input_dim() const { return input_dim_; }
    std::size_t class_count() const { return class_count_; }

private:
    std::vector<TreeNode> nodes_;
    std::size_t input_dim_ = 0;
    std::size_t class_count_ = 0;
};

double gini_impurity(std::span<const double> class_counts);

}  // namespace tae
