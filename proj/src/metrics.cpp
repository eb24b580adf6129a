#include "tae/metrics.hpp"

#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "tae/errors.hpp"

namespace tae {

ConfusionMatrix::ConfusionMatrix(std::size_t classes) : classes_(classes), counts_(classes * classes, 0) {}

ConfusionMatrix::ConfusionMatrix(std::size_t classes, std::vector<std::uint64_t> counts)
    : classes_(classes), counts_(std::move(counts)) {
    if (counts_.size() != classes_ * classes_) throw ShapeError("confusion matrix must be square");
}

ConfusionMatrix ConfusionMatrix::from_predictions(std::span<const int> truth, std::span<const int> predicted,
                                                  std::size_t classes) {
    if (truth.size() != predicted.size()) throw ShapeError("truth and predictions differ in length");
    ConfusionMatrix cm(classes);
    for (std::size_t i = 0; i < truth.size(); ++i) cm.add(truth[i], predicted[i]);
    return cm;
}

void ConfusionMatrix::add(int truth, int predicted, std::uint64_t n) {
    if (truth < 0 || predicted < 0 || static_cast<std::size_t>(truth) >= classes_ ||
        static_cast<std::size_t>(predicted) >= classes_) {
        throw std::invalid_argument("confusion matrix: class id out of range");
    }
    counts_[static_cast<std::size_t>(truth) * classes_ + static_cast<std::size_t>(predicted)] += n;
}

std::uint64_t ConfusionMatrix::total() const {
    return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::uint64_t ConfusionMatrix::trace() const {
    std::uint64_t t = 0;
    for (std::size_t c = 0; c < classes_; ++c) t += (*this)(c, c);
    return t;
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t truth) const {
    std::uint64_t s = 0;
    for (std::size_t p = 0; p < classes_; ++p) s += (*this)(truth, p);
    return s;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t predicted) const {
    std::uint64_t s = 0;
    for (std::size_t t = 0; t < classes_; ++t) s += (*this)(t, predicted);
    return s;
}

double accuracy(const ConfusionMatrix& cm) {
    const auto n = cm.total();
    if (n == 0) throw std::invalid_argument("accuracy: empty confusion matrix");
    return static_cast<double>(cm.trace()) / static_cast<double>(n);
}

namespace {

double f1_for(const ConfusionMatrix& cm, std::size_t c) {
    const double tp = static_cast<double>(cm(c, c));
    const double predicted = static_cast<double>(cm.col_sum(c));
    const double actual = static_cast<double>(cm.row_sum(c));
    const double precision = predicted > 0.0 ? tp / predicted : 0.0;
    const double recall = actual > 0.0 ? tp / actual : 0.0;
    const double denom = precision + recall;
    return denom > 0.0 ? 2.0 * precision * recall / denom : 0.0;
}

void check_class(const ConfusionMatrix& cm, int c, const char* what) {
    if (c < 0 || static_cast<std::size_t>(c) >= cm.classes()) {
        throw std::invalid_argument(std::string(what) + " class " + std::to_string(c) + " out of range");
    }
}

}  // namespace

double f_score(const ConfusionMatrix& cm, FScoreMode mode) {
    if (cm.total() == 0) throw std::invalid_argument("f_score: empty confusion matrix");
    if (mode.kind == FScoreMode::Kind::Binary) {
        check_class(cm, mode.positive, "positive");
        return f1_for(cm, static_cast<std::size_t>(mode.positive));
    }
    double sum = 0.0;
    for (std::size_t c = 0; c < cm.classes(); ++c) sum += f1_for(cm, c);
    return sum / static_cast<double>(cm.classes());
}

double mdr(const ConfusionMatrix& cm, int normal_class, DetectionMode mode) {
    check_class(cm, normal_class, "normal");
    const auto normal = static_cast<std::size_t>(normal_class);
    if (mode == DetectionMode::MacroOneVsRest) {
        double sum = 0.0;
        std::size_t used = 0;
        for (std::size_t c = 0; c < cm.classes(); ++c) {
            const auto actual = cm.row_sum(c);
            if (actual == 0) continue;
            sum += static_cast<double>(actual - cm(c, c)) / static_cast<double>(actual);
            ++used;
        }
        if (used == 0) throw std::invalid_argument("mdr: no positive samples");
        return sum / static_cast<double>(used);
    }
    std::uint64_t attacks = 0;
    std::uint64_t missed = 0;
    for (std::size_t t = 0; t < cm.classes(); ++t) {
        if (t == normal) continue;
        attacks += cm.row_sum(t);
        missed += cm(t, normal);
    }
    if (attacks == 0) throw std::invalid_argument("mdr: no attack samples");
    return static_cast<double>(missed) / static_cast<double>(attacks);
}

double far(const ConfusionMatrix& cm, int normal_class, DetectionMode mode) {
    check_class(cm, normal_class, "normal");
    const auto normal = static_cast<std::size_t>(normal_class);
    if (mode == DetectionMode::MacroOneVsRest) {
        const auto n = cm.total();
        double sum = 0.0;
        std::size_t used = 0;
        for (std::size_t c = 0; c < cm.classes(); ++c) {
            const auto negatives = n - cm.row_sum(c);
            if (negatives == 0) continue;
            const auto false_pos = cm.col_sum(c) - cm(c, c);
            sum += static_cast<double>(false_pos) / static_cast<double>(negatives);
            ++used;
        }
        if (used == 0) throw std::invalid_argument("far: no negative samples");
        return sum / static_cast<double>(used);
    }
    const auto normals = cm.row_sum(normal);
    if (normals == 0) throw std::invalid_argument("far: no normal samples");
    return static_cast<double>(normals - cm(normal, normal)) / static_cast<double>(normals);
}

QualityReport representation_quality(const Matrix& X, std::span<const int> labels) {
    if (labels.size() != X.rows()) throw ShapeError("representation_quality: label count mismatch");
    const std::size_t d = X.cols();
    std::map<int, std::pair<Vector, std::size_t>> sums;
    for (std::size_t r = 0; r < X.rows(); ++r) {
        auto& [sum, count] = sums.try_emplace(labels[r], Vector(d, 0.0), 0).first->second;
        for (std::size_t c = 0; c < d; ++c) sum[c] += X(r, c);
        ++count;
    }
    if (sums.size() < 2) throw std::invalid_argument("representation_quality: need at least 2 classes");

    std::map<int, Vector> means;
    for (auto& [id, entry] : sums) {
        for (double& v : entry.first) v /= static_cast<double>(entry.second);
        means.emplace(id, entry.first);
    }

    QualityReport q;
    std::size_t pairs = 0;
    for (auto a = means.begin(); a != means.end(); ++a) {
        for (auto b = std::next(a); b != means.end(); ++b) {
            q.d_between += euclidean_distance(a->second, b->second);
            ++pairs;
        }
    }
    q.d_between /= static_cast<double>(pairs);

    for (std::size_t r = 0; r < X.rows(); ++r) q.d_within += euclidean_distance(X.row(r), means.at(labels[r]));
    q.d_within /= static_cast<double>(X.rows());

    if (q.d_within > 0.0) {
        q.quality = q.d_between / q.d_within;
    } else {
        q.quality = std::numeric_limits<double>::infinity();
        q.unbounded = true;
    }
    return q;
}

}  // namespace tae
