#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tae/matrix.hpp"

namespace tae {

/// counts(true, predicted)
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(std::size_t classes);
    ConfusionMatrix(std::size_t classes, std::vector<std::uint64_t> counts);

    static ConfusionMatrix from_predictions(std::span<const int> truth, std::span<const int> predicted,
                                            std::size_t classes);

    void add(int truth, int predicted, std::uint64_t n = 1);

    std::uint64_t operator()(std::size_t truth, std::size_t predicted) const {
        return counts_[truth * classes_ + predicted];
    }
    std::size_t classes() const { return classes_; }
    std::uint64_t total() const;
    std::uint64_t trace() const;
    std::uint64_t row_sum(std::size_t truth) const;
    std::uint64_t col_sum(std::size_t predicted) const;

    bool operator==(const ConfusionMatrix&) const = default;

private:
    std::size_t classes_;
    std::vector<std::uint64_t> counts_;
};

double accuracy(const ConfusionMatrix& cm);

struct FScoreMode {
    enum class Kind { Macro, Binary } kind = Kind::Macro;
    int positive = 0;  ///< positive class for Binary

    static FScoreMode macro() { return {}; }
    static FScoreMode binary(int positive_class) { return {Kind::Binary, positive_class}; }
};

/// Per-class F1 (zero when precision + recall has a zero denominator), macro
/// averaged or taken for a single positive class.
double f_score(const ConfusionMatrix& cm, FScoreMode mode = FScoreMode::macro());

/// How multiclass FAR/MDR are reduced.
enum class DetectionMode {
    NormalVsAttack,   ///< every non-normal class is an attack; any attack prediction counts as a detection
    MacroOneVsRest,   ///< average of the per-class one-vs-rest rates
};

/// Miss detection rate: attacks predicted as normal over all attacks.
double mdr(const ConfusionMatrix& cm, int normal_class, DetectionMode mode = DetectionMode::NormalVsAttack);

/// False alarm rate: normal samples predicted as an attack over all normal samples.
double far(const ConfusionMatrix& cm, int normal_class, DetectionMode mode = DetectionMode::NormalVsAttack);

struct QualityReport {
    double d_between = 0.0;  ///< mean distance over unordered pairs of class means
    double d_within = 0.0;   ///< mean distance of samples to their class mean
    double quality = 0.0;    ///< d_between / d_within; +inf when d_within == 0
    bool unbounded = false;  ///< set when d_within == 0
};

/// Needs at least two non-empty classes. Labels are arbitrary ints.
QualityReport representation_quality(const Matrix& X, std::span<const int> labels);

}  // namespace tae
