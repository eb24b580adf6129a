#include "tae/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include <spdlog/spdlog.h>

#include "tae/errors.hpp"

namespace tae {

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    Dataset out;
    out.X = X.select_rows(indices);
    if (!labels.empty()) {
        out.labels.reserve(indices.size());
        for (std::size_t i : indices) out.labels.push_back(labels[i]);
    }
    out.class_names = class_names;
    out.feature_names = feature_names;
    out.norm = norm;
    return out;
}

std::vector<std::size_t> Dataset::class_counts() const {
    std::vector<std::size_t> counts(class_names.size(), 0);
    for (int l : labels) ++counts[static_cast<std::size_t>(l)];
    return counts;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::optional<double> parse_real(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

}  // namespace

Dataset parse_csv(std::string_view text, const LabelColumn& label, bool header,
                  const std::string& source, const std::vector<std::string>& known_classes) {
    if (label.name && !header) {
        throw ParseError(source + ": label column given by name but the file has no header");
    }

    Dataset data;
    data.class_names = known_classes;
    std::map<std::string, int, std::less<>> ids;
    for (std::size_t i = 0; i < known_classes.size(); ++i) ids.emplace(known_classes[i], static_cast<int>(i));

    std::optional<std::size_t> label_index = label.index;
    std::optional<std::size_t> columns;
    std::vector<double> values;
    std::size_t rows = 0;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool header_pending = header;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (trim(line).empty()) continue;

        auto fields = split_fields(line);
        if (header_pending) {
            header_pending = false;
            columns = fields.size();
            if (label.name) {
                const auto it = std::find(fields.begin(), fields.end(), *label.name);
                if (it == fields.end()) {
                    throw ParseError(source + ": label column '" + *label.name + "' not found in header");
                }
                label_index = static_cast<std::size_t>(it - fields.begin());
            }
            if (label_index && *label_index >= fields.size()) {
                throw ParseError(source + ": label column index " + std::to_string(*label_index) +
                                 " out of range for " + std::to_string(fields.size()) + " columns");
            }
            for (std::size_t c = 0; c < fields.size(); ++c) {
                if (label_index && c == *label_index) continue;
                data.feature_names.emplace_back(fields[c]);
            }
            continue;
        }

        if (!columns) {
            columns = fields.size();
            if (label_index && *label_index >= fields.size()) {
                throw ParseError(source + ": label column index " + std::to_string(*label_index) +
                                 " out of range for " + std::to_string(fields.size()) + " columns");
            }
            for (std::size_t c = 0; c < fields.size(); ++c) {
                if (label_index && c == *label_index) continue;
                data.feature_names.push_back("f" + std::to_string(data.feature_names.size()));
            }
        }
        if (fields.size() != *columns) {
            throw ParseError(source + ":" + std::to_string(line_no) + ": expected " +
                             std::to_string(*columns) + " fields, found " + std::to_string(fields.size()));
        }
        std::size_t feature = 0;
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (label_index && c == *label_index) {
                const std::string name(fields[c]);
                auto [it, inserted] = ids.try_emplace(name, static_cast<int>(data.class_names.size()));
                if (inserted) data.class_names.push_back(name);
                data.labels.push_back(it->second);
                continue;
            }
            const auto v = parse_real(fields[c]);
            if (!v) {
                throw ParseError(source + ":" + std::to_string(line_no) + ": column '" +
                                 data.feature_names[feature] + "' has non-numeric value '" +
                                 std::string(fields[c]) + "'");
            }
            values.push_back(*v);
            ++feature;
        }
        ++rows;
    }

    const std::size_t dim = data.feature_names.size();
    data.X = Matrix(rows, dim, std::move(values));
    return data;
}

Dataset load_csv(const std::filesystem::path& path, const LabelColumn& label, bool header,
                 const std::vector<std::string>& known_classes) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), label, header, path.string(), known_classes);
}

void write_csv(const std::filesystem::path& path, const Dataset& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path.string() + "'");
    for (std::size_t c = 0; c < data.dim(); ++c) {
        out << (c ? "," : "") << (c < data.feature_names.size() ? data.feature_names[c] : "f" + std::to_string(c));
    }
    if (!data.labels.empty()) out << (data.dim() ? "," : "") << "label";
    out << '\n';
    out.precision(17);
    for (std::size_t r = 0; r < data.size(); ++r) {
        auto row = data.X.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
        if (!data.labels.empty()) {
            out << (row.empty() ? "" : ",") << data.class_names[static_cast<std::size_t>(data.labels[r])];
        }
        out << '\n';
    }
}

NormStats minmax_fit(const Dataset& train) {
    if (train.size() == 0) throw std::invalid_argument("minmax_fit: empty dataset");
    NormStats s{Vector(train.dim()), Vector(train.dim())};
    auto first = train.X.row(0);
    std::copy(first.begin(), first.end(), s.min.begin());
    std::copy(first.begin(), first.end(), s.max.begin());
    for (std::size_t r = 1; r < train.size(); ++r) {
        auto row = train.X.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) {
            s.min[c] = std::min(s.min[c], row[c]);
            s.max[c] = std::max(s.max[c], row[c]);
        }
    }
    return s;
}

Vector minmax_apply(const NormStats& stats, std::span<const double> x) {
    if (x.size() != stats.min.size()) {
        throw ShapeError("minmax_apply: " + std::to_string(x.size()) + " features, stats cover " +
                         std::to_string(stats.min.size()));
    }
    Vector out(x.size());
    for (std::size_t c = 0; c < x.size(); ++c) {
        const double range = stats.max[c] - stats.min[c];
        out[c] = range > 0.0 ? (x[c] - stats.min[c]) / range : 0.0;
    }
    return out;
}

Dataset minmax_apply(const NormStats& stats, const Dataset& data) {
    Dataset out = data;
    for (std::size_t r = 0; r < data.size(); ++r) {
        const Vector y = minmax_apply(stats, data.X.row(r));
        std::copy(y.begin(), y.end(), out.X.row(r).begin());
    }
    out.norm = stats;
    return out;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split_indices(
    std::span<const int> labels, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw std::invalid_argument("split fraction must lie strictly between 0 and 1");
    }
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> a;
    std::vector<std::size_t> b;
    for (auto& [id, idx] : by_class) {
        std::shuffle(idx.begin(), idx.end(), rng);
        if (idx.size() == 1) {
            spdlog::warn("class {} has a single sample; kept out of the held-out part", id);
            a.push_back(idx.front());
            continue;
        }
        auto take = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(idx.size())));
        take = std::clamp<std::size_t>(take, 1, idx.size() - 1);
        b.insert(b.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take));
        a.insert(a.end(), idx.begin() + static_cast<std::ptrdiff_t>(take), idx.end());
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return {std::move(a), std::move(b)};
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& data, double fraction, std::uint64_t seed) {
    auto [a, b] = stratified_split_indices(data.labels, fraction, seed);
    return {data.subset(a), data.subset(b)};
}

std::vector<Vector> blob_centers(const BlobSpec& spec) {
    std::vector<Vector> centers;
    for (std::size_t c = 0; c < spec.classes; ++c) {
        Vector mu(spec.dim, 0.0);
        if (spec.dim == 1) {
            mu[0] = spec.classes == 1
                        ? 0.0
                        : spec.radius * (2.0 * static_cast<double>(c) / static_cast<double>(spec.classes - 1) - 1.0);
        } else {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(c) / static_cast<double>(spec.classes);
            mu[0] = spec.radius * std::cos(angle);
            mu[1] = spec.radius * std::sin(angle);
        }
        centers.push_back(std::move(mu));
    }
    return centers;
}

Dataset synth_blobs(const BlobSpec& spec) {
    if (spec.classes < 2) throw std::invalid_argument("synth_blobs: need at least 2 classes");
    if (spec.dim < 1 || spec.per_class < 1) throw std::invalid_argument("synth_blobs: empty shape");
    if (!(spec.spread > 0.0)) throw std::invalid_argument("synth_blobs: spread must be > 0");

    const auto centers = blob_centers(spec);
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, spec.spread);

    Dataset data;
    data.X = Matrix(spec.classes * spec.per_class, spec.dim);
    for (std::size_t c = 0; c < spec.classes; ++c) {
        data.class_names.push_back("class" + std::to_string(c));
        for (std::size_t i = 0; i < spec.per_class; ++i) {
            auto row = data.X.row(c * spec.per_class + i);
            for (std::size_t k = 0; k < spec.dim; ++k) row[k] = centers[c][k] + noise(rng);
            data.labels.push_back(static_cast<int>(c));
        }
    }
    for (std::size_t k = 0; k < spec.dim; ++k) data.feature_names.push_back("f" + std::to_string(k));
    return data;
}

}  // namespace tae
