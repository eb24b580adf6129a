#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <set>

#include "tae/data.hpp"
#include "tae/errors.hpp"
#include "tae/tree.hpp"

using namespace tae;

namespace {

std::string error_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("csv with header and named label") {
    const Dataset d = parse_csv("x,y,label\n1,2,a\n3,4,b\n5,6,a\n", LabelColumn::by_name("label"), true);
    CHECK(d.size() == 3);
    CHECK(d.dim() == 2);
    CHECK(d.class_names == std::vector<std::string>{"a", "b"});
    CHECK(d.labels == std::vector<int>{0, 1, 0});
    CHECK(d.feature_names == std::vector<std::string>{"x", "y"});
    CHECK(d.X(2, 1) == 6.0);
}

TEST_CASE("csv without header, label by index, whitespace and CRLF") {
    const Dataset d = parse_csv(" dos , 0.5, 1e-3\r\nnormal,-2,3\r\n", LabelColumn::by_index(0), false);
    CHECK(d.class_names == std::vector<std::string>{"dos", "normal"});
    CHECK(d.X(0, 0) == 0.5);
    CHECK(d.X(0, 1) == 1e-3);
    CHECK(d.X(1, 0) == -2.0);
}

TEST_CASE("known catalogue fixes the ids") {
    const Dataset d = parse_csv("f,label\n1,b\n2,c\n", LabelColumn::by_name("label"), true, "t", {"a", "b"});
    CHECK(d.class_names == std::vector<std::string>{"a", "b", "c"});
    CHECK(d.labels == std::vector<int>{1, 2});
}

TEST_CASE("csv errors are specific") {
    CHECK(error_of([] { parse_csv("x,y\n1,2\n", LabelColumn::by_name("label"), true, "in.csv"); })
              .find("'label'") != std::string::npos);
    const std::string ragged = error_of([] { parse_csv("x,label\n1,a\n2\n", LabelColumn::by_name("label"), true, "in.csv"); });
    CHECK(ragged.find("in.csv:3") != std::string::npos);
    const std::string bad = error_of([] { parse_csv("speed,label\n1,a\nfast,b\n", LabelColumn::by_name("label"), true, "in.csv"); });
    CHECK(bad.find("in.csv:3") != std::string::npos);
    CHECK(bad.find("'speed'") != std::string::npos);
    CHECK_THROWS_AS(load_csv("/nonexistent/file.csv", LabelColumn::by_name("label"), true), ParseError);
}

TEST_CASE("csv round trip through a file") {
    const auto dir = std::filesystem::temp_directory_path() / "tae_test_data";
    std::filesystem::create_directories(dir);
    const Dataset d = synth_blobs({.classes = 3, .per_class = 5, .dim = 3, .seed = 8});
    write_csv(dir / "blobs.csv", d);
    const Dataset back = load_csv(dir / "blobs.csv", LabelColumn::by_name("label"), true);
    CHECK(back.X == d.X);
    CHECK(back.labels == d.labels);
    CHECK(back.class_names == d.class_names);
    CHECK(back.feature_names == d.feature_names);
}

TEST_CASE("min-max normalization") {
    Dataset train;
    train.X = Matrix(3, 2, {2, 7, 3, 7, 4, 7});
    const NormStats s = minmax_fit(train);
    const Dataset t = minmax_apply(s, train);
    CHECK(t.X(0, 0) == 0.0);
    CHECK(t.X(1, 0) == 0.5);
    CHECK(t.X(2, 0) == 1.0);
    for (std::size_t r = 0; r < 3; ++r) CHECK(t.X(r, 1) == 0.0);
    CHECK(t.norm.has_value());
    const double x[] = {5, 9};
    CHECK(minmax_apply(s, x) == Vector{1.5, 0.0});

    const Dataset blobs = synth_blobs({.seed = 3});
    const Dataset nb = minmax_apply(minmax_fit(blobs), blobs);
    for (std::size_t c = 0; c < nb.dim(); ++c) {
        double lo = 1.0, hi = 0.0;
        for (std::size_t r = 0; r < nb.size(); ++r) {
            lo = std::min(lo, nb.X(r, c));
            hi = std::max(hi, nb.X(r, c));
        }
        CHECK(lo == 0.0);
        CHECK(hi == 1.0);
    }
}

TEST_CASE("stratified split") {
    std::vector<int> labels(100);
    for (std::size_t i = 0; i < 100; ++i) labels[i] = static_cast<int>(i % 2);
    const auto [a, b] = stratified_split_indices(labels, 0.3, 1);
    CHECK(a.size() == 70);
    CHECK(b.size() == 30);
    CHECK(std::count_if(b.begin(), b.end(), [&](std::size_t i) { return labels[i] == 0; }) == 15);

    std::set<std::size_t> all(a.begin(), a.end());
    for (std::size_t i : b) CHECK(all.insert(i).second);
    CHECK(all.size() == 100);

    CHECK(stratified_split_indices(labels, 0.3, 1) == stratified_split_indices(labels, 0.3, 1));
    CHECK(stratified_split_indices(labels, 0.3, 1) != stratified_split_indices(labels, 0.3, 2));

    const std::vector<int> four{0, 0, 0, 0, 1, 1, 1, 1};
    const auto [c, d] = stratified_split_indices(four, 0.5, 0);
    CHECK(c.size() == 4);
    CHECK(d.size() == 4);

    const std::vector<int> lonely{0, 0, 0, 1};
    const auto [e, f] = stratified_split_indices(lonely, 0.5, 0);
    CHECK(std::find(e.begin(), e.end(), 3) != e.end());

    // Small classes keep at least one sample on each side.
    const std::vector<int> pair{0, 0, 1, 1, 1, 1, 1, 1, 1, 1};
    const auto [g, h] = stratified_split_indices(pair, 0.1, 0);
    CHECK(std::count_if(h.begin(), h.end(), [&](std::size_t i) { return pair[i] == 0; }) == 1);

    CHECK_THROWS_AS(stratified_split_indices(labels, 0.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(stratified_split_indices(labels, 1.0, 0), std::invalid_argument);
}

TEST_CASE("synthetic blobs") {
    const BlobSpec spec{.classes = 4, .per_class = 400, .dim = 6, .radius = 1.0, .spread = 1.0, .seed = 0};
    const Dataset d = synth_blobs(spec);
    CHECK(d.size() == 1600);
    CHECK(d.dim() == 6);
    CHECK(d.class_count() == 4);
    CHECK(synth_blobs(spec).X == d.X);

    const auto centers = blob_centers(spec);
    CHECK(centers[1][0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK(centers[1][1] == doctest::Approx(1.0));
    for (std::size_t c = 0; c < 4; ++c) {
        for (std::size_t f = 0; f < 6; ++f) {
            double mean = 0.0;
            for (std::size_t r = 0; r < d.size(); ++r) {
                if (d.labels[r] == static_cast<int>(c)) mean += d.X(r, f);
            }
            mean /= 400.0;
            CHECK(std::abs(mean - centers[c][f]) <= 3.0 * spec.spread / std::sqrt(400.0));
        }
    }

    const auto raw_accuracy = [](const Dataset& data) {
        const auto [tr, te] = stratified_split(data, 0.3, 1);
        const DecisionTree t = DecisionTree::fit(tr.X, tr.labels, data.class_count(), {.max_depth = 10});
        const auto p = t.predict(te.X);
        std::size_t hit = 0;
        for (std::size_t i = 0; i < p.size(); ++i) hit += p[i] == te.labels[i];
        return static_cast<double>(hit) / static_cast<double>(p.size());
    };
    BlobSpec tight = spec;
    tight.spread = 0.01;
    CHECK(raw_accuracy(synth_blobs(tight)) > 0.99);
    CHECK(raw_accuracy(d) < 0.8);

    BlobSpec one = spec;
    one.classes = 1;
    CHECK_THROWS_AS(synth_blobs(one), std::invalid_argument);
}
