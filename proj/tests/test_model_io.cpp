#include <doctest.h>

#include <filesystem>
#include <limits>

#include "tae/errors.hpp"
#include "tae/model_io.hpp"

using namespace tae;

namespace {

ModelFile trained_tae() {
    const Dataset d = synth_blobs({.classes = 3, .per_class = 30, .dim = 5, .radius = 1.0, .spread = 0.4, .seed = 6});
    TrainConfig cfg;
    cfg.latent_dim = 2;
    cfg.epochs = 3;
    cfg.batch_size = 16;
    cfg.learning_rate = 1e-2;
    cfg.early_stop_threshold = 0.0;
    ModelFile f;
    f.model = train_tae(d, cfg).model;
    f.class_names = d.class_names;
    f.feature_names = d.feature_names;
    f.norm = minmax_fit(d);
    return f;
}

}  // namespace

TEST_CASE("twin auto-encoder round trip is bit exact") {
    const ModelFile f = trained_tae();
    const std::string text = serialize_model(f);
    const ModelFile back = deserialize_model(text);
    REQUIRE(back.is_tae());
    const auto& a = std::get<TwinAutoEncoder>(f.model);
    const auto& b = std::get<TwinAutoEncoder>(back.model);
    CHECK(a == b);
    CHECK(back.class_names == f.class_names);
    CHECK(back.feature_names == f.feature_names);
    CHECK(back.norm == f.norm);
    CHECK(serialize_model(back) == text);

    const Dataset probe = synth_blobs({.classes = 2, .per_class = 5, .dim = 5, .seed = 99});
    CHECK(infer_representation(a, probe.X) == infer_representation(b, probe.X));
}

TEST_CASE("auto-encoder round trip through a file") {
    const Dataset d = synth_blobs({.classes = 2, .per_class = 10, .dim = 4, .seed = 1});
    TrainConfig cfg;
    cfg.latent_dim = 2;
    cfg.epochs = 0;
    ModelFile f;
    f.model = train_ae(d, cfg).model;
    f.class_names = d.class_names;
    const auto path = std::filesystem::temp_directory_path() / "tae_test_model_ae.json";
    save_model(path, f);
    const ModelFile back = load_model(path);
    CHECK_FALSE(back.is_tae());
    CHECK(back.variant_name() == "ae");
    CHECK(std::get<AutoEncoder>(back.model) == std::get<AutoEncoder>(f.model));
    CHECK_FALSE(back.norm.has_value());
    CHECK(back.latent_dim() == 2);
}

TEST_CASE("extreme doubles survive") {
    ModelFile f = trained_tae();
    auto& m = std::get<TwinAutoEncoder>(f.model);
    auto params = m.parameters();
    params[0][0] = 0.1;
    params[0][1] = std::numeric_limits<double>::denorm_min();
    params[0][2] = -std::numeric_limits<double>::max();
    params[0][3] = 1.0 / 3.0;
    const ModelFile back = deserialize_model(serialize_model(f));
    CHECK(std::get<TwinAutoEncoder>(back.model) == m);
}

TEST_CASE("malformed documents are rejected") {
    CHECK_THROWS_AS(deserialize_model("not json"), ParseError);
    CHECK_THROWS_AS(deserialize_model("{\"format\": \"other\"}"), ParseError);
    std::string text = serialize_model(trained_tae());
    const auto pos = text.find("\"format_version\": 1");
    REQUIRE(pos != std::string::npos);
    std::string future = text;
    future.replace(pos, 19, "\"format_version\": 9");
    CHECK_THROWS_AS(deserialize_model(future), ParseError);
    const auto dim = text.find("\"input_dim\": 5");
    REQUIRE(dim != std::string::npos);
    text.replace(dim, 14, "\"input_dim\": 6");
    CHECK_THROWS_AS(deserialize_model(text), ParseError);
    CHECK_THROWS_AS(load_model("/nonexistent/model.json"), ParseError);
}
