#include "tae/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tae/errors.hpp"

namespace tae {

using nlohmann::json;

std::size_t ModelFile::input_dim() const {
    return std::visit([](const auto& m) { return m.input_dim; }, model);
}

std::size_t ModelFile::latent_dim() const {
    return std::visit([](const auto& m) { return m.latent_dim; }, model);
}

namespace {

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto row = m.row(r);
        rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    return rows;
}

Matrix matrix_from_json(const json& j, std::size_t expect_cols) {
    const auto rows = j.get<std::vector<Vector>>();
    if (rows.empty()) return Matrix(0, expect_cols);
    return Matrix::from_rows(rows);
}

json mlp_to_json(const Mlp& net) {
    json layers = json::array();
    for (const auto& l : net.layers()) {
        layers.push_back({{"in", l.in_dim()},
                          {"out", l.out_dim()},
                          {"activation", std::string(to_string(l.activation))},
                          {"weights", matrix_to_json(l.weights)},
                          {"bias", l.bias}});
    }
    return layers;
}

Mlp mlp_from_json(const json& j) {
    std::vector<DenseLayer> layers;
    for (const auto& l : j) {
        const auto in = l.at("in").get<std::size_t>();
        const auto out = l.at("out").get<std::size_t>();
        DenseLayer layer{matrix_from_json(l.at("weights"), in), l.at("bias").get<Vector>(),
                         parse_activation(l.at("activation").get<std::string>())};
        if (layer.weights.rows() != out || layer.weights.cols() != in) {
            throw ParseError("layer weights do not match declared shape " + std::to_string(out) + "x" +
                             std::to_string(in));
        }
        layers.push_back(std::move(layer));
    }
    return Mlp(std::move(layers));
}

json pca_to_json(const PcaModel& p) {
    return {{"mean", p.mean}, {"components", matrix_to_json(p.components)}, {"explained_variance", p.explained_variance}};
}

PcaModel pca_from_json(const json& j) {
    PcaModel p;
    p.mean = j.at("mean").get<Vector>();
    p.components = matrix_from_json(j.at("components"), p.mean.size());
    p.explained_variance = j.at("explained_variance").get<Vector>();
    return p;
}

json plan_to_json(const TransformPlan& p) {
    return {{"classes", p.classes},
            {"means", p.means},
            {"center", p.center},
            {"directions", p.directions},
            {"scale_base", p.scale_base},
            {"class_scales", p.class_scales},
            {"transformed_means", p.transformed_means},
            {"translations", p.translations}};
}

TransformPlan plan_from_json(const json& j) {
    TransformPlan p;
    p.classes = j.at("classes").get<std::vector<int>>();
    p.means = j.at("means").get<std::vector<Vector>>();
    p.center = j.at("center").get<Vector>();
    p.directions = j.at("directions").get<std::vector<Vector>>();
    p.scale_base = j.at("scale_base").get<double>();
    p.class_scales = j.at("class_scales").get<Vector>();
    p.transformed_means = j.at("transformed_means").get<std::vector<Vector>>();
    p.translations = j.at("translations").get<std::vector<Vector>>();
    const auto n = p.classes.size();
    if (p.means.size() != n || p.directions.size() != n || p.class_scales.size() != n ||
        p.transformed_means.size() != n || p.translations.size() != n) {
        throw ParseError("transformation plan tables disagree on the class count");
    }
    return p;
}

}  // namespace

std::string serialize_model(const ModelFile& file) {
    json j;
    j["format"] = "twin-ae-model";
    j["format_version"] = kModelFormatVersion;
    j["variant"] = file.variant_name();
    j["input_dim"] = file.input_dim();
    j["latent_dim"] = file.latent_dim();
    j["class_names"] = file.class_names;
    j["feature_names"] = file.feature_names;
    j["normalization"] = file.norm ? json{{"min", file.norm->min}, {"max", file.norm->max}} : json(nullptr);

    if (const auto* tae = std::get_if<TwinAutoEncoder>(&file.model)) {
        j["networks"] = {{"encoder", mlp_to_json(tae->encoder)},
                         {"hermaphrodite", mlp_to_json(tae->hermaphrodite)},
                         {"decoder", mlp_to_json(tae->decoder)}};
        j["pca"] = tae->pca ? pca_to_json(*tae->pca) : json(nullptr);
        j["plan"] = tae->plan ? plan_to_json(*tae->plan) : json(nullptr);
    } else {
        const auto& ae = std::get<AutoEncoder>(file.model);
        j["networks"] = {{"encoder", mlp_to_json(ae.encoder)}, {"decoder", mlp_to_json(ae.decoder)}};
    }
    return j.dump(1) + "\n";
}

ModelFile deserialize_model(const std::string& text, const std::string& source) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(source + ": not a JSON document: " + e.what());
    }
    try {
        if (j.value("format", "") != "twin-ae-model") throw ParseError(source + ": not a model file");
        const int version = j.at("format_version").get<int>();
        if (version != kModelFormatVersion) {
            throw ParseError(source + ": unsupported format_version " + std::to_string(version));
        }
        ModelFile file;
        file.class_names = j.at("class_names").get<std::vector<std::string>>();
        file.feature_names = j.at("feature_names").get<std::vector<std::string>>();
        if (!j.at("normalization").is_null()) {
            file.norm = NormStats{j["normalization"].at("min").get<Vector>(), j["normalization"].at("max").get<Vector>()};
        }
        const auto input_dim = j.at("input_dim").get<std::size_t>();
        const auto latent_dim = j.at("latent_dim").get<std::size_t>();
        const auto& nets = j.at("networks");
        const std::string variant = j.at("variant").get<std::string>();
        if (variant == "tae") {
            TwinAutoEncoder m;
            m.input_dim = input_dim;
            m.latent_dim = latent_dim;
            m.encoder = mlp_from_json(nets.at("encoder"));
            m.hermaphrodite = mlp_from_json(nets.at("hermaphrodite"));
            m.decoder = mlp_from_json(nets.at("decoder"));
            if (!j.at("pca").is_null()) m.pca = pca_from_json(j["pca"]);
            if (!j.at("plan").is_null()) m.plan = plan_from_json(j["plan"]);
            if (m.encoder.input_dim() != input_dim || m.encoder.output_dim() != latent_dim ||
                m.hermaphrodite.input_dim() != latent_dim || m.hermaphrodite.output_dim() != input_dim ||
                m.decoder.input_dim() != input_dim || m.decoder.output_dim() != latent_dim ||
                (m.plan && m.plan->latent_dim() != latent_dim)) {
                throw ParseError(source + ": network shapes do not match input_dim/latent_dim");
            }
            file.model = std::move(m);
        } else if (variant == "ae") {
            AutoEncoder m;
            m.input_dim = input_dim;
            m.latent_dim = latent_dim;
            m.encoder = mlp_from_json(nets.at("encoder"));
            m.decoder = mlp_from_json(nets.at("decoder"));
            if (m.encoder.input_dim() != input_dim || m.encoder.output_dim() != latent_dim ||
                m.decoder.input_dim() != latent_dim || m.decoder.output_dim() != input_dim) {
                throw ParseError(source + ": network shapes do not match input_dim/latent_dim");
            }
            file.model = std::move(m);
        } else {
            throw ParseError(source + ": unknown model variant '" + variant + "'");
        }
        if (file.norm && (file.norm->min.size() != input_dim || file.norm->max.size() != input_dim)) {
            throw ParseError(source + ": normalization covers the wrong number of features");
        }
        return file;
    } catch (const json::exception& e) {
        throw ParseError(source + ": malformed model file: " + e.what());
    } catch (const ShapeError& e) {
        throw ParseError(source + ": " + e.what());
    }
}

void save_model(const std::filesystem::path& path, const ModelFile& file) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write model file '" + path.string() + "'");
    out << serialize_model(file);
    if (!out) throw ParseError("failed writing model file '" + path.string() + "'");
}

ModelFile load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open model file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize_model(buf.str(), path.string());
}

}  // namespace tae
