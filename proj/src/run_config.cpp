#include "tae/run_config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "tae/errors.hpp"

namespace tae {

std::string_view to_string(Representation r) {
    switch (r) {
        case Representation::Raw: return "raw";
        case Representation::AeLatent: return "ae-latent";
        case Representation::TaeLatent: return "tae-latent";
        case Representation::TaeReconstruction: return "tae-reconstruction";
    }
    return "raw";
}

Representation parse_representation(std::string_view name) {
    if (name == "raw") return Representation::Raw;
    if (name == "ae-latent") return Representation::AeLatent;
    if (name == "tae-latent") return Representation::TaeLatent;
    if (name == "tae-reconstruction") return Representation::TaeReconstruction;
    throw std::invalid_argument("unknown representation '" + std::string(name) +
                                "' (expected raw, ae-latent, tae-latent or tae-reconstruction)");
}

void RunConfig::validate() const {
    if (train_path.empty()) throw std::invalid_argument("config: 'train' path is required");
    if (!std::filesystem::exists(train_path)) {
        throw std::invalid_argument("training data '" + train_path.string() + "' does not exist");
    }
    if (test_path && !std::filesystem::exists(*test_path)) {
        throw std::invalid_argument("test data '" + test_path->string() + "' does not exist");
    }
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw std::invalid_argument("config: test_fraction must lie strictly between 0 and 1");
    }
    if (max_depths.empty()) throw std::invalid_argument("config: max_depth grid is empty");
    if (min_leaf < 1) throw std::invalid_argument("config: min_leaf must be >= 1");
    train.validate();
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

[[noreturn]] void bad(std::string_view key, std::string_view value, std::string_view expected) {
    throw ParseError("config key '" + std::string(key) + "': cannot read '" + std::string(value) + "' as " +
                     std::string(expected));
}

double to_real(std::string_view key, std::string_view v) {
    if (v == "inf" || v == "infinity") return std::numeric_limits<double>::infinity();
    double out = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size()) bad(key, v, "a number");
    return out;
}

std::size_t to_count(std::string_view key, std::string_view v) {
    std::size_t out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size()) bad(key, v, "a non-negative integer");
    return out;
}

bool to_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    bad(key, v, "true/false");
}

template <class T, class Fn>
std::vector<T> to_list(std::string_view v, Fn&& item) {
    std::vector<T> out;
    while (!v.empty()) {
        const auto comma = v.find(',');
        const auto piece = trim(v.substr(0, comma));
        if (!piece.empty()) out.push_back(item(piece));
        if (comma == std::string_view::npos) break;
        v.remove_prefix(comma + 1);
    }
    return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, std::string_view v) {
    std::filesystem::path p{std::string(v)};
    return p.is_absolute() || base.empty() ? p : (base / p).lexically_normal();
}

}  // namespace

void apply_setting(RunConfig& c, std::string_view key, std::string_view raw, const std::filesystem::path& base) {
    const auto v = trim(raw);
    try {
        if (key == "train") c.train_path = resolve(base, v);
        else if (key == "test") c.test_path = v.empty() ? std::nullopt : std::optional(resolve(base, v));
        else if (key == "label_column") c.label_column = std::string(v);
        else if (key == "header") c.header = to_bool(key, v);
        else if (key == "test_fraction") c.test_fraction = to_real(key, v);
        else if (key == "normal_class") c.normal_class = std::string(v);
        else if (key == "representation") c.representation = parse_representation(v);
        else if (key == "learning_rate") c.train.learning_rate = to_real(key, v);
        else if (key == "epochs") c.train.epochs = to_count(key, v);
        else if (key == "batch_size") c.train.batch_size = to_count(key, v);
        else if (key == "early_stop_window") c.train.early_stop_window = to_count(key, v);
        else if (key == "early_stop_threshold") c.train.early_stop_threshold = to_real(key, v);
        else if (key == "validation_fraction") c.train.validation_fraction = to_real(key, v);
        else if (key == "scale") c.train.scale = to_real(key, v);
        else if (key == "latent_dim") c.train.latent_dim = to_count(key, v);
        else if (key == "hidden") {
            const auto widths = to_list<std::size_t>(v, [&](auto s) { return to_count(key, s); });
            if (widths.size() == 1) {
                c.train.hidden_encoder = c.train.hidden_hermaphrodite = c.train.hidden_decoder = widths[0];
            } else if (widths.size() == 3) {
                c.train.hidden_encoder = widths[0];
                c.train.hidden_hermaphrodite = widths[1];
                c.train.hidden_decoder = widths[2];
            } else {
                bad(key, v, "one width or three comma-separated widths");
            }
        }
        else if (key == "activation") c.train.activation = parse_activation(v);
        else if (key == "center") {
            if (v == "class-means") c.train.center_rule = CenterRule::MeanOfClassMeans;
            else if (v == "samples") c.train.center_rule = CenterRule::SampleMean;
            else bad(key, v, "class-means or samples");
        }
        else if (key == "seed") c.train.seed = to_count(key, v);
        else if (key == "threads") {
            c.threads = to_count(key, v);
            c.train.exec = c.threads == 1 ? kernels::Exec::Serial : kernels::Exec::Parallel;
        }
        else if (key == "max_depth") c.max_depths = to_list<std::size_t>(v, [&](auto s) { return to_count(key, s); });
        else if (key == "min_leaf") c.min_leaf = to_count(key, v);
        else if (key == "sweep_scales") c.sweep_scales = to_list<double>(v, [&](auto s) { return to_real(key, s); });
        else if (key == "sweep_latent_dims") {
            c.sweep_latent_dims = to_list<std::size_t>(v, [&](auto s) { return to_count(key, s); });
        }
        else if (key == "out") c.out_dir = resolve(base, v);
        else throw ParseError("unknown config key '" + std::string(key) + "'");
    } catch (const std::invalid_argument& e) {
        throw ParseError("config key '" + std::string(key) + "': " + e.what());
    }
}

RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir, const std::string& source) {
    RunConfig c;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        std::string_view s = line;
        if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError(source + ":" + std::to_string(line_no) + ": expected 'key = value'");
        }
        try {
            apply_setting(c, trim(s.substr(0, eq)), s.substr(eq + 1), base_dir);
        } catch (const ParseError& e) {
            throw ParseError(source + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str(), path.parent_path(), path.string());
}

}  // namespace tae
