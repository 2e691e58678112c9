#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "oe/error.hpp"
#include "oe/text.hpp"
#include "oe/trainer.hpp"

namespace oe {

namespace {

std::string canonical_key(std::string_view key) {
    std::string k(key);
    std::replace(k.begin(), k.end(), '_', '-');
    return k;
}

double parse_double(std::string_view key, std::string_view v) {
    std::string s(v);
    std::size_t used = 0;
    double d = 0;
    try {
        d = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw ConfigError("invalid number for " + std::string(key) + ": '" + s + "'");
    return d;
}

template <class Int>
Int parse_int(std::string_view key, std::string_view v) {
    Int out{};
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
        throw ConfigError("invalid integer for " + std::string(key) + ": '" + std::string(v) + "'");
    return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw ConfigError("invalid boolean for " + std::string(key) + ": '" + std::string(v) + "'");
}

std::string fmt(double d) {
    std::ostringstream os;
    os.precision(17);
    os << d;
    return os.str();
}

}  // namespace

void TrainConfig::validate() const {
    if (dim < 1) throw ConfigError("dim must be >= 1");
    if (!(margin_order > 0) || !(margin_cbow > 0) || !(margin_joinmeet > 0))
        throw ConfigError("margins must be > 0");
    if (alpha1 < 0 || alpha2 < 0 || joinmeet_weight() < 0) throw ConfigError("alpha weights must be >= 0");
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (batch_size < 1) throw ConfigError("batch-size must be >= 1");
    if (negatives < 1) throw ConfigError("negatives must be >= 1");
    if (window < 2 || window % 2 != 0) throw ConfigError("window must be even and >= 2");
    if (!(text_ratio > 0)) throw ConfigError("text-ratio must be > 0");
    if (!(learning_rate > 0)) throw ConfigError("learning rate must be > 0");
    if (init_scale < 0) throw ConfigError("init-scale must be >= 0");
    if (subsample < 0) throw ConfigError("subsample must be >= 0");
    if (use_joinmeet && model_kind == ModelKind::bilinear)
        throw ConfigError("join/meet constraints require the order model");
}

void apply_setting(TrainConfig& cfg, std::string_view raw_key, std::string_view value) {
    const std::string key = canonical_key(raw_key);
    if (key == "dim") cfg.dim = parse_int<std::size_t>(key, value);
    else if (key == "margin-order") cfg.margin_order = parse_double(key, value);
    else if (key == "margin-cbow") cfg.margin_cbow = parse_double(key, value);
    else if (key == "margin-joinmeet") cfg.margin_joinmeet = parse_double(key, value);
    else if (key == "alpha1") cfg.alpha1 = parse_double(key, value);
    else if (key == "alpha2") cfg.alpha2 = parse_double(key, value);
    else if (key == "alpha3") cfg.alpha3 = parse_double(key, value);
    else if (key == "window") cfg.window = parse_int<int>(key, value);
    else if (key == "min-count") cfg.min_count = parse_int<std::uint64_t>(key, value);
    else if (key == "subsample") cfg.subsample = parse_double(key, value);
    else if (key == "text-ratio") cfg.text_ratio = parse_double(key, value);
    else if (key == "lr" || key == "learning-rate") cfg.learning_rate = parse_double(key, value);
    else if (key == "beta1") cfg.beta1 = parse_double(key, value);
    else if (key == "beta2") cfg.beta2 = parse_double(key, value);
    else if (key == "epsilon") cfg.epsilon = parse_double(key, value);
    else if (key == "sgd") cfg.plain_sgd = parse_bool(key, value);
    else if (key == "epochs") cfg.epochs = parse_int<int>(key, value);
    else if (key == "batch-size") cfg.batch_size = parse_int<std::size_t>(key, value);
    else if (key == "negatives") cfg.negatives = parse_int<int>(key, value);
    else if (key == "negative-retries") cfg.negative_retries = parse_int<int>(key, value);
    else if (key == "init-scale") cfg.init_scale = parse_double(key, value);
    else if (key == "bilinear-noise") cfg.bilinear_noise = parse_double(key, value);
    else if (key == "seed") cfg.seed = parse_int<std::uint64_t>(key, value);
    else if (key == "model") {
        auto k = parse_model_kind(value);
        if (!k) throw ConfigError("model must be 'order' or 'bilinear'");
        cfg.model_kind = *k;
    } else if (key == "use-text") cfg.use_text = parse_bool(key, value);
    else if (key == "use-joinmeet") cfg.use_joinmeet = parse_bool(key, value);
    else if (key == "use-closure") cfg.use_closure = parse_bool(key, value);
    else if (key == "joinmeet-margin-variant") cfg.joinmeet_margin_variant = parse_bool(key, value);
    else if (key == "corrupt-both-cbow") cfg.corrupt_both_cbow = parse_bool(key, value);
    else if (key == "free-pair-negatives") cfg.free_pair_negatives = parse_bool(key, value);
    else if (key == "checkpoint-optimizer") cfg.checkpoint_optimizer = parse_bool(key, value);
    else throw ConfigError("unknown config key '" + std::string(raw_key) + "'");
}

void apply_config_file(TrainConfig& cfg, const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open " + file.string());
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string trimmed = text::normalize_term(line);
        if (trimmed.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(lineno, "expected key=value");
        std::string key = text::normalize_term(line.substr(0, eq));
        std::string value(line.substr(eq + 1));
        auto b = value.find_first_not_of(" \t");
        auto e = value.find_last_not_of(" \t\r");
        value = b == std::string::npos ? std::string{} : value.substr(b, e - b + 1);
        apply_setting(cfg, key, value);
    }
}

std::map<std::string, std::string> describe(const TrainConfig& c) {
    auto b = [](bool v) { return std::string(v ? "true" : "false"); };
    return {
        {"dim", std::to_string(c.dim)},
        {"margin-order", fmt(c.margin_order)},
        {"margin-cbow", fmt(c.margin_cbow)},
        {"margin-joinmeet", fmt(c.margin_joinmeet)},
        {"alpha1", fmt(c.alpha1)},
        {"alpha2", fmt(c.alpha2)},
        {"alpha3", fmt(c.joinmeet_weight())},
        {"window", std::to_string(c.window)},
        {"min-count", std::to_string(c.min_count)},
        {"subsample", fmt(c.subsample)},
        {"text-ratio", fmt(c.text_ratio)},
        {"lr", fmt(c.learning_rate)},
        {"beta1", fmt(c.beta1)},
        {"beta2", fmt(c.beta2)},
        {"epsilon", fmt(c.epsilon)},
        {"sgd", b(c.plain_sgd)},
        {"epochs", std::to_string(c.epochs)},
        {"batch-size", std::to_string(c.batch_size)},
        {"negatives", std::to_string(c.negatives)},
        {"negative-retries", std::to_string(c.negative_retries)},
        {"init-scale", fmt(c.init_scale)},
        {"bilinear-noise", fmt(c.bilinear_noise)},
        {"seed", std::to_string(c.seed)},
        {"model", std::string(to_string(c.model_kind))},
        {"use-text", b(c.use_text)},
        {"use-joinmeet", b(c.use_joinmeet)},
        {"use-closure", b(c.use_closure)},
        {"joinmeet-margin-variant", b(c.joinmeet_margin_variant)},
        {"corrupt-both-cbow", b(c.corrupt_both_cbow)},
        {"free-pair-negatives", b(c.free_pair_negatives)},
        {"checkpoint-optimizer", b(c.checkpoint_optimizer)},
    };
}

}  // namespace oe
