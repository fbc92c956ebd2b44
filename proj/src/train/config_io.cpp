#include "acd/train/config_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace acd {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& origin, int line, const std::string& v) {
    try {
        size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) fail(origin, line, "trailing characters in number '" + v + "'");
        return d;
    } catch (const std::runtime_error&) {
        throw;
    } catch (const std::exception&) {
        fail(origin, line, "expected a number, got '" + v + "'");
    }
}

int64_t parse_int(const std::string& origin, int line, const std::string& v) {
    int64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        fail(origin, line, "expected an integer, got '" + v + "'");
    return out;
}

bool parse_bool(const std::string& origin, int line, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    fail(origin, line, "expected true/false, got '" + v + "'");
}

}  // namespace

HyperConfig config_from_text(const std::string& text, const std::string& origin) {
    HyperConfig cfg;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        lineno++;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(origin, lineno, "expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) fail(origin, lineno, "empty key");

        if (key == "gamma") cfg.gamma = parse_double(origin, lineno, val);
        else if (key == "lambda") cfg.lambda = parse_double(origin, lineno, val);
        else if (key == "clip_eps") cfg.clip_eps = parse_double(origin, lineno, val);
        else if (key == "minibatch") cfg.minibatch = static_cast<int>(parse_int(origin, lineno, val));
        else if (key == "rmsprop_alpha") cfg.rmsprop_alpha = parse_double(origin, lineno, val);
        else if (key == "rmsprop_eps") cfg.rmsprop_eps = parse_double(origin, lineno, val);
        else if (key == "learning_rate") cfg.learning_rate = parse_double(origin, lineno, val);
        else if (key == "n_env") cfg.n_env = static_cast<int>(parse_int(origin, lineno, val));
        else if (key == "horizon") cfg.horizon = static_cast<int>(parse_int(origin, lineno, val));
        else if (key == "epochs") cfg.epochs = static_cast<int>(parse_int(origin, lineno, val));
        else if (key == "latent_dim") cfg.latent_dim = static_cast<int>(parse_int(origin, lineno, val));
        else if (key == "c1") cfg.c1 = parse_double(origin, lineno, val);
        else if (key == "c2") cfg.c2 = parse_double(origin, lineno, val);
        else if (key == "c_v") cfg.c_v = parse_double(origin, lineno, val);
        else if (key == "c_d") cfg.c_d = parse_double(origin, lineno, val);
        else if (key == "total_frames") cfg.total_frames = parse_int(origin, lineno, val);
        else if (key == "normalize_advantages") cfg.normalize_advantages = parse_bool(origin, lineno, val);
        else if (key == "max_grad_norm") cfg.max_grad_norm = parse_double(origin, lineno, val);
        else if (key == "clip_rewards") cfg.clip_rewards = parse_bool(origin, lineno, val);
        else if (key == "max_episode_ticks") cfg.max_episode_ticks = static_cast<int>(parse_int(origin, lineno, val));
        else if (key == "checkpoint_every") cfg.checkpoint_every = static_cast<int>(parse_int(origin, lineno, val));
        else if (key == "curve_metric") {
            if (val == "last100_episodes") cfg.curve_metric = CurveMetric::kLast100Episodes;
            else if (val == "last100_frames_discounted") cfg.curve_metric = CurveMetric::kLast100FramesDiscounted;
            else fail(origin, lineno, "unknown curve_metric '" + val + "'");
        } else {
            fail(origin, lineno, "unknown key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

HyperConfig config_load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return config_from_text(buf.str(), path);
}

std::string config_to_text(const HyperConfig& cfg) {
    std::ostringstream out;
    char num[40];
    auto put = [&](const char* key, double v) {
        std::snprintf(num, sizeof(num), "%.17g", v);
        out << key << " = " << num << '\n';
    };
    put("gamma", cfg.gamma);
    put("lambda", cfg.lambda);
    put("clip_eps", cfg.clip_eps);
    out << "minibatch = " << cfg.minibatch << '\n';
    put("rmsprop_alpha", cfg.rmsprop_alpha);
    put("rmsprop_eps", cfg.rmsprop_eps);
    put("learning_rate", cfg.learning_rate);
    out << "n_env = " << cfg.n_env << '\n';
    out << "horizon = " << cfg.horizon << '\n';
    out << "epochs = " << cfg.epochs << '\n';
    out << "latent_dim = " << cfg.latent_dim << '\n';
    put("c1", cfg.c1);
    put("c2", cfg.c2);
    put("c_v", cfg.c_v);
    put("c_d", cfg.c_d);
    out << "total_frames = " << cfg.total_frames << '\n';
    out << "normalize_advantages = " << (cfg.normalize_advantages ? "true" : "false") << '\n';
    put("max_grad_norm", cfg.max_grad_norm);
    out << "clip_rewards = " << (cfg.clip_rewards ? "true" : "false") << '\n';
    out << "max_episode_ticks = " << cfg.max_episode_ticks << '\n';
    out << "checkpoint_every = " << cfg.checkpoint_every << '\n';
    out << "curve_metric = "
        << (cfg.curve_metric == CurveMetric::kLast100Episodes
                ? "last100_episodes"
                : "last100_frames_discounted")
        << '\n';
    return out.str();
}

}  // namespace acd
