#include "acd/train/trainer.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "acd/algo/rollout_buffer.hpp"
#include "acd/algo/update.hpp"
#include "acd/core/serial.hpp"
#include "acd/models/acd_model.hpp"
#include "acd/models/generator.hpp"
#include "acd/preprocess/vec_env.hpp"
#include "acd/train/checkpoint.hpp"
#include "acd/train/config_io.hpp"
#include "acd/train/metrics.hpp"

namespace acd {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::optional<Algorithm> parse_algorithm(const std::string& name) {
    if (name == "ppo") return Algorithm::kPpo;
    if (name == "acd") return Algorithm::kAcd;
    return std::nullopt;
}

namespace {

// Random-stream ids derived from the run seed. Envs get their own base so
// no stream collides with a per-env seed.
enum StreamId : uint64_t {
    kModelInit = 0,
    kGenInit = 1,
    kAction = 2,
    kPerm = 3,
    kFake = 4,
    kGenStep = 5,
    kEnvBase = 1000,
};

std::string now_iso8601() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
    return buf;
}

struct Session {
    Algorithm algo;
    GameKind kind;
    uint64_t seed;
    HyperConfig cfg;

    AcdModel<float> model;
    Generator<float> generator;
    ParamRegistry<float> model_reg, gen_reg;
    std::unique_ptr<RmsProp<float>> model_opt, gen_opt;
    std::unique_ptr<VecEnv> vec;
    Rng action_rng, perm_rng, fake_rng, gen_step_rng;

    int64_t global_frame = 0;
    int64_t updates_done = 0;
    int64_t episodes_done = 0;
    std::deque<double> return_window;        // last 100 completed episode returns
    std::deque<double> frame_reward_window;  // literal per-frame discounted variant
    std::vector<double> episode_discount;    // per env, gamma^(ticks so far)

    RolloutBuffer buffer;
    typename AcdModel<float>::Cache rollout_cache;
    Mat<float> rollout_input;
    std::vector<float> col_probs;

    Session(Algorithm algo_, GameKind kind_, uint64_t seed_, const HyperConfig& cfg_)
        : algo(algo_), kind(kind_), seed(seed_), cfg(cfg_) {
        Rng model_rng = Rng::derive(seed, kModelInit);
        Rng gen_rng = Rng::derive(seed, kGenInit);
        action_rng = Rng::derive(seed, kAction);
        perm_rng = Rng::derive(seed, kPerm);
        fake_rng = Rng::derive(seed, kFake);
        gen_step_rng = Rng::derive(seed, kGenStep);

        vec = std::make_unique<VecEnv>(kind, cfg.n_env,
                                       Rng::splitmix64(seed ^ kEnvBase),
                                       cfg.max_episode_ticks);
        model.init(model_rng, vec->action_count());
        generator.init(gen_rng, cfg.latent_dim);
        model.register_params(model_reg);
        generator.register_params(gen_reg, "gen");
        model_opt = std::make_unique<RmsProp<float>>(
            model_reg, static_cast<float>(cfg.rmsprop_alpha),
            static_cast<float>(cfg.rmsprop_eps));
        gen_opt = std::make_unique<RmsProp<float>>(
            gen_reg, static_cast<float>(cfg.rmsprop_alpha),
            static_cast<float>(cfg.rmsprop_eps));
        episode_discount.assign(cfg.n_env, 1.0);
        buffer.resize(cfg.horizon, cfg.n_env);
        col_probs.resize(vec->action_count());
    }

    void batch_current_obs() {
        const auto& obs = vec->obs();
        const int n = cfg.n_env;
        rollout_input.ensure(Observation::kChannels, n * Observation::kPixels);
        for (int c = 0; c < Observation::kChannels; c++) {
            float* dst = rollout_input.row(c);
            for (int i = 0; i < n; i++) {
                std::memcpy(dst + static_cast<size_t>(i) * Observation::kPixels,
                            obs[i].channel(c), Observation::kPixels * sizeof(float));
            }
        }
    }

    void collect_rollout() {
        const int n = cfg.n_env;
        std::vector<int> actions(n);
        for (int t = 0; t < cfg.horizon; t++) {
            const auto& obs = vec->obs();
            for (int i = 0; i < n; i++) buffer.obs[buffer.at(t, i)] = obs[i];

            batch_current_obs();
            model.forward_trunk(rollout_input, n, rollout_cache);
            model.forward_actor(rollout_cache);
            model.forward_critic(rollout_cache);
            for (int i = 0; i < n; i++) {
                for (int a = 0; a < vec->action_count(); a++)
                    col_probs[a] = rollout_cache.probs(a, i);
                const int act = action_rng.categorical(col_probs.data(),
                                                       vec->action_count());
                actions[i] = act;
                const size_t idx = buffer.at(t, i);
                buffer.actions[idx] = act;
                buffer.logprob_old[idx] = rollout_cache.logps(act, i);
                buffer.values[idx] = rollout_cache.values(0, i);
            }
            const VecEnv::StepOut out = vec->step(actions);
            for (int i = 0; i < n; i++) {
                const size_t idx = buffer.at(t, i);
                float r = static_cast<float>(out.rewards[i]);
                if (cfg.clip_rewards) r = std::clamp(r, -1.0f, 1.0f);
                buffer.rewards[idx] = r;
                buffer.dones[idx] = out.dones[i];

                frame_reward_window.push_back(out.rewards[i] * episode_discount[i]);
                if (frame_reward_window.size() > 100) frame_reward_window.pop_front();
                episode_discount[i] *= std::pow(cfg.gamma, 3.0);
                if (out.dones[i]) episode_discount[i] = 1.0;
            }
            global_frame += 3LL * n;
        }
        batch_current_obs();
        model.forward_trunk(rollout_input, n, rollout_cache);
        model.forward_critic(rollout_cache);
        for (int i = 0; i < n; i++)
            buffer.bootstrap_values[i] = rollout_cache.values(0, i);

        for (const CompletedEpisode& ep : vec->drain_completed()) {
            episodes_done++;
            return_window.push_back(ep.episode_return);
            if (return_window.size() > 100) return_window.pop_front();
        }
        buffer.gae_done = false;
    }

    double curve_value() const {
        const std::deque<double>& window =
            cfg.curve_metric == CurveMetric::kLast100Episodes ? return_window
                                                              : frame_reward_window;
        if (window.empty()) return std::nan("");
        double sum = 0;
        for (const double v : window) sum += v;
        return sum / static_cast<double>(window.size());
    }

    void save_checkpoint(const std::string& path) const {
        std::vector<Section> sections;
        sections.push_back({"config", config_to_text(cfg)});

        std::ostringstream meta;
        meta << "algorithm=" << algorithm_name(algo) << '\n'
             << "game=" << game_kind_name(kind) << '\n'
             << "seed=" << seed << '\n'
             << "global_frame=" << global_frame << '\n'
             << "updates_done=" << updates_done << '\n'
             << "episodes_done=" << episodes_done << '\n';
        sections.push_back({"meta", meta.str()});

        std::ostringstream rng;
        rng << "action=" << action_rng.serialize() << '\n'
            << "perm=" << perm_rng.serialize() << '\n'
            << "fake=" << fake_rng.serialize() << '\n'
            << "gen_step=" << gen_step_rng.serialize() << '\n';
        sections.push_back({"rng", rng.str()});

        std::ostringstream env(std::ios::binary);
        vec->save_state(env);
        sections.push_back({"env", env.str()});

        std::vector<std::pair<std::string, const Mat<float>*>> arrays;
        for (const auto& [name, p] : model_reg.params) arrays.emplace_back(name, &p->val);
        for (const auto& [name, m] : model_reg.state) arrays.emplace_back(name, m);
        for (const auto& [name, p] : gen_reg.params) arrays.emplace_back(name, &p->val);
        for (const auto& [name, m] : gen_reg.state) arrays.emplace_back(name, m);
        sections.push_back({"params", pack_named_arrays(arrays)});

        std::vector<std::pair<std::string, const Mat<float>*>> opt;
        for (size_t i = 0; i < model_reg.params.size(); i++)
            opt.emplace_back("opt." + model_reg.params[i].first,
                             &model_opt->accumulators()[i]);
        for (size_t i = 0; i < gen_reg.params.size(); i++)
            opt.emplace_back("opt." + gen_reg.params[i].first,
                             &gen_opt->accumulators()[i]);
        sections.push_back({"opt", pack_named_arrays(opt)});

        std::ostringstream window(std::ios::binary);
        write_pod<uint32_t>(window, static_cast<uint32_t>(return_window.size()));
        for (const double v : return_window) write_pod(window, v);
        write_pod<uint32_t>(window, static_cast<uint32_t>(frame_reward_window.size()));
        for (const double v : frame_reward_window) write_pod(window, v);
        for (const double v : episode_discount) write_pod(window, v);
        sections.push_back({"window", window.str()});

        const std::string tmp = path + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write checkpoint: " + tmp);
            write_container(out, sections);
        }
        fs::rename(tmp, path);
    }

    void load_checkpoint(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
        const std::vector<Section> sections = read_container(in);

        const Section* config = find_section(sections, "config");
        if (!config) throw std::runtime_error("checkpoint: missing config section");
        if (config->payload != config_to_text(cfg))
            throw std::runtime_error(
                "checkpoint: config does not match the requested run");

        const Section* meta = find_section(sections, "meta");
        if (!meta) throw std::runtime_error("checkpoint: missing meta section");
        std::istringstream ms(meta->payload);
        std::string line;
        while (std::getline(ms, line)) {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = line.substr(0, eq), val = line.substr(eq + 1);
            if (key == "algorithm" && val != algorithm_name(algo))
                throw std::runtime_error("checkpoint: algorithm mismatch");
            if (key == "game" && val != game_kind_name(kind))
                throw std::runtime_error("checkpoint: game mismatch");
            if (key == "global_frame") global_frame = std::stoll(val);
            if (key == "updates_done") updates_done = std::stoll(val);
            if (key == "episodes_done") episodes_done = std::stoll(val);
        }

        const Section* rng = find_section(sections, "rng");
        if (!rng) throw std::runtime_error("checkpoint: missing rng section");
        std::istringstream rs(rng->payload);
        while (std::getline(rs, line)) {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = line.substr(0, eq), val = line.substr(eq + 1);
            if (key == "action") action_rng.deserialize(val);
            if (key == "perm") perm_rng.deserialize(val);
            if (key == "fake") fake_rng.deserialize(val);
            if (key == "gen_step") gen_step_rng.deserialize(val);
        }

        const Section* env = find_section(sections, "env");
        if (!env) throw std::runtime_error("checkpoint: missing env section");
        std::istringstream es(env->payload, std::ios::binary);
        vec->load_state(es);

        const Section* params = find_section(sections, "params");
        if (!params) throw std::runtime_error("checkpoint: missing params section");
        std::vector<std::pair<std::string, Mat<float>*>> arrays;
        for (auto& [name, p] : model_reg.params) arrays.emplace_back(name, &p->val);
        for (auto& [name, m] : model_reg.state) arrays.emplace_back(name, m);
        for (auto& [name, p] : gen_reg.params) arrays.emplace_back(name, &p->val);
        for (auto& [name, m] : gen_reg.state) arrays.emplace_back(name, m);
        unpack_named_arrays(params->payload, arrays);

        const Section* opt = find_section(sections, "opt");
        if (!opt) throw std::runtime_error("checkpoint: missing opt section");
        std::vector<std::pair<std::string, Mat<float>*>> opt_arrays;
        for (size_t i = 0; i < model_reg.params.size(); i++)
            opt_arrays.emplace_back("opt." + model_reg.params[i].first,
                                    &model_opt->accumulators()[i]);
        for (size_t i = 0; i < gen_reg.params.size(); i++)
            opt_arrays.emplace_back("opt." + gen_reg.params[i].first,
                                    &gen_opt->accumulators()[i]);
        unpack_named_arrays(opt->payload, opt_arrays);

        const Section* window = find_section(sections, "window");
        if (!window) throw std::runtime_error("checkpoint: missing window section");
        std::istringstream ws(window->payload, std::ios::binary);
        return_window.clear();
        frame_reward_window.clear();
        const auto n_ret = read_pod<uint32_t>(ws);
        for (uint32_t i = 0; i < n_ret; i++) return_window.push_back(read_pod<double>(ws));
        const auto n_fr = read_pod<uint32_t>(ws);
        for (uint32_t i = 0; i < n_fr; i++)
            frame_reward_window.push_back(read_pod<double>(ws));
        for (auto& v : episode_discount) v = read_pod<double>(ws);
    }
};

void write_manifest(const std::string& path, const Session& s, int64_t total_frames,
                    const std::string& start_time, const std::string& end_time,
                    bool complete) {
    json j;
    j["algorithm"] = algorithm_name(s.algo);
    j["game"] = game_kind_name(s.kind);
    j["seed"] = s.seed;
    j["config"] = config_to_text(s.cfg);
    j["total_frames"] = total_frames;
    j["frames_done"] = s.global_frame;
    j["updates_done"] = s.updates_done;
    j["episodes_done"] = s.episodes_done;
    j["status"] = complete ? "complete" : "running";
    j["start_time"] = start_time;
    j["end_time"] = end_time;
    j["metrics"] = "metrics.csv";
    j["checkpoint"] = "checkpoint.bin";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write manifest: " + path);
    out << j.dump(2) << '\n';
}

}  // namespace

TrainResult train(Algorithm algorithm, GameKind kind, int64_t total_frames,
                  uint64_t seed, const HyperConfig& cfg, const std::string& out_dir,
                  bool resume) {
    cfg.validate();
    if (total_frames < 1) throw std::invalid_argument("train: total_frames must be >= 1");
    fs::create_directories(out_dir);

    Session s(algorithm, kind, seed, cfg);
    const std::string metrics_path = (fs::path(out_dir) / "metrics.csv").string();
    const std::string checkpoint_path = (fs::path(out_dir) / "checkpoint.bin").string();
    const std::string manifest_path = (fs::path(out_dir) / "manifest.json").string();

    const bool resuming = resume && fs::exists(checkpoint_path);
    if (resuming) s.load_checkpoint(checkpoint_path);

    MetricsWriter metrics;
    metrics.open(metrics_path, resuming);

    const std::string start_time = now_iso8601();
    write_manifest(manifest_path, s, total_frames, start_time, "", false);

    UpdateContext<float> ctx;
    ctx.model = &s.model;
    ctx.generator = &s.generator;
    ctx.model_opt = s.model_opt.get();
    ctx.gen_opt = s.gen_opt.get();
    ctx.perm_rng = &s.perm_rng;
    ctx.fake_rng = &s.fake_rng;
    ctx.gen_step_rng = &s.gen_step_rng;

    while (s.global_frame < total_frames) {
        s.collect_rollout();
        compute_gae(s.buffer, cfg.gamma, cfg.lambda);
        const UpdateStats stats =
            algorithm == Algorithm::kAcd
                ? acd_update(ctx, s.model_reg, s.gen_reg, s.buffer, cfg)
                : ppo_update(ctx, s.model_reg, s.gen_reg, s.buffer, cfg);
        s.updates_done++;

        MetricsRecord row;
        row.global_frame = s.global_frame;
        row.episodes_done = s.episodes_done;
        row.mean_return_100 = s.curve_value();
        row.policy_loss = stats.policy_loss;
        row.value_loss = stats.value_loss;
        row.entropy = stats.entropy;
        row.d_loss = stats.d_loss;
        row.g_loss = stats.g_loss;
        row.real_score = stats.real_score;
        row.fake_score = stats.fake_score;
        metrics.append(row);

        if (s.updates_done % cfg.checkpoint_every == 0)
            s.save_checkpoint(checkpoint_path);
    }
    s.save_checkpoint(checkpoint_path);
    write_manifest(manifest_path, s, total_frames, start_time, now_iso8601(), true);

    TrainResult result;
    result.algorithm = algorithm;
    result.kind = kind;
    result.seed = seed;
    result.frames_done = s.global_frame;
    result.updates_done = s.updates_done;
    result.episodes_done = s.episodes_done;
    result.final_mean_return_100 = s.curve_value();
    result.metrics_path = metrics_path;
    result.checkpoint_path = checkpoint_path;
    result.manifest_path = manifest_path;
    return result;
}

}  // namespace acd
