#include "acd/preprocess/vec_env.hpp"

#include <stdexcept>

#include "acd/core/rng.hpp"
#include "acd/core/serial.hpp"

namespace acd {

VecEnv::VecEnv(GameKind kind, int n_env, uint64_t seed, int max_episode_ticks)
    : kind_(kind) {
    if (n_env < 1) throw std::invalid_argument("vec_env: n_env must be >= 1");
    std::vector<uint64_t> seeds(n_env);
    for (int i = 0; i < n_env; i++)
        seeds[i] = Rng::splitmix64(seed ^ Rng::splitmix64(static_cast<uint64_t>(i)));
    *this = VecEnv(kind, seeds, max_episode_ticks);
}

VecEnv::VecEnv(GameKind kind, std::span<const uint64_t> seeds, int max_episode_ticks)
    : kind_(kind) {
    if (seeds.empty()) throw std::invalid_argument("vec_env: n_env must be >= 1");
    for (uint64_t s : seeds) {
        envs_.push_back(std::make_unique<MacroEnv>(make_env(kind, max_episode_ticks)));
        obs_.push_back(envs_.back()->reset(s));
    }
    ep_return_.assign(envs_.size(), 0.0);
    ep_len_.assign(envs_.size(), 0);
    just_reset_.assign(envs_.size(), 0);
}

VecEnv::StepOut VecEnv::step(std::span<const int> actions) {
    const int n = n_env();
    if (static_cast<int>(actions.size()) != n)
        throw std::invalid_argument("vec_env: action count mismatch");

    StepOut out;
    out.rewards.assign(n, 0.0);
    out.dones.assign(n, 0);
    std::vector<MacroStepResult> results(n);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; i++) {
        results[i] = envs_[i]->step(actions[i]);
    }
    // Merge in env-index order.
    for (int i = 0; i < n; i++) {
        MacroStepResult& r = results[i];
        out.rewards[i] = r.reward;
        out.dones[i] = r.done ? 1 : 0;
        ep_return_[i] += r.reward;
        ep_len_[i]++;
        just_reset_[i] = 0;
        if (r.done) {
            const double ep_ret = r.info ? r.info->episode_return : ep_return_[i];
            const int ep_ticks = r.info ? r.info->episode_length : ep_len_[i] * 3;
            completed_.push_back({i, ep_ret, ep_ticks});
            obs_[i] = envs_[i]->reset_next_episode();
            ep_return_[i] = 0.0;
            ep_len_[i] = 0;
            just_reset_[i] = 1;
        } else {
            obs_[i] = std::move(r.obs);
        }
    }
    return out;
}

std::vector<CompletedEpisode> VecEnv::drain_completed() {
    std::vector<CompletedEpisode> out;
    out.swap(completed_);
    return out;
}

void VecEnv::save_state(std::ostream& out) const {
    write_pod<int32_t>(out, n_env());
    for (int i = 0; i < n_env(); i++) {
        envs_[i]->env().save_state(out);
        write_pod(out, ep_return_[i]);
        write_pod(out, ep_len_[i]);
        write_pod(out, just_reset_[i]);
        out.write(reinterpret_cast<const char*>(obs_[i].data.data()),
                  Observation::kElems * sizeof(float));
    }
}

void VecEnv::load_state(std::istream& in) {
    const auto n = read_pod<int32_t>(in);
    if (n != n_env()) throw std::runtime_error("vec_env: checkpoint env count mismatch");
    for (int i = 0; i < n; i++) {
        envs_[i]->env().load_state(in);
        ep_return_[i] = read_pod<double>(in);
        ep_len_[i] = read_pod<int>(in);
        just_reset_[i] = read_pod<uint8_t>(in);
        in.read(reinterpret_cast<char*>(obs_[i].data.data()),
                Observation::kElems * sizeof(float));
        if (!in) throw std::runtime_error("vec_env: truncated checkpoint");
    }
}

}  // namespace acd
