#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "acd/preprocess/observation.hpp"

namespace acd {

/// On-policy storage for one update: horizon x n_env of everything the
/// losses need. Flat index is t * n_env + i. Advantages and returns are
/// only valid after compute_gae() ran.
struct RolloutBuffer {
    int horizon = 0;
    int n_env = 0;
    std::vector<Observation> obs;
    std::vector<int> actions;
    std::vector<float> logprob_old;
    std::vector<float> values;
    std::vector<float> rewards;
    std::vector<uint8_t> dones;
    std::vector<float> bootstrap_values;  // [n_env]
    std::vector<float> advantages;
    std::vector<float> returns;
    bool gae_done = false;

    RolloutBuffer() = default;
    RolloutBuffer(int horizon_, int n_env_) { resize(horizon_, n_env_); }

    void resize(int horizon_, int n_env_) {
        horizon = horizon_;
        n_env = n_env_;
        const size_t n = static_cast<size_t>(horizon) * n_env;
        obs.assign(n, Observation{});
        actions.assign(n, 0);
        logprob_old.assign(n, 0.f);
        values.assign(n, 0.f);
        rewards.assign(n, 0.f);
        dones.assign(n, 0);
        bootstrap_values.assign(n_env, 0.f);
        advantages.assign(n, 0.f);
        returns.assign(n, 0.f);
        gae_done = false;
    }

    size_t sample_count() const { return static_cast<size_t>(horizon) * n_env; }
    size_t at(int t, int i) const { return static_cast<size_t>(t) * n_env + i; }
};

/// delta_t = r_t + gamma*(1-done_t)*V_{t+1} - V_t with V_horizon taken
/// from `bootstrap`, then A_t = delta_t + gamma*lambda*(1-done_t)*A_{t+1};
/// returns are advantages + values. Arrays are [horizon * n_env], flat
/// index t * n_env + i.
void compute_gae(std::span<const double> rewards, std::span<const double> values,
                 std::span<const uint8_t> dones, std::span<const double> bootstrap,
                 int horizon, int n_env, double gamma, double lambda,
                 std::span<double> advantages, std::span<double> returns);

/// Fills buffer.advantages / buffer.returns (computed in double).
void compute_gae(RolloutBuffer& buffer, double gamma, double lambda);

}  // namespace acd
