#include <vector>

#include "acd/algo/rollout_buffer.hpp"

namespace acd {

void compute_gae(std::span<const double> rewards, std::span<const double> values,
                 std::span<const uint8_t> dones, std::span<const double> bootstrap,
                 int horizon, int n_env, double gamma, double lambda,
                 std::span<double> advantages, std::span<double> returns) {
    const size_t n = static_cast<size_t>(horizon) * n_env;
    if (rewards.size() != n || values.size() != n || dones.size() != n ||
        bootstrap.size() != static_cast<size_t>(n_env) || advantages.size() != n ||
        returns.size() != n) {
        throw std::invalid_argument("compute_gae: shape mismatch");
    }
    for (int i = 0; i < n_env; i++) {
        double running = 0.0;
        for (int t = horizon - 1; t >= 0; t--) {
            const size_t idx = static_cast<size_t>(t) * n_env + i;
            const double not_done = dones[idx] ? 0.0 : 1.0;
            const double next_value =
                t == horizon - 1 ? bootstrap[i] : values[idx + n_env];
            const double delta =
                rewards[idx] + gamma * not_done * next_value - values[idx];
            running = delta + gamma * lambda * not_done * running;
            advantages[idx] = running;
            returns[idx] = running + values[idx];
        }
    }
}

void compute_gae(RolloutBuffer& buffer, double gamma, double lambda) {
    const size_t n = buffer.sample_count();
    std::vector<double> rewards(buffer.rewards.begin(), buffer.rewards.end());
    std::vector<double> values(buffer.values.begin(), buffer.values.end());
    std::vector<double> bootstrap(buffer.bootstrap_values.begin(),
                                  buffer.bootstrap_values.end());
    std::vector<double> adv(n), ret(n);
    compute_gae(rewards, values, buffer.dones, bootstrap, buffer.horizon,
                buffer.n_env, gamma, lambda, adv, ret);
    for (size_t i = 0; i < n; i++) {
        buffer.advantages[i] = static_cast<float>(adv[i]);
        buffer.returns[i] = static_cast<float>(ret[i]);
    }
    buffer.gae_done = true;
}

}  // namespace acd
