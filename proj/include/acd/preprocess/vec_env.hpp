#pragma once

#include <istream>
#include <memory>
#include <ostream>
#include <span>
#include <vector>

#include "acd/preprocess/macro_env.hpp"

namespace acd {

struct CompletedEpisode {
    int env_index = 0;
    double episode_return = 0;
    int length_ticks = 0;
};

/// N parallel macro-environments stepped in lockstep. Results are merged
/// in env-index order regardless of how the stepping is scheduled, so
/// training stays reproducible. Finished episodes auto-reset within the
/// step that finished them: the returned observation for that env already
/// comes from the fresh episode while reward/done describe the one that
/// ended.
class VecEnv {
public:
    VecEnv(GameKind kind, int n_env, uint64_t seed, int max_episode_ticks = 3000);
    VecEnv(GameKind kind, std::span<const uint64_t> seeds, int max_episode_ticks = 3000);

    struct StepOut {
        std::vector<double> rewards;
        std::vector<uint8_t> dones;
    };

    /// One macro-step per env; actions.size() must equal n_env().
    StepOut step(std::span<const int> actions);

    int n_env() const { return static_cast<int>(envs_.size()); }
    GameKind kind() const { return kind_; }
    int action_count() const { return envs_[0]->env().action_count(); }

    /// Observations the policy should act on next.
    const std::vector<Observation>& obs() const { return obs_; }

    /// Completed episodes since the last drain, in completion order.
    std::vector<CompletedEpisode> drain_completed();

    // Per-env running accumulators for the in-flight episodes.
    const std::vector<double>& episode_returns() const { return ep_return_; }
    const std::vector<int>& episode_lengths() const { return ep_len_; }
    const std::vector<uint8_t>& auto_reset_flags() const { return just_reset_; }

    void save_state(std::ostream& out) const;
    void load_state(std::istream& in);

private:
    GameKind kind_;
    std::vector<std::unique_ptr<MacroEnv>> envs_;
    std::vector<Observation> obs_;
    std::vector<double> ep_return_;
    std::vector<int> ep_len_;
    std::vector<uint8_t> just_reset_;  // env finished and was auto-reset last step
    std::vector<CompletedEpisode> completed_;
};

}  // namespace acd
