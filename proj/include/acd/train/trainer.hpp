#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "acd/algo/hyper_config.hpp"
#include "acd/env/game_env.hpp"

namespace acd {

enum class Algorithm { kPpo, kAcd };

inline const char* algorithm_name(Algorithm a) {
    return a == Algorithm::kPpo ? "ppo" : "acd";
}
std::optional<Algorithm> parse_algorithm(const std::string& name);

struct TrainResult {
    Algorithm algorithm = Algorithm::kPpo;
    GameKind kind = GameKind::kToyPong;
    uint64_t seed = 0;
    int64_t frames_done = 0;
    int64_t updates_done = 0;
    int64_t episodes_done = 0;
    double final_mean_return_100 = 0;
    std::string metrics_path;
    std::string checkpoint_path;
    std::string manifest_path;
};

/// Full training run: repeat {collect horizon x n_env rollout -> GAE ->
/// ppo/acd update} until total_frames raw frames are consumed (each
/// macro-step accounts for 3 raw frames per env). One metrics row is
/// appended per update; a resumable checkpoint is written every
/// cfg.checkpoint_every updates and at the end. With resume=true an
/// existing checkpoint in out_dir continues (config must match).
TrainResult train(Algorithm algorithm, GameKind kind, int64_t total_frames,
                  uint64_t seed, const HyperConfig& cfg, const std::string& out_dir,
                  bool resume = false);

}  // namespace acd
