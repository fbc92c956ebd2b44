#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "acd/env/game_env.hpp"
#include "acd/preprocess/observation.hpp"

namespace acd {

/// 64x64 boolean grid marking observation pixels touched by moving sprites
/// (ball and paddles) during a macro-step; everything else is static.
struct RegionMask {
    std::vector<uint8_t> moving;  // Observation::kPixels entries, 0/1

    RegionMask() : moving(Observation::kPixels, 0) {}
    int moving_count() const;
};

struct MacroStepResult {
    Observation obs;
    double reward = 0;
    bool done = false;
    std::optional<EpisodeInfo> info;
};

/// Applies one chosen action for 3 consecutive environment ticks and
/// assembles the Observation: each post-tick frame is grayscaled (the env
/// renders grayscale already), resized to 64x64 by area averaging, scaled
/// by 1/255 and stacked as a channel. Rewards are summed over the ticks.
/// If the episode ends mid-macro-step the remaining channels repeat the
/// terminal frame.
class MacroEnv {
public:
    static constexpr int kActionRepeat = 3;

    explicit MacroEnv(std::unique_ptr<GameEnv> env) : env_(std::move(env)) {}

    /// Reseed and return the initial observation (initial frame repeated
    /// across all 3 channels; no ticks are executed).
    Observation reset(uint64_t seed);

    /// Start the next episode, continuing the env's random stream.
    Observation reset_next_episode();

    /// `mask`, when given, receives the union of moving-sprite footprints
    /// over the executed ticks, mapped into observation coordinates.
    MacroStepResult step(int action, RegionMask* mask = nullptr);

    GameEnv& env() { return *env_; }
    const GameEnv& env() const { return *env_; }

private:
    void render_channel(Observation& obs, int channel);
    void mark_moving(RegionMask& mask) const;

    std::unique_ptr<GameEnv> env_;
    RawFrame frame_;
    std::vector<double> resized_;
};

}  // namespace acd
