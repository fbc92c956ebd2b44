#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "acd/env/game_env.hpp"
#include "acd/preprocess/macro_env.hpp"
#include "acd/preprocess/observation.hpp"

namespace acd {

/// Observations collected under a uniform-random policy, each paired with
/// the moving/static region mask derived from the env's sprite geometry.
struct FrameDataset {
    GameKind kind = GameKind::kToyPong;
    uint64_t seed = 0;
    std::vector<Observation> frames;
    std::vector<RegionMask> masks;

    size_t size() const { return frames.size(); }

    void save(const std::string& path) const;
    static FrameDataset load(const std::string& path);
};

/// Rolls a uniform-random policy through the preprocessing pipeline and
/// stores every observation with its mask. Deterministic per seed.
FrameDataset collect_dataset(GameKind kind, int n_frames, uint64_t seed,
                             int max_episode_ticks = 3000);

}  // namespace acd
