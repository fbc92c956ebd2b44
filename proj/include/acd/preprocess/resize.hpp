#pragma once

#include <vector>

#include "acd/env/game_env.hpp"

namespace acd {

/// Area-averaging (box) downsample to `out_size` x `out_size`. Output
/// values stay in [0,255] as reals; fractional source pixels at cell
/// borders are weighted by their covered area. Inputs smaller than the
/// target are rejected.
void resize_frame(const RawFrame& in, int out_size, std::vector<double>& out);

}  // namespace acd
