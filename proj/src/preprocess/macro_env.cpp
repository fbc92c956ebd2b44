#include "acd/preprocess/macro_env.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "acd/preprocess/resize.hpp"

namespace acd {

int RegionMask::moving_count() const {
    return static_cast<int>(std::count(moving.begin(), moving.end(), 1));
}

void MacroEnv::render_channel(Observation& obs, int channel) {
    env_->render(frame_);
    resize_frame(frame_, Observation::kSize, resized_);
    float* dst = obs.channel(channel);
    for (int i = 0; i < Observation::kPixels; i++)
        dst[i] = static_cast<float>(resized_[i] / 255.0);
}

void MacroEnv::mark_moving(RegionMask& mask) const {
    // An observation pixel is "moving" if its source cell overlaps a
    // moving sprite in the raw frame.
    const double scale = static_cast<double>(Observation::kSize);
    for (const SpriteRect& r : env_->moving_sprites()) {
        if (r.w <= 0 || r.h <= 0) continue;
        const double sx = scale / frame_.width;
        const double sy = scale / frame_.height;
        const int x0 = std::max(0, static_cast<int>(std::floor(r.x * sx)));
        const int y0 = std::max(0, static_cast<int>(std::floor(r.y * sy)));
        const int x1 = std::min(Observation::kSize,
                                static_cast<int>(std::ceil((r.x + r.w) * sx)));
        const int y1 = std::min(Observation::kSize,
                                static_cast<int>(std::ceil((r.y + r.h) * sy)));
        for (int y = y0; y < y1; y++)
            for (int x = x0; x < x1; x++)
                mask.moving[static_cast<size_t>(y) * Observation::kSize + x] = 1;
    }
}

Observation MacroEnv::reset(uint64_t seed) {
    env_->reset(seed);
    Observation obs;
    render_channel(obs, 0);
    std::memcpy(obs.channel(1), obs.channel(0), Observation::kPixels * sizeof(float));
    std::memcpy(obs.channel(2), obs.channel(0), Observation::kPixels * sizeof(float));
    return obs;
}

Observation MacroEnv::reset_next_episode() {
    env_->reset_next_episode();
    Observation obs;
    render_channel(obs, 0);
    std::memcpy(obs.channel(1), obs.channel(0), Observation::kPixels * sizeof(float));
    std::memcpy(obs.channel(2), obs.channel(0), Observation::kPixels * sizeof(float));
    return obs;
}

MacroStepResult MacroEnv::step(int action, RegionMask* mask) {
    MacroStepResult out;
    if (mask) mask->moving.assign(Observation::kPixels, 0);
    int last_rendered = -1;
    for (int t = 0; t < kActionRepeat; t++) {
        StepResult r = env_->step(action);
        out.reward += r.reward;
        render_channel(out.obs, t);
        last_rendered = t;
        if (mask) mark_moving(*mask);
        if (r.done) {
            out.done = true;
            out.info = r.info;
            break;
        }
    }
    for (int t = last_rendered + 1; t < kActionRepeat; t++) {
        std::memcpy(out.obs.channel(t), out.obs.channel(last_rendered),
                    Observation::kPixels * sizeof(float));
    }
    return out;
}

}  // namespace acd
