#pragma once

#include <vector>

namespace acd {

/// Network input: three consecutive grayscale frames, each resized to
/// 64x64 and scaled to [0,1], stacked as channels in time order.
struct Observation {
    static constexpr int kChannels = 3;
    static constexpr int kSize = 64;
    static constexpr int kPixels = kSize * kSize;
    static constexpr int kElems = kChannels * kPixels;

    std::vector<float> data;  // channel-major [c][y][x]

    Observation() : data(kElems, 0.0f) {}
    float& at(int c, int y, int x) { return data[c * kPixels + y * kSize + x]; }
    float at(int c, int y, int x) const { return data[c * kPixels + y * kSize + x]; }
    const float* channel(int c) const { return data.data() + c * kPixels; }
    float* channel(int c) { return data.data() + c * kPixels; }
};

}  // namespace acd
