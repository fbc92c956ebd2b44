#pragma once

#include <cmath>

#include "acd/core/mat.hpp"
#include "acd/core/rng.hpp"

namespace acd {

template <typename T>
void fill_normal(Mat<T>& m, Rng& rng, double mean, double stddev) {
    for (auto& v : m.v) v = static_cast<T>(mean + stddev * rng.normal());
}

/// U(-1/sqrt(fan_in), 1/sqrt(fan_in)), the usual default for plain
/// fully-connected heads.
template <typename T>
void fill_uniform_fan_in(Mat<T>& m, Rng& rng, int fan_in) {
    const double limit = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (auto& v : m.v) v = static_cast<T>(rng.uniform_range(-limit, limit));
}

}  // namespace acd
