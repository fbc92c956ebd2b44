#pragma once

#include <cassert>
#include <cstddef>
#include <cstring>
#include <span>
#include <vector>

namespace acd {

/// Dense row-major matrix. Feature maps are stored as [channels, batch*pixels]
/// so every convolution reduces to a single GEMM per layer.
template <typename T>
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<T> v;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), v(static_cast<size_t>(r) * c, T(0)) {}

    void resize(int r, int c) {
        rows = r;
        cols = c;
        v.assign(static_cast<size_t>(r) * c, T(0));
    }
    void ensure(int r, int c) {
        if (rows != r || cols != c) resize(r, c);
    }
    void zero() { std::memset(v.data(), 0, v.size() * sizeof(T)); }

    size_t size() const { return v.size(); }
    T* data() { return v.data(); }
    const T* data() const { return v.data(); }
    T* row(int r) { return v.data() + static_cast<size_t>(r) * cols; }
    const T* row(int r) const { return v.data() + static_cast<size_t>(r) * cols; }
    T& operator()(int r, int c) { return v[static_cast<size_t>(r) * cols + c]; }
    T operator()(int r, int c) const { return v[static_cast<size_t>(r) * cols + c]; }

    std::span<T> flat() { return {v.data(), v.size()}; }
    std::span<const T> flat() const { return {v.data(), v.size()}; }
};

}  // namespace acd
