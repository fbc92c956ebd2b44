#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace acd {

/// Deterministic, serializable random stream. Normal sampling is a
/// stateless Box-Muller so that saving and restoring the engine state is
/// enough to resume a run bit-exactly.
class Rng {
public:
    Rng() : gen_(0) {}
    explicit Rng(uint64_t seed) : gen_(seed) {}

    static uint64_t splitmix64(uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    /// Independent substream `id` of a master seed.
    static Rng derive(uint64_t seed, uint64_t id) {
        return Rng(splitmix64(seed ^ splitmix64(id)));
    }

    uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n).
    uint64_t uniform_int(uint64_t n) { return gen_() % n; }

    double uniform_range(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal, two uniforms per draw (no cached spare).
    double normal() {
        const double u1 = static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
        const double u2 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Index sampled from unnormalized nonnegative weights.
    template <typename T>
    int categorical(const T* probs, int n) {
        double total = 0;
        for (int i = 0; i < n; i++) total += static_cast<double>(probs[i]);
        double u = uniform() * total;
        for (int i = 0; i < n; i++) {
            u -= static_cast<double>(probs[i]);
            if (u < 0) return i;
        }
        return n - 1;
    }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (size_t i = items.size(); i > 1; i--) {
            std::swap(items[i - 1], items[uniform_int(i)]);
        }
    }

    std::string serialize() const {
        std::ostringstream out;
        out << gen_;
        return out.str();
    }
    void deserialize(const std::string& s) {
        std::istringstream in(s);
        in >> gen_;
    }

    bool operator==(const Rng& o) const { return gen_ == o.gen_; }

private:
    std::mt19937_64 gen_;
};

}  // namespace acd
