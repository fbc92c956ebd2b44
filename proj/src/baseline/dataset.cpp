#include "acd/baseline/dataset.hpp"

#include <fstream>
#include <stdexcept>

#include "acd/core/rng.hpp"
#include "acd/core/serial.hpp"

namespace acd {

namespace {
constexpr char kDatasetMagic[8] = {'A', 'C', 'D', 'D', 'S', 'E', 'T', '\0'};
constexpr uint32_t kDatasetVersion = 1;
}  // namespace

void FrameDataset::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("dataset: cannot write " + path);
    out.write(kDatasetMagic, sizeof(kDatasetMagic));
    write_pod<uint32_t>(out, kDatasetVersion);
    write_pod<uint8_t>(out, kind == GameKind::kToyPong ? 0 : 1);
    write_pod<uint64_t>(out, seed);
    write_pod<uint64_t>(out, frames.size());
    for (size_t i = 0; i < frames.size(); i++) {
        out.write(reinterpret_cast<const char*>(frames[i].data.data()),
                  Observation::kElems * sizeof(float));
        out.write(reinterpret_cast<const char*>(masks[i].moving.data()),
                  Observation::kPixels);
    }
    if (!out) throw std::runtime_error("dataset: write failed for " + path);
}

FrameDataset FrameDataset::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("dataset: cannot open " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::string(magic, 7) != std::string(kDatasetMagic, 7))
        throw std::runtime_error("dataset: bad magic in " + path);
    if (read_pod<uint32_t>(in) != kDatasetVersion)
        throw std::runtime_error("dataset: unsupported version in " + path);
    FrameDataset ds;
    ds.kind = read_pod<uint8_t>(in) == 0 ? GameKind::kToyPong : GameKind::kToyBreakout;
    ds.seed = read_pod<uint64_t>(in);
    const auto count = read_pod<uint64_t>(in);
    ds.frames.resize(count);
    ds.masks.resize(count);
    for (uint64_t i = 0; i < count; i++) {
        in.read(reinterpret_cast<char*>(ds.frames[i].data.data()),
                Observation::kElems * sizeof(float));
        in.read(reinterpret_cast<char*>(ds.masks[i].moving.data()),
                Observation::kPixels);
        if (!in) throw std::runtime_error("dataset: truncated file " + path);
    }
    return ds;
}

FrameDataset collect_dataset(GameKind kind, int n_frames, uint64_t seed,
                             int max_episode_ticks) {
    if (n_frames < 1) throw std::invalid_argument("collect_dataset: n_frames must be >= 1");
    FrameDataset ds;
    ds.kind = kind;
    ds.seed = seed;
    ds.frames.reserve(n_frames);
    ds.masks.reserve(n_frames);

    MacroEnv env(make_env(kind, max_episode_ticks));
    Rng policy_rng = Rng::derive(seed, 1);
    const int n_actions = env.env().action_count();
    env.reset(Rng::splitmix64(seed));

    while (static_cast<int>(ds.frames.size()) < n_frames) {
        const int action = static_cast<int>(policy_rng.uniform_int(n_actions));
        RegionMask mask;
        MacroStepResult r = env.step(action, &mask);
        ds.frames.push_back(std::move(r.obs));
        ds.masks.push_back(std::move(mask));
        if (r.done) env.reset_next_episode();
    }
    return ds;
}

}  // namespace acd
