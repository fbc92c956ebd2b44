#pragma once

#include <cstdint>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace acd {

enum class GameKind { kToyPong, kToyBreakout };

inline const char* game_kind_name(GameKind k) {
    return k == GameKind::kToyPong ? "toy-pong" : "toy-breakout";
}
std::optional<GameKind> parse_game_kind(const std::string& name);

/// Grayscale frame as rendered by the game, before any resizing.
struct RawFrame {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> px;  // row-major, values 0..255

    void resize(int w, int h) {
        width = w;
        height = h;
        px.assign(static_cast<size_t>(w) * h, 0);
    }
    uint8_t& at(int y, int x) { return px[static_cast<size_t>(y) * width + x]; }
    uint8_t at(int y, int x) const { return px[static_cast<size_t>(y) * width + x]; }
};

struct EpisodeInfo {
    double episode_return = 0;
    int episode_length = 0;  // in ticks
};

struct StepResult {
    double reward = 0;
    bool done = false;
    std::optional<EpisodeInfo> info;  // present iff done
};

/// Integer pixel rectangle in raw-frame coordinates, already clipped.
struct SpriteRect {
    int x = 0, y = 0, w = 0, h = 0;
};

/// One game instance: single-threaded, independently owned, fully
/// deterministic given (seed, action sequence). This reset/step/render/
/// action_count surface is also the seam where an ALE-backed environment
/// could be plugged in later.
class GameEnv {
public:
    virtual ~GameEnv() = default;

    /// Start a fresh episode from the canonical initial layout; `seed`
    /// reseeds the env's random stream (ball launch direction).
    virtual void reset(uint64_t seed) = 0;

    /// Start the next episode without reseeding, continuing the env's
    /// random stream. Used by the vectorized wrapper's auto-reset.
    virtual void reset_next_episode() = 0;

    /// Advance exactly one physics tick. Throws std::invalid_argument for
    /// an out-of-range action.
    virtual StepResult step(int action) = 0;

    /// Pure function of the current state.
    virtual void render(RawFrame& out) const = 0;

    virtual int action_count() const = 0;
    virtual GameKind kind() const = 0;

    /// Rasterized footprints of the moving sprites (ball and paddles),
    /// matching render() exactly. Bricks and background are static.
    virtual std::vector<SpriteRect> moving_sprites() const = 0;

    virtual void save_state(std::ostream& out) const = 0;
    virtual void load_state(std::istream& in) = 0;
};

std::unique_ptr<GameEnv> make_env(GameKind kind, int max_episode_ticks = 3000);

}  // namespace acd
