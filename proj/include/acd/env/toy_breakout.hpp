#pragma once

#include <array>

#include "acd/core/rng.hpp"
#include "acd/env/game_env.hpp"

namespace acd {

/// Single-life breakout on a 96x96 canvas: 4 rows x 8 bricks, +1 reward per
/// destroyed brick, episode ends when the ball is missed or the wall is
/// cleared. Actions: stay, left, right.
class ToyBreakout : public GameEnv {
public:
    static constexpr int kCanvas = 96;
    static constexpr double kBallHalf = 1.5;
    static constexpr double kBallSpeed = 2.0;
    static constexpr int kPaddleW = 15;
    static constexpr int kPaddleH = 3;
    static constexpr int kPaddleY = 90;  // top edge
    static constexpr double kPaddleSpeed = 2.0;
    static constexpr int kBrickRows = 4;
    static constexpr int kBrickCols = 8;
    static constexpr int kBrickW = 11;  // 12px pitch, 1px gap
    static constexpr int kBrickH = 5;   // 6px pitch, 1px gap
    static constexpr int kBrickTop = 15;
    static constexpr double kDeflection = 1.2;
    static constexpr double kMaxVx = 1.7;
    static constexpr uint8_t kBackground = 0;
    static constexpr uint8_t kBrickShade = 160;
    static constexpr uint8_t kPaddleShade = 200;
    static constexpr uint8_t kBallShade = 255;

    explicit ToyBreakout(int max_episode_ticks = 3000) : max_ticks_(max_episode_ticks) {}

    void reset(uint64_t seed) override;
    void reset_next_episode() override;
    StepResult step(int action) override;
    void render(RawFrame& out) const override;
    int action_count() const override { return 3; }
    GameKind kind() const override { return GameKind::kToyBreakout; }
    std::vector<SpriteRect> moving_sprites() const override;
    void save_state(std::ostream& out) const override;
    void load_state(std::istream& in) override;

    double ball_x() const { return ball_x_; }
    double ball_y() const { return ball_y_; }
    double ball_vx() const { return ball_vx_; }
    double ball_vy() const { return ball_vy_; }
    int score() const { return score_; }
    int bricks_alive() const;
    bool brick_alive(int row, int col) const { return bricks_[row * kBrickCols + col]; }
    void set_ball(double x, double y, double vx, double vy);

private:
    int max_ticks_;
    double ball_x_ = 0, ball_y_ = 0, ball_vx_ = 0, ball_vy_ = 0;
    double paddle_x_ = 0;  // left edge
    std::array<bool, kBrickRows * kBrickCols> bricks_{};
    int score_ = 0;
    int ticks_ = 0;
    double episode_return_ = 0;
    Rng rng_;
};

}  // namespace acd
