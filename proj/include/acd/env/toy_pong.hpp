#pragma once

#include "acd/core/rng.hpp"
#include "acd/env/game_env.hpp"

namespace acd {

/// Two-paddle pong on a 96x96 canvas. The agent owns the right paddle
/// (actions: stay, up, down); a scripted opponent on the left tracks the
/// ball with per-tick speed capped at 80% of the ball's vertical speed.
/// First side to 5 points ends the match; reward is +1/-1 per point.
class ToyPong : public GameEnv {
public:
    static constexpr int kCanvas = 96;
    static constexpr double kBallHalf = 1.5;
    static constexpr double kBallSpeed = 2.0;
    static constexpr int kPaddleW = 3;
    static constexpr int kPaddleH = 15;
    static constexpr double kPaddleSpeed = 2.0;
    static constexpr int kAgentX = 91;  // left edge of right paddle
    static constexpr int kOppX = 2;     // left edge of left paddle
    static constexpr int kPointsToWin = 5;
    static constexpr double kOpponentTrackFactor = 0.8;
    static constexpr double kDeflection = 1.2;   // vy added at full contact offset
    static constexpr double kMaxVy = 1.7;        // keeps shots trackable by the agent
    static constexpr uint8_t kBackground = 0;
    static constexpr uint8_t kPaddleShade = 200;
    static constexpr uint8_t kBallShade = 255;

    explicit ToyPong(int max_episode_ticks = 3000) : max_ticks_(max_episode_ticks) {}

    void reset(uint64_t seed) override;
    void reset_next_episode() override;
    StepResult step(int action) override;
    void render(RawFrame& out) const override;
    int action_count() const override { return 3; }
    GameKind kind() const override { return GameKind::kToyPong; }
    std::vector<SpriteRect> moving_sprites() const override;
    void save_state(std::ostream& out) const override;
    void load_state(std::istream& in) override;

    // State accessors and scenario setup for deterministic tests.
    double ball_x() const { return ball_x_; }
    double ball_y() const { return ball_y_; }
    double ball_vx() const { return ball_vx_; }
    double ball_vy() const { return ball_vy_; }
    int agent_score() const { return agent_score_; }
    int opponent_score() const { return opp_score_; }
    void set_ball(double x, double y, double vx, double vy);
    void set_paddles(double agent_y, double opp_y);

private:
    void serve();

    int max_ticks_;
    double ball_x_ = 0, ball_y_ = 0, ball_vx_ = 0, ball_vy_ = 0;
    double agent_y_ = 0, opp_y_ = 0;  // top edge of each paddle
    int agent_score_ = 0, opp_score_ = 0;
    int ticks_ = 0;
    double episode_return_ = 0;
    Rng rng_;
};

}  // namespace acd
