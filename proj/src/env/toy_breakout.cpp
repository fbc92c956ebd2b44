#include "acd/env/toy_breakout.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "acd/core/serial.hpp"
#include "acd/env/toy_pong.hpp"

namespace acd {

void ToyBreakout::reset(uint64_t seed) {
    rng_ = Rng(seed);
    reset_next_episode();
}

void ToyBreakout::reset_next_episode() {
    bricks_.fill(true);
    score_ = 0;
    ticks_ = 0;
    episode_return_ = 0;
    paddle_x_ = (kCanvas - kPaddleW) / 2;
    ball_x_ = kCanvas / 2.0;
    ball_y_ = kPaddleY - 6.0;
    // Launch upward at a seed-dependent angle off vertical.
    const double angle = rng_.uniform_range(0.35, 0.9);
    const double dir = rng_.uniform() < 0.5 ? -1.0 : 1.0;
    ball_vx_ = dir * kBallSpeed * std::sin(angle);
    ball_vy_ = -kBallSpeed * std::cos(angle);
}

void ToyBreakout::set_ball(double x, double y, double vx, double vy) {
    ball_x_ = x;
    ball_y_ = y;
    ball_vx_ = vx;
    ball_vy_ = vy;
}

int ToyBreakout::bricks_alive() const {
    return static_cast<int>(std::count(bricks_.begin(), bricks_.end(), true));
}

StepResult ToyBreakout::step(int action) {
    if (action < 0 || action >= action_count())
        throw std::invalid_argument("toy-breakout: invalid action");
    ticks_++;

    if (action == 1) paddle_x_ -= kPaddleSpeed;
    if (action == 2) paddle_x_ += kPaddleSpeed;
    paddle_x_ = std::clamp(paddle_x_, 0.0, double(kCanvas - kPaddleW));

    ball_x_ += ball_vx_;
    ball_y_ += ball_vy_;

    if (ball_x_ < kBallHalf) {
        ball_x_ = 2 * kBallHalf - ball_x_;
        ball_vx_ = -ball_vx_;
    } else if (ball_x_ > kCanvas - kBallHalf) {
        ball_x_ = 2 * (kCanvas - kBallHalf) - ball_x_;
        ball_vx_ = -ball_vx_;
    }
    if (ball_y_ < kBallHalf) {
        ball_y_ = 2 * kBallHalf - ball_y_;
        ball_vy_ = -ball_vy_;
    }

    StepResult res;

    // Brick collisions: every overlapped alive brick dies this tick.
    int killed = 0;
    for (int row = 0; row < kBrickRows; row++) {
        const int by = kBrickTop + row * (kBrickH + 1);
        if (ball_y_ + kBallHalf < by || ball_y_ - kBallHalf > by + kBrickH) continue;
        for (int col = 0; col < kBrickCols; col++) {
            if (!bricks_[row * kBrickCols + col]) continue;
            const int bx = col * 12;
            if (ball_x_ + kBallHalf >= bx && ball_x_ - kBallHalf <= bx + kBrickW) {
                bricks_[row * kBrickCols + col] = false;
                killed++;
            }
        }
    }
    if (killed > 0) {
        score_ += killed;
        res.reward = killed;
        ball_vy_ = -ball_vy_;
    }

    // Paddle bounce with deflection proportional to contact offset.
    if (ball_vy_ > 0 && ball_y_ + kBallHalf >= kPaddleY &&
        ball_y_ - kBallHalf <= kPaddleY + kPaddleH &&
        ball_x_ + kBallHalf >= paddle_x_ && ball_x_ - kBallHalf <= paddle_x_ + kPaddleW) {
        const double offset = (ball_x_ - (paddle_x_ + kPaddleW / 2.0)) / (kPaddleW / 2.0);
        double vx = ball_vx_ + kDeflection * offset;
        vx = std::clamp(vx, -kMaxVx, kMaxVx);
        ball_vx_ = vx;
        ball_vy_ = -std::sqrt(kBallSpeed * kBallSpeed - vx * vx);
        ball_y_ = kPaddleY - kBallHalf;
    }

    episode_return_ += res.reward;

    const bool missed = ball_y_ - kBallHalf > kCanvas;
    if (missed || bricks_alive() == 0 || ticks_ >= max_ticks_) {
        res.done = true;
        res.info = EpisodeInfo{episode_return_, ticks_};
    }
    return res;
}

namespace {
void fill_rect(RawFrame& f, int x, int y, int w, int h, uint8_t shade) {
    const int x0 = std::max(x, 0), y0 = std::max(y, 0);
    const int x1 = std::min(x + w, f.width), y1 = std::min(y + h, f.height);
    for (int yy = y0; yy < y1; yy++)
        for (int xx = x0; xx < x1; xx++) f.at(yy, xx) = shade;
}
}  // namespace

void ToyBreakout::render(RawFrame& out) const {
    out.resize(kCanvas, kCanvas);
    std::fill(out.px.begin(), out.px.end(), kBackground);
    for (int row = 0; row < kBrickRows; row++) {
        for (int col = 0; col < kBrickCols; col++) {
            if (!bricks_[row * kBrickCols + col]) continue;
            fill_rect(out, col * 12, kBrickTop + row * (kBrickH + 1), kBrickW,
                      kBrickH, kBrickShade);
        }
    }
    for (const SpriteRect& r : moving_sprites()) {
        const uint8_t shade = (r.w == kPaddleW) ? kPaddleShade : kBallShade;
        fill_rect(out, r.x, r.y, r.w, r.h, shade);
    }
}

std::vector<SpriteRect> ToyBreakout::moving_sprites() const {
    return {
        {static_cast<int>(std::lround(paddle_x_)), kPaddleY, kPaddleW, kPaddleH},
        {static_cast<int>(std::lround(ball_x_ - kBallHalf)),
         static_cast<int>(std::lround(ball_y_ - kBallHalf)), 3, 3},
    };
}

void ToyBreakout::save_state(std::ostream& out) const {
    write_pod(out, ball_x_);
    write_pod(out, ball_y_);
    write_pod(out, ball_vx_);
    write_pod(out, ball_vy_);
    write_pod(out, paddle_x_);
    for (bool b : bricks_) write_pod<uint8_t>(out, b ? 1 : 0);
    write_pod(out, score_);
    write_pod(out, ticks_);
    write_pod(out, episode_return_);
    write_string(out, rng_.serialize());
}

void ToyBreakout::load_state(std::istream& in) {
    ball_x_ = read_pod<double>(in);
    ball_y_ = read_pod<double>(in);
    ball_vx_ = read_pod<double>(in);
    ball_vy_ = read_pod<double>(in);
    paddle_x_ = read_pod<double>(in);
    for (auto& b : bricks_) b = read_pod<uint8_t>(in) != 0;
    score_ = read_pod<int>(in);
    ticks_ = read_pod<int>(in);
    episode_return_ = read_pod<double>(in);
    rng_.deserialize(read_string(in));
}

std::optional<GameKind> parse_game_kind(const std::string& name) {
    if (name == "toy-pong") return GameKind::kToyPong;
    if (name == "toy-breakout") return GameKind::kToyBreakout;
    return std::nullopt;
}

std::unique_ptr<GameEnv> make_env(GameKind kind, int max_episode_ticks) {
    if (kind == GameKind::kToyPong)
        return std::make_unique<ToyPong>(max_episode_ticks);
    return std::make_unique<ToyBreakout>(max_episode_ticks);
}

}  // namespace acd
