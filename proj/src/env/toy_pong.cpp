#include "acd/env/toy_pong.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "acd/core/serial.hpp"

namespace acd {

void ToyPong::reset(uint64_t seed) {
    rng_ = Rng(seed);
    reset_next_episode();
}

void ToyPong::reset_next_episode() {
    agent_score_ = 0;
    opp_score_ = 0;
    ticks_ = 0;
    episode_return_ = 0;
    agent_y_ = (kCanvas - kPaddleH) / 2;
    opp_y_ = agent_y_;
    serve();
}

void ToyPong::serve() {
    ball_x_ = kCanvas / 2.0;
    ball_y_ = kCanvas / 2.0;
    const double angle = rng_.uniform_range(-std::numbers::pi / 4, std::numbers::pi / 4);
    const double dir = rng_.uniform() < 0.5 ? -1.0 : 1.0;
    ball_vx_ = dir * kBallSpeed * std::cos(angle);
    ball_vy_ = kBallSpeed * std::sin(angle);
}

void ToyPong::set_ball(double x, double y, double vx, double vy) {
    ball_x_ = x;
    ball_y_ = y;
    ball_vx_ = vx;
    ball_vy_ = vy;
}

void ToyPong::set_paddles(double agent_y, double opp_y) {
    agent_y_ = agent_y;
    opp_y_ = opp_y;
}

StepResult ToyPong::step(int action) {
    if (action < 0 || action >= action_count())
        throw std::invalid_argument("toy-pong: invalid action");
    ticks_++;

    if (action == 1) agent_y_ -= kPaddleSpeed;
    if (action == 2) agent_y_ += kPaddleSpeed;
    agent_y_ = std::clamp(agent_y_, 0.0, double(kCanvas - kPaddleH));

    // Opponent tracks the ball, capped at a fraction of its vertical speed.
    const double want = ball_y_ - kPaddleH / 2.0 - opp_y_;
    const double cap = kOpponentTrackFactor * std::abs(ball_vy_);
    opp_y_ += std::clamp(want, -cap, cap);
    opp_y_ = std::clamp(opp_y_, 0.0, double(kCanvas - kPaddleH));

    ball_x_ += ball_vx_;
    ball_y_ += ball_vy_;

    if (ball_y_ < kBallHalf) {
        ball_y_ = 2 * kBallHalf - ball_y_;
        ball_vy_ = -ball_vy_;
    } else if (ball_y_ > kCanvas - kBallHalf) {
        ball_y_ = 2 * (kCanvas - kBallHalf) - ball_y_;
        ball_vy_ = -ball_vy_;
    }

    auto paddle_bounce = [&](double face_x, double paddle_y, double into_dir) {
        // into_dir: +1 when the ball travels toward +x into this paddle.
        const double offset = (ball_y_ - (paddle_y + kPaddleH / 2.0)) / (kPaddleH / 2.0);
        double vy = ball_vy_ + kDeflection * offset;
        vy = std::clamp(vy, -kMaxVy, kMaxVy);
        const double vx = std::sqrt(kBallSpeed * kBallSpeed - vy * vy);
        ball_vx_ = -into_dir * vx;
        ball_vy_ = vy;
        ball_x_ = face_x - into_dir * kBallHalf;
    };

    const bool overlaps_agent = ball_y_ + kBallHalf >= agent_y_ &&
                                ball_y_ - kBallHalf <= agent_y_ + kPaddleH;
    const bool overlaps_opp =
        ball_y_ + kBallHalf >= opp_y_ && ball_y_ - kBallHalf <= opp_y_ + kPaddleH;
    if (ball_vx_ > 0 && overlaps_agent && ball_x_ + kBallHalf >= kAgentX &&
        ball_x_ - kBallHalf <= kAgentX + kPaddleW) {
        paddle_bounce(kAgentX, agent_y_, +1);
    } else if (ball_vx_ < 0 && overlaps_opp &&
               ball_x_ - kBallHalf <= kOppX + kPaddleW &&
               ball_x_ + kBallHalf >= kOppX) {
        paddle_bounce(kOppX + kPaddleW, opp_y_, -1);
    }

    StepResult res;
    if (ball_x_ < 0) {
        agent_score_++;
        res.reward = 1;
        serve();
    } else if (ball_x_ > kCanvas) {
        opp_score_++;
        res.reward = -1;
        serve();
    }
    episode_return_ += res.reward;

    if (agent_score_ >= kPointsToWin || opp_score_ >= kPointsToWin ||
        ticks_ >= max_ticks_) {
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

void ToyPong::render(RawFrame& out) const {
    out.resize(kCanvas, kCanvas);
    std::fill(out.px.begin(), out.px.end(), kBackground);
    for (const SpriteRect& r : moving_sprites()) {
        const uint8_t shade = (r.h == kPaddleH) ? kPaddleShade : kBallShade;
        fill_rect(out, r.x, r.y, r.w, r.h, shade);
    }
}

std::vector<SpriteRect> ToyPong::moving_sprites() const {
    const int ball_px = static_cast<int>(std::lround(ball_x_ - kBallHalf));
    const int ball_py = static_cast<int>(std::lround(ball_y_ - kBallHalf));
    return {
        {kOppX, static_cast<int>(std::lround(opp_y_)), kPaddleW, kPaddleH},
        {kAgentX, static_cast<int>(std::lround(agent_y_)), kPaddleW, kPaddleH},
        {ball_px, ball_py, 3, 3},
    };
}

void ToyPong::save_state(std::ostream& out) const {
    write_pod(out, ball_x_);
    write_pod(out, ball_y_);
    write_pod(out, ball_vx_);
    write_pod(out, ball_vy_);
    write_pod(out, agent_y_);
    write_pod(out, opp_y_);
    write_pod(out, agent_score_);
    write_pod(out, opp_score_);
    write_pod(out, ticks_);
    write_pod(out, episode_return_);
    write_string(out, rng_.serialize());
}

void ToyPong::load_state(std::istream& in) {
    ball_x_ = read_pod<double>(in);
    ball_y_ = read_pod<double>(in);
    ball_vx_ = read_pod<double>(in);
    ball_vy_ = read_pod<double>(in);
    agent_y_ = read_pod<double>(in);
    opp_y_ = read_pod<double>(in);
    agent_score_ = read_pod<int>(in);
    opp_score_ = read_pod<int>(in);
    ticks_ = read_pod<int>(in);
    episode_return_ = read_pod<double>(in);
    rng_.deserialize(read_string(in));
}

}  // namespace acd
