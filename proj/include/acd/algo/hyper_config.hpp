#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace acd {

/// Which learning-curve metric a run logs. The headline metric is the
/// mean undiscounted return over the last 100 completed episodes;
/// `kLast100FramesDiscounted` is the literal per-frame reading kept
/// behind a switch.
enum class CurveMetric { kLast100Episodes, kLast100FramesDiscounted };

/// All training hyperparameters. Defaults reproduce the published table:
/// gamma 0.99, lambda 0.95, clip 0.1, minibatch 32, RMSProp, lr 3e-4,
/// 8 parallel envs, horizon 128, 3 epochs, latent 100, c1 1.0, c2 0.01.
struct HyperConfig {
    double gamma = 0.99;
    double lambda = 0.95;
    double clip_eps = 0.1;
    int minibatch = 32;
    double rmsprop_alpha = 0.99;
    double rmsprop_eps = 1e-5;
    double learning_rate = 0.0003;
    int n_env = 8;
    int horizon = 128;  // macro-steps collected per env per update
    int epochs = 3;
    int latent_dim = 100;
    double c1 = 1.0;   // policy-loss coefficient
    double c2 = 0.01;  // entropy coefficient
    double c_v = 0.5;  // value coefficient
    double c_d = 1.0;  // discriminator-loss coefficient; 0 disables the GAN path
    int64_t total_frames = 300000;  // raw frames (macro-steps x 3 x n_env)

    bool normalize_advantages = true;
    double max_grad_norm = 0.0;  // 0 = no gradient clipping
    bool clip_rewards = false;   // for a future ALE adapter; toy rewards are small
    int max_episode_ticks = 3000;
    int checkpoint_every = 50;  // updates
    CurveMetric curve_metric = CurveMetric::kLast100Episodes;

    void validate() const {
        if (!(gamma > 0.0 && gamma <= 1.0))
            throw std::invalid_argument("config: gamma must be in (0, 1]");
        if (!(lambda >= 0.0 && lambda <= 1.0))
            throw std::invalid_argument("config: lambda must be in [0, 1]");
        if (clip_eps < 0) throw std::invalid_argument("config: clip_eps must be >= 0");
        if (c1 < 0 || c2 < 0 || c_v < 0 || c_d < 0)
            throw std::invalid_argument("config: loss coefficients must be >= 0");
        if (learning_rate <= 0)
            throw std::invalid_argument("config: learning_rate must be > 0");
        if (n_env < 1) throw std::invalid_argument("config: n_env must be >= 1");
        if (horizon < 1) throw std::invalid_argument("config: horizon must be >= 1");
        if (epochs < 1) throw std::invalid_argument("config: epochs must be >= 1");
        if (minibatch < 1 || (horizon * n_env) % minibatch != 0)
            throw std::invalid_argument(
                "config: minibatch must divide horizon * n_env");
        if (latent_dim < 1) throw std::invalid_argument("config: latent_dim must be >= 1");
        if (max_episode_ticks < 1)
            throw std::invalid_argument("config: max_episode_ticks must be >= 1");
        if (checkpoint_every < 1)
            throw std::invalid_argument("config: checkpoint_every must be >= 1");
        if (total_frames < 1)
            throw std::invalid_argument("config: total_frames must be >= 1");
    }
};

}  // namespace acd
