#pragma once

#include <cmath>
#include <numeric>
#include <vector>

#include "acd/algo/hyper_config.hpp"
#include "acd/algo/losses.hpp"
#include "acd/algo/rollout_buffer.hpp"
#include "acd/core/rng.hpp"
#include "acd/models/acd_model.hpp"
#include "acd/models/generator.hpp"
#include "acd/nn/rmsprop.hpp"

namespace acd {

/// Averaged loss components and score statistics of one update.
struct UpdateStats {
    double policy_loss = 0;
    double value_loss = 0;
    double entropy = 0;
    double d_loss = std::nan("");
    double g_loss = std::nan("");
    double real_score = std::nan("");
    double fake_score = std::nan("");
};

/// Everything an update mutates: networks, their optimizers, and the
/// random streams for minibatch shuffling and latent sampling. The
/// streams are separate so that disabling the GAN path leaves the PPO
/// trajectory untouched.
template <typename T>
struct UpdateContext {
    AcdModel<T>* model = nullptr;
    Generator<T>* generator = nullptr;
    RmsProp<T>* model_opt = nullptr;
    RmsProp<T>* gen_opt = nullptr;
    Rng* perm_rng = nullptr;
    Rng* fake_rng = nullptr;       // latents for the discriminator term
    Rng* gen_step_rng = nullptr;   // fresh latents for the generator step
};

namespace detail {

template <typename T>
void gather_observations(const RolloutBuffer& buffer, const std::vector<int>& indices,
                         Mat<T>& out) {
    const int b = static_cast<int>(indices.size());
    out.ensure(Observation::kChannels, b * Observation::kPixels);
    for (int c = 0; c < Observation::kChannels; c++) {
        T* dst = out.row(c);
        for (int j = 0; j < b; j++) {
            const float* src = buffer.obs[indices[j]].channel(c);
            for (int p = 0; p < Observation::kPixels; p++)
                dst[static_cast<size_t>(j) * Observation::kPixels + p] = static_cast<T>(src[p]);
        }
    }
}

template <typename T>
void clip_gradient_norm(ParamRegistry<T>& reg, double max_norm) {
    double sq = 0;
    for (auto& [name, p] : reg.params)
        for (const T g : p->grad.v) sq += static_cast<double>(g) * g;
    const double norm = std::sqrt(sq);
    if (norm <= max_norm) return;
    const T scale = static_cast<T>(max_norm / norm);
    for (auto& [name, p] : reg.params)
        for (T& g : p->grad.v) g *= scale;
}

}  // namespace detail

/// Shared implementation of the PPO and ACD updates. For each of
/// cfg.epochs passes over one fixed shuffled permutation of the
/// horizon*n_env samples, in minibatches:
///   (a) one RMSProp step on c1*policy + c_v*value - c2*entropy
///       (+ c_d*L_D against an equal-size batch of freshly generated,
///       detached fakes when the GAN path is on), and
///   (b) one generator step on L_G with trunk/discriminator frozen,
///       using a fresh latent batch and re-scored real observations.
template <typename T>
UpdateStats run_update(UpdateContext<T>& ctx, ParamRegistry<T>& model_reg,
                       ParamRegistry<T>& gen_reg, const RolloutBuffer& buffer,
                       const HyperConfig& cfg, bool gan) {
    if (!buffer.gae_done)
        throw std::invalid_argument("update: buffer advantages not computed");
    const size_t n = buffer.sample_count();
    const int mb = cfg.minibatch;

    // Per-update advantage normalization (on a copy; the buffer is input).
    std::vector<T> adv(n);
    for (size_t i = 0; i < n; i++) adv[i] = static_cast<T>(buffer.advantages[i]);
    if (cfg.normalize_advantages) {
        double mean = 0;
        for (size_t i = 0; i < n; i++) mean += adv[i];
        mean /= static_cast<double>(n);
        double var = 0;
        for (size_t i = 0; i < n; i++) {
            const double d = adv[i] - mean;
            var += d * d;
        }
        var /= static_cast<double>(n);
        const double denom = std::sqrt(var) + 1e-8;
        for (size_t i = 0; i < n; i++)
            adv[i] = static_cast<T>((adv[i] - mean) / denom);
    }

    // One permutation per update, fixed across the epochs.
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    ctx.perm_rng->shuffle(perm);

    const PpoCoeffs<T> coeffs{static_cast<T>(cfg.clip_eps), static_cast<T>(cfg.c1),
                              static_cast<T>(cfg.c2), static_cast<T>(cfg.c_v)};
    const T lr = static_cast<T>(cfg.learning_rate);
    const T c_d = static_cast<T>(cfg.c_d);

    typename AcdModel<T>::Cache real_cache, fake_cache;
    typename Generator<T>::Cache gen_cache;
    Mat<T> real_input, dlogits, dvalues, dreal_mat, dfake_mat, dfake_input;
    std::vector<int> indices(mb), mb_actions(mb);
    std::vector<T> logp_new(mb), logp_old(mb), entropy(mb), mb_adv(mb), v_pred(mb),
        ret(mb), dlogp(mb), dvalue(mb), dentropy(mb);
    std::vector<T> real_scores(mb), fake_scores(mb), dreal(mb), dfake(mb);

    UpdateStats stats;
    double d_loss_sum = 0, g_loss_sum = 0, real_sum = 0, fake_sum = 0;
    int steps = 0;

    for (int epoch = 0; epoch < cfg.epochs; epoch++) {
        for (size_t start = 0; start + mb <= n; start += mb) {
            for (int j = 0; j < mb; j++) {
                const int idx = perm[start + j];
                indices[j] = idx;
                logp_old[j] = static_cast<T>(buffer.logprob_old[idx]);
                mb_adv[j] = adv[idx];
                ret[j] = static_cast<T>(buffer.returns[idx]);
            }
            detail::gather_observations(buffer, indices, real_input);

            model_reg.zero_grad();
            ctx.model->forward_trunk(real_input, mb, real_cache);
            ctx.model->forward_actor(real_cache);
            ctx.model->forward_critic(real_cache);
            for (int j = 0; j < mb; j++) {
                const int a = buffer.actions[indices[j]];
                logp_new[j] = real_cache.logps(a, j);
                entropy[j] = column_entropy(real_cache.probs, real_cache.logps, j);
                v_pred[j] = real_cache.values(0, j);
            }

            const PpoLossTerms<T> terms =
                ppo_loss<T>(logp_new, logp_old, entropy, mb_adv, v_pred, ret, coeffs);
            ppo_loss_grads<T>(logp_new, logp_old, mb_adv, v_pred, ret, coeffs,
                              dlogp, dvalue, dentropy);

            // Chain per-sample gradients into logits and values.
            for (int j = 0; j < mb; j++) mb_actions[j] = buffer.actions[indices[j]];
            chain_policy_gradients<T>(real_cache.probs, real_cache.logps, mb_actions,
                                      dlogp, dentropy, dlogits);
            dvalues.ensure(1, mb);
            for (int j = 0; j < mb; j++) dvalues(0, j) = dvalue[j];

            if (gan) {
                // Discriminator term: real minibatch vs freshly generated,
                // detached fakes.
                ctx.model->forward_disc(real_cache);
                const Mat<T> z = sample_latent<T>(cfg.latent_dim, mb, *ctx.fake_rng);
                ctx.generator->forward(z, mb, gen_cache, /*train=*/true);
                ctx.model->forward_trunk(gen_cache.out, mb, fake_cache);
                ctx.model->forward_disc(fake_cache);
                for (int j = 0; j < mb; j++) {
                    real_scores[j] = real_cache.scores(0, j);
                    fake_scores[j] = fake_cache.scores(0, j);
                }
                const T d_loss = ralsgan_d_loss<T>(real_scores, fake_scores);
                ralsgan_d_grads<T>(real_scores, fake_scores, dreal, dfake);
                dreal_mat.ensure(1, mb);
                dfake_mat.ensure(1, mb);
                for (int j = 0; j < mb; j++) {
                    dreal_mat(0, j) = c_d * dreal[j];
                    dfake_mat(0, j) = c_d * dfake[j];
                }
                ctx.model->backward(real_cache, &dlogits, &dvalues, &dreal_mat,
                                    nullptr, true);
                ctx.model->backward(fake_cache, nullptr, nullptr, &dfake_mat,
                                    nullptr, true);
                if (cfg.max_grad_norm > 0)
                    detail::clip_gradient_norm(model_reg, cfg.max_grad_norm);
                ctx.model_opt->step(lr);

                // Generator step against the frozen, just-updated
                // discriminator; real observations are re-scored.
                const Mat<T> z2 =
                    sample_latent<T>(cfg.latent_dim, mb, *ctx.gen_step_rng);
                gen_reg.zero_grad();
                ctx.generator->forward(z2, mb, gen_cache, /*train=*/true);
                ctx.model->forward_trunk(gen_cache.out, mb, fake_cache);
                ctx.model->forward_disc(fake_cache);
                ctx.model->forward_trunk(real_input, mb, real_cache);
                ctx.model->forward_disc(real_cache);
                for (int j = 0; j < mb; j++) {
                    real_scores[j] = real_cache.scores(0, j);
                    fake_scores[j] = fake_cache.scores(0, j);
                }
                const T g_loss = ralsgan_g_loss<T>(real_scores, fake_scores);
                ralsgan_g_grads<T>(real_scores, fake_scores, dreal, dfake);
                for (int j = 0; j < mb; j++) dfake_mat(0, j) = dfake[j];
                ctx.model->backward(fake_cache, nullptr, nullptr, &dfake_mat,
                                    &dfake_input, /*param_grads=*/false);
                ctx.generator->backward(gen_cache, dfake_input, nullptr, true);
                if (cfg.max_grad_norm > 0)
                    detail::clip_gradient_norm(gen_reg, cfg.max_grad_norm);
                ctx.gen_opt->step(lr);

                d_loss_sum += static_cast<double>(d_loss);
                g_loss_sum += static_cast<double>(g_loss);
                double rs = 0, fs = 0;
                for (int j = 0; j < mb; j++) {
                    rs += static_cast<double>(real_scores[j]);
                    fs += static_cast<double>(fake_scores[j]);
                }
                real_sum += rs / mb;
                fake_sum += fs / mb;
            } else {
                ctx.model->backward(real_cache, &dlogits, &dvalues, nullptr,
                                    nullptr, true);
                if (cfg.max_grad_norm > 0)
                    detail::clip_gradient_norm(model_reg, cfg.max_grad_norm);
                ctx.model_opt->step(lr);
            }

            stats.policy_loss += static_cast<double>(terms.policy);
            stats.value_loss += static_cast<double>(terms.value);
            stats.entropy += static_cast<double>(terms.entropy);
            steps++;
        }
    }

    stats.policy_loss /= steps;
    stats.value_loss /= steps;
    stats.entropy /= steps;
    if (gan) {
        stats.d_loss = d_loss_sum / steps;
        stats.g_loss = g_loss_sum / steps;
        stats.real_score = real_sum / steps;
        stats.fake_score = fake_sum / steps;
    }
    return stats;
}

/// The combined actor-critic-discriminator update. Setting c_d = 0
/// degenerates to plain PPO: the GAN path (fake batches and the generator
/// step) is skipped entirely and the parameter trajectory matches
/// ppo_update bit for bit under equal random streams.
template <typename T>
UpdateStats acd_update(UpdateContext<T>& ctx, ParamRegistry<T>& model_reg,
                       ParamRegistry<T>& gen_reg, const RolloutBuffer& buffer,
                       const HyperConfig& cfg) {
    return run_update(ctx, model_reg, gen_reg, buffer, cfg, cfg.c_d > 0);
}

/// The PPO baseline arm: acd_update with the discriminator and generator
/// steps removed.
template <typename T>
UpdateStats ppo_update(UpdateContext<T>& ctx, ParamRegistry<T>& model_reg,
                       ParamRegistry<T>& gen_reg, const RolloutBuffer& buffer,
                       const HyperConfig& cfg) {
    return run_update(ctx, model_reg, gen_reg, buffer, cfg, false);
}

}  // namespace acd
