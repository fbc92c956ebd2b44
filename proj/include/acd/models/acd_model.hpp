#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "acd/models/distributions.hpp"
#include "acd/models/trunk.hpp"

namespace acd {

/// Shared trunk with three parallel linear heads: actor (action logits),
/// critic (state value) and discriminator (raw realness score, no
/// squashing -- the least-squares loss consumes unsquashed outputs).
template <typename T>
struct AcdModel {
    TrunkNet<T> trunk;
    Linear<T> actor, critic, disc;
    int action_count = 0;

    struct Cache {
        typename TrunkNet<T>::Cache trunk_cache;
        typename Linear<T>::Cache actor_cache, critic_cache, disc_cache;
        Mat<T> logits, values, scores;
        Mat<T> probs, logps;
        Mat<T> dfeatures, dhead;
    };

    void init(Rng& rng, int actions, int input_hw = 64, int in_ch = 3, int base_ch = 64) {
        action_count = actions;
        trunk.init(rng, input_hw, in_ch, base_ch);
        const int feat = trunk.feature_dim();
        actor.init(feat, actions);
        critic.init(feat, 1);
        disc.init(feat, 1);
        fill_uniform_fan_in(actor.w.val, rng, feat);
        fill_uniform_fan_in(critic.w.val, rng, feat);
        fill_uniform_fan_in(disc.w.val, rng, feat);
    }

    void register_params(ParamRegistry<T>& reg) {
        trunk.register_params(reg, "trunk");
        reg.add("actor.w", actor.w);
        reg.add("actor.b", actor.b);
        reg.add("critic.w", critic.w);
        reg.add("critic.b", critic.b);
        reg.add("disc.w", disc.w);
        reg.add("disc.b", disc.b);
    }

    void forward_trunk(const Mat<T>& x, int batch, Cache& cache) const {
        trunk.forward(x, batch, cache.trunk_cache);
    }

    /// Softmax policy over the cached features; rejects non-finite input.
    void forward_actor(Cache& cache) const {
        const Mat<T>& f = cache.trunk_cache.features;
        for (const T v : f.v) {
            if (!std::isfinite(static_cast<double>(v)))
                throw std::invalid_argument("actor: non-finite features");
        }
        actor.forward(f, cache.logits, cache.actor_cache);
        softmax_columns(cache.logits, cache.probs, cache.logps);
    }

    void forward_critic(Cache& cache) const {
        critic.forward(cache.trunk_cache.features, cache.values, cache.critic_cache);
    }

    void forward_disc(Cache& cache) const {
        disc.forward(cache.trunk_cache.features, cache.scores, cache.disc_cache);
    }

    /// Backpropagates whichever head gradients are provided (others may be
    /// null) through the shared trunk. dx is optional; param_grads=false
    /// computes input gradients only.
    void backward(Cache& cache, const Mat<T>* dlogits, const Mat<T>* dvalues,
                  const Mat<T>* dscores, Mat<T>* dx, bool param_grads) {
        Mat<T>& df = cache.dfeatures;
        df.ensure(trunk.feature_dim(), cache.trunk_cache.batch);
        df.zero();
        Mat<T>& dhead = cache.dhead;
        if (dlogits) {
            actor.backward(cache.actor_cache, *dlogits, &dhead, param_grads);
            for (size_t i = 0; i < df.size(); i++) df.v[i] += dhead.v[i];
        }
        if (dvalues) {
            critic.backward(cache.critic_cache, *dvalues, &dhead, param_grads);
            for (size_t i = 0; i < df.size(); i++) df.v[i] += dhead.v[i];
        }
        if (dscores) {
            disc.backward(cache.disc_cache, *dscores, &dhead, param_grads);
            for (size_t i = 0; i < df.size(); i++) df.v[i] += dhead.v[i];
        }
        trunk.backward(cache.trunk_cache, df, dx, param_grads);
    }
};

}  // namespace acd
