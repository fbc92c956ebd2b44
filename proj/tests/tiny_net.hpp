#pragma once

// Small differentiable policy/value/score network for gradient checks:
// conv(1->2 on 8x8) + leaky relu + three linear heads = 199 parameters.

#include <vector>

#include "acd/core/rng.hpp"
#include "acd/models/distributions.hpp"
#include "acd/models/trunk.hpp"
#include "acd/nn/layers.hpp"

namespace testutil {

struct TinyNet {
    acd::Conv2d<double> conv;
    acd::Linear<double> actor, critic, disc;

    struct Cache {
        acd::Conv2d<double>::Cache conv_cache;
        acd::Linear<double>::Cache a_cache, c_cache, d_cache;
        acd::Mat<double> hidden, features, logits, values, scores;
        acd::Mat<double> probs, logps;
        acd::Mat<double> dfeat, dhidden, dtmp;
    };

    explicit TinyNet(acd::Rng& rng) {
        conv.init(1, 2);
        actor.init(32, 3);
        critic.init(32, 1);
        disc.init(32, 1);
        auto fill = [&](acd::Mat<double>& m, double scale) {
            for (auto& v : m.v) v = scale * (rng.uniform() * 2 - 1);
        };
        fill(conv.w.val, 0.5);
        fill(conv.b.val, 0.1);
        fill(actor.w.val, 0.5);
        fill(critic.w.val, 0.5);
        fill(disc.w.val, 0.5);
    }

    std::vector<acd::Param<double>*> params() {
        return {&conv.w, &conv.b, &actor.w, &actor.b,
                &critic.w, &critic.b, &disc.w, &disc.b};
    }
    size_t param_count() {
        size_t n = 0;
        for (acd::Param<double>* p : params()) n += p->val.size();
        return n;
    }
    void zero_grad() {
        for (acd::Param<double>* p : params()) p->zero_grad();
    }

    void forward(const acd::Mat<double>& x, int batch, Cache& c) {
        conv.forward(x, 8, batch, c.hidden, c.conv_cache);
        acd::leaky_relu_forward(c.hidden, 0.2);
        acd::flatten_maps(c.hidden, batch, c.features);
        actor.forward(c.features, c.logits, c.a_cache);
        critic.forward(c.features, c.values, c.c_cache);
        disc.forward(c.features, c.scores, c.d_cache);
        acd::softmax_columns(c.logits, c.probs, c.logps);
    }

    void backward(Cache& c, const acd::Mat<double>* dlogits,
                  const acd::Mat<double>* dvalues, const acd::Mat<double>* dscores,
                  int batch) {
        c.dfeat.ensure(32, batch);
        c.dfeat.zero();
        if (dlogits) {
            actor.backward(c.a_cache, *dlogits, &c.dtmp, true);
            for (size_t i = 0; i < c.dfeat.size(); i++) c.dfeat.v[i] += c.dtmp.v[i];
        }
        if (dvalues) {
            critic.backward(c.c_cache, *dvalues, &c.dtmp, true);
            for (size_t i = 0; i < c.dfeat.size(); i++) c.dfeat.v[i] += c.dtmp.v[i];
        }
        if (dscores) {
            disc.backward(c.d_cache, *dscores, &c.dtmp, true);
            for (size_t i = 0; i < c.dfeat.size(); i++) c.dfeat.v[i] += c.dtmp.v[i];
        }
        acd::unflatten_maps(c.dfeat, 2, batch, c.dhidden);
        acd::leaky_relu_backward(c.hidden, c.dhidden, 0.2);
        conv.backward(c.conv_cache, c.dhidden, nullptr, true);
    }
};

}  // namespace testutil
