#pragma once

#include <string>

#include "acd/models/generator.hpp"
#include "acd/models/trunk.hpp"

namespace acd {

/// Convolutional autoencoder baseline: a trunk-shaped encoder, a 128-wide
/// linear bottleneck, and a decoder that reuses the generator block with
/// the bottleneck as its latent. Trained with mean squared pixel error.
template <typename T>
struct Autoencoder {
    static constexpr int kBottleneck = 128;

    TrunkNet<T> encoder;
    Linear<T> bottleneck;  // feature_dim -> kBottleneck
    Generator<T> decoder;  // latent = kBottleneck

    struct Cache {
        typename TrunkNet<T>::Cache enc_cache;
        typename Linear<T>::Cache bott_cache;
        typename Generator<T>::Cache dec_cache;
        Mat<T> code;     // [kBottleneck, B]
        Mat<T> dcode, dfeatures;
        int batch = 0;
    };

    void init(Rng& rng, int input_hw = 64, int in_ch = 3, int base_ch = 64) {
        encoder.init(rng, input_hw, in_ch, base_ch);
        bottleneck.init(encoder.feature_dim(), kBottleneck);
        fill_uniform_fan_in(bottleneck.w.val, rng, encoder.feature_dim());
        decoder.init(rng, kBottleneck, input_hw, in_ch, base_ch);
    }

    void register_params(ParamRegistry<T>& reg) {
        encoder.register_params(reg, "ae.enc");
        reg.add("ae.bottleneck.w", bottleneck.w);
        reg.add("ae.bottleneck.b", bottleneck.b);
        decoder.register_params(reg, "ae.dec");
    }

    /// x [in_ch, B*hw^2] -> reconstruction in cache.dec_cache.out, same
    /// shape, values in [0,1].
    void forward(const Mat<T>& x, int batch, Cache& cache, bool train) {
        if (x.rows != encoder.in_ch)
            throw std::invalid_argument("autoencoder: channel mismatch");
        cache.batch = batch;
        encoder.forward(x, batch, cache.enc_cache);
        bottleneck.forward(cache.enc_cache.features, cache.code, cache.bott_cache);
        decoder.forward(cache.code, batch, cache.dec_cache, train);
    }

    const Mat<T>& reconstruction(const Cache& cache) const { return cache.dec_cache.out; }

    void backward(Cache& cache, const Mat<T>& drecon, bool param_grads) {
        decoder.backward(cache.dec_cache, drecon, &cache.dcode, param_grads);
        bottleneck.backward(cache.bott_cache, cache.dcode, &cache.dfeatures, param_grads);
        encoder.backward(cache.enc_cache, cache.dfeatures, nullptr, param_grads);
    }
};

}  // namespace acd
