#pragma once

#include <string>

#include "acd/core/rng.hpp"
#include "acd/models/trunk.hpp"
#include "acd/nn/init.hpp"
#include "acd/nn/layers.hpp"

namespace acd {

/// DCGAN-style generator: a fully connected projection of the latent
/// vector to 512x4x4, then four transposed convolutions mirroring the
/// trunk (512->256->128->64->3, 4x4/stride-2/pad-1) with batch norm and
/// ReLU on the hidden layers and a sigmoid output so samples live in the
/// same [0,1] range as real observations. The latent length is 100 for
/// the GAN; the autoencoder reuses this block as its decoder with the
/// bottleneck width instead.
template <typename T>
struct Generator {
    int latent_dim = 100;
    int out_hw = 64;
    int base_ch = 64;
    Linear<T> fc;  // latent -> 8*base_ch * (out_hw/16)^2
    BatchNorm2d<T> bn0, bn1, bn2, bn3;
    ConvTranspose2d<T> deconv1, deconv2, deconv3, deconv4;

    struct Cache {
        typename Linear<T>::Cache fc_cache;
        typename ConvTranspose2d<T>::Cache t1, t2, t3, t4;
        typename BatchNorm2d<T>::Cache b0, b1, b2, b3;
        Mat<T> proj;                  // [8*base, B*(hw/16)^2]
        Mat<T> h0, h1, h2, h3;        // post-BN+ReLU maps
        Mat<T> pre1, pre2, pre3, pre4;  // deconv outputs before norm/act
        Mat<T> out;                   // [3, B*out_hw^2], sigmoid
        Mat<T> g4, g3, g2, g1, g0, gproj, gflat;  // backward scratch
        Mat<T> fc_out;                // [fcdim, B]
        int batch = 0;
    };

    int seed_hw() const { return out_hw / 16; }

    void init(Rng& rng, int latent = 100, int out_hw_ = 64, int out_ch = 3,
              int base_ch_ = 64) {
        latent_dim = latent;
        out_hw = out_hw_;
        base_ch = base_ch_;
        const int seed_pix = seed_hw() * seed_hw();
        fc.init(latent, 8 * base_ch * seed_pix);
        deconv1.init(8 * base_ch, 4 * base_ch);
        deconv2.init(4 * base_ch, 2 * base_ch);
        deconv3.init(2 * base_ch, base_ch);
        deconv4.init(base_ch, out_ch);
        bn0.init(8 * base_ch);
        bn1.init(4 * base_ch);
        bn2.init(2 * base_ch);
        bn3.init(base_ch);
        fill_normal(fc.w.val, rng, 0.0, 0.02);
        for (ConvTranspose2d<T>* d : {&deconv1, &deconv2, &deconv3, &deconv4})
            fill_normal(d->w.val, rng, 0.0, 0.02);
        for (BatchNorm2d<T>* bn : {&bn0, &bn1, &bn2, &bn3})
            fill_normal(bn->gamma.val, rng, 1.0, 0.02);
    }

    void register_params(ParamRegistry<T>& reg, const std::string& prefix) {
        reg.add(prefix + ".fc.w", fc.w);
        reg.add(prefix + ".fc.b", fc.b);
        const std::string bn_names[4] = {".bn0", ".bn1", ".bn2", ".bn3"};
        BatchNorm2d<T>* bns[4] = {&bn0, &bn1, &bn2, &bn3};
        for (int i = 0; i < 4; i++) {
            reg.add(prefix + bn_names[i] + ".gamma", bns[i]->gamma);
            reg.add(prefix + bn_names[i] + ".beta", bns[i]->beta);
            reg.add_state(prefix + bn_names[i] + ".running_mean", bns[i]->running_mean);
            reg.add_state(prefix + bn_names[i] + ".running_var", bns[i]->running_var);
        }
        reg.add(prefix + ".deconv1.w", deconv1.w);
        reg.add(prefix + ".deconv1.b", deconv1.b);
        reg.add(prefix + ".deconv2.w", deconv2.w);
        reg.add(prefix + ".deconv2.b", deconv2.b);
        reg.add(prefix + ".deconv3.w", deconv3.w);
        reg.add(prefix + ".deconv3.b", deconv3.b);
        reg.add(prefix + ".deconv4.w", deconv4.w);
        reg.add(prefix + ".deconv4.b", deconv4.b);
    }

    /// latent [latent_dim, B] -> cache.out [out_ch, B*out_hw^2] in [0,1].
    /// Batch statistics are used in train mode, running estimates in eval.
    void forward(const Mat<T>& latent, int batch, Cache& cache, bool train) {
        if (latent.rows != latent_dim)
            throw std::invalid_argument("generator: latent length mismatch");
        cache.batch = batch;
        const int shw = seed_hw();
        fc.forward(latent, cache.fc_out, cache.fc_cache);
        unflatten_maps(cache.fc_out, 8 * base_ch, batch, cache.proj);
        bn0.forward(cache.proj, cache.h0, cache.b0, train);
        relu_forward(cache.h0);
        deconv1.forward(cache.h0, shw, batch, cache.pre1, cache.t1);
        bn1.forward(cache.pre1, cache.h1, cache.b1, train);
        relu_forward(cache.h1);
        deconv2.forward(cache.h1, shw * 2, batch, cache.pre2, cache.t2);
        bn2.forward(cache.pre2, cache.h2, cache.b2, train);
        relu_forward(cache.h2);
        deconv3.forward(cache.h2, shw * 4, batch, cache.pre3, cache.t3);
        bn3.forward(cache.pre3, cache.h3, cache.b3, train);
        relu_forward(cache.h3);
        deconv4.forward(cache.h3, shw * 8, batch, cache.out, cache.t4);
        sigmoid_forward(cache.out);
    }

    /// Train-mode backward. dlatent may be null.
    void backward(Cache& cache, const Mat<T>& dout, Mat<T>* dlatent, bool param_grads) {
        cache.g4.ensure(dout.rows, dout.cols);
        std::copy(dout.v.begin(), dout.v.end(), cache.g4.v.begin());
        sigmoid_backward(cache.out, cache.g4);
        deconv4.backward(cache.t4, cache.g4, &cache.g3, param_grads);
        relu_backward(cache.h3, cache.g3);
        bn3.backward(cache.b3, cache.g3, &cache.g3, param_grads);
        deconv3.backward(cache.t3, cache.g3, &cache.g2, param_grads);
        relu_backward(cache.h2, cache.g2);
        bn2.backward(cache.b2, cache.g2, &cache.g2, param_grads);
        deconv2.backward(cache.t2, cache.g2, &cache.g1, param_grads);
        relu_backward(cache.h1, cache.g1);
        bn1.backward(cache.b1, cache.g1, &cache.g1, param_grads);
        deconv1.backward(cache.t1, cache.g1, &cache.g0, param_grads);
        relu_backward(cache.h0, cache.g0);
        bn0.backward(cache.b0, cache.g0, &cache.g0, param_grads);
        flatten_maps(cache.g0, cache.batch, cache.gflat);
        fc.backward(cache.fc_cache, cache.gflat, dlatent, param_grads);
    }
};

/// Latent batch [dim, B] of i.i.d. standard normals.
template <typename T>
Mat<T> sample_latent(int dim, int batch, Rng& rng) {
    Mat<T> z(dim, batch);
    for (auto& v : z.v) v = static_cast<T>(rng.normal());
    return z;
}

}  // namespace acd
