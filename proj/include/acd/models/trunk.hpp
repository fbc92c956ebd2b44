#pragma once

#include <string>

#include "acd/core/rng.hpp"
#include "acd/nn/init.hpp"
#include "acd/nn/layers.hpp"
#include "acd/nn/param.hpp"

namespace acd {

/// [C, B*P] feature maps -> [C*P, B] feature columns.
template <typename T>
void flatten_maps(const Mat<T>& maps, int batch, Mat<T>& out) {
    const int pix = maps.cols / batch;
    out.ensure(maps.rows * pix, batch);
    for (int c = 0; c < maps.rows; c++) {
        const T* src = maps.row(c);
        for (int b = 0; b < batch; b++) {
            for (int p = 0; p < pix; p++) {
                out(c * pix + p, b) = src[static_cast<size_t>(b) * pix + p];
            }
        }
    }
}

template <typename T>
void unflatten_maps(const Mat<T>& flat, int channels, int batch, Mat<T>& out) {
    const int pix = flat.rows / channels;
    out.ensure(channels, batch * pix);
    for (int c = 0; c < channels; c++) {
        T* dst = out.row(c);
        for (int b = 0; b < batch; b++) {
            for (int p = 0; p < pix; p++) {
                dst[static_cast<size_t>(b) * pix + p] = flat(c * pix + p, b);
            }
        }
    }
}

/// The shared convolutional trunk: four 4x4/stride-2/pad-1 convolutions
/// (3->64->128->256->512) with LeakyReLU(0.2), flattened to a 8192-long
/// feature vector for 3x64x64 input. No batch norm here: rollout-time
/// evaluation must be independent of batch composition.
template <typename T>
struct TrunkNet {
    static constexpr T kLeakySlope = T(0.2);

    int input_hw = 64;
    int in_ch = 3;
    int base_ch = 64;
    Conv2d<T> conv1, conv2, conv3, conv4;

    struct Cache {
        typename Conv2d<T>::Cache c1, c2, c3, c4;
        Mat<T> a1, a2, a3, a4;  // post-activation maps
        Mat<T> features;        // [feature_dim, B]
        Mat<T> d4, d3, d2, d1;  // backward scratch
        int batch = 0;
    };

    int feature_dim() const {
        const int hw_out = input_hw / 16;
        return 8 * base_ch * hw_out * hw_out;
    }

    void init(Rng& rng, int input_hw_ = 64, int in_ch_ = 3, int base_ch_ = 64) {
        input_hw = input_hw_;
        in_ch = in_ch_;
        base_ch = base_ch_;
        conv1.init(in_ch, base_ch);
        conv2.init(base_ch, base_ch * 2);
        conv3.init(base_ch * 2, base_ch * 4);
        conv4.init(base_ch * 4, base_ch * 8);
        for (Conv2d<T>* c : {&conv1, &conv2, &conv3, &conv4}) {
            fill_normal(c->w.val, rng, 0.0, 0.02);
        }
    }

    void register_params(ParamRegistry<T>& reg, const std::string& prefix) {
        reg.add(prefix + ".conv1.w", conv1.w);
        reg.add(prefix + ".conv1.b", conv1.b);
        reg.add(prefix + ".conv2.w", conv2.w);
        reg.add(prefix + ".conv2.b", conv2.b);
        reg.add(prefix + ".conv3.w", conv3.w);
        reg.add(prefix + ".conv3.b", conv3.b);
        reg.add(prefix + ".conv4.w", conv4.w);
        reg.add(prefix + ".conv4.b", conv4.b);
    }

    /// x: [in_ch, B*input_hw^2] -> cache.features: [feature_dim, B]
    void forward(const Mat<T>& x, int batch, Cache& cache) const {
        cache.batch = batch;
        conv1.forward(x, input_hw, batch, cache.a1, cache.c1);
        leaky_relu_forward(cache.a1, kLeakySlope);
        conv2.forward(cache.a1, input_hw / 2, batch, cache.a2, cache.c2);
        leaky_relu_forward(cache.a2, kLeakySlope);
        conv3.forward(cache.a2, input_hw / 4, batch, cache.a3, cache.c3);
        leaky_relu_forward(cache.a3, kLeakySlope);
        conv4.forward(cache.a3, input_hw / 8, batch, cache.a4, cache.c4);
        leaky_relu_forward(cache.a4, kLeakySlope);
        flatten_maps(cache.a4, batch, cache.features);
    }

    void backward(Cache& cache, const Mat<T>& dfeatures, Mat<T>* dx, bool param_grads) {
        unflatten_maps(dfeatures, conv4.out_ch, cache.batch, cache.d4);
        leaky_relu_backward(cache.a4, cache.d4, kLeakySlope);
        conv4.backward(cache.c4, cache.d4, &cache.d3, param_grads);
        leaky_relu_backward(cache.a3, cache.d3, kLeakySlope);
        conv3.backward(cache.c3, cache.d3, &cache.d2, param_grads);
        leaky_relu_backward(cache.a2, cache.d2, kLeakySlope);
        conv2.backward(cache.c2, cache.d2, &cache.d1, param_grads);
        leaky_relu_backward(cache.a1, cache.d1, kLeakySlope);
        conv1.backward(cache.c1, cache.d1, dx, param_grads);
    }
};

}  // namespace acd
