#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "acd/core/blas.hpp"
#include "acd/core/mat.hpp"
#include "acd/nn/param.hpp"

namespace acd {

// Feature maps are [channels, batch*pixels] with square images; sample b's
// pixels occupy columns [b*P, (b+1)*P). A convolution is then one GEMM over
// the whole batch.

inline int conv_out_hw(int hw, int k, int s, int p) { return (hw + 2 * p - k) / s + 1; }

/// x [C, B*H*W] -> cols [C*K*K, B*OH*OW].
template <typename T>
void im2col(const Mat<T>& x, int ch, int hw, int batch, int k, int s, int p,
            Mat<T>& cols) {
    const int ohw = conv_out_hw(hw, k, s, p);
    const int pin = hw * hw, pout = ohw * ohw;
    cols.ensure(ch * k * k, batch * pout);
#pragma omp parallel for schedule(static)
    for (int r = 0; r < ch * k * k; r++) {
        const int c = r / (k * k);
        const int ky = (r / k) % k;
        const int kx = r % k;
        const T* xc = x.row(c);
        T* dst = cols.row(r);
        for (int b = 0; b < batch; b++) {
            for (int oy = 0; oy < ohw; oy++) {
                const int iy = oy * s + ky - p;
                T* out = dst + static_cast<size_t>(b) * pout + static_cast<size_t>(oy) * ohw;
                if (iy < 0 || iy >= hw) {
                    std::fill(out, out + ohw, T(0));
                    continue;
                }
                const T* src = xc + static_cast<size_t>(b) * pin + static_cast<size_t>(iy) * hw;
                for (int ox = 0; ox < ohw; ox++) {
                    const int ix = ox * s + kx - p;
                    out[ox] = (ix >= 0 && ix < hw) ? src[ix] : T(0);
                }
            }
        }
    }
}

/// Adjoint of im2col: scatter-add cols back into x (x must be pre-sized;
/// it is zeroed here). Geometry arguments describe the *image side* x.
template <typename T>
void col2im(const Mat<T>& cols, int ch, int hw, int batch, int k, int s, int p,
            Mat<T>& x) {
    const int ohw = conv_out_hw(hw, k, s, p);
    const int pin = hw * hw, pout = ohw * ohw;
    x.ensure(ch, batch * pin);
    x.zero();
#pragma omp parallel for schedule(static)
    for (int c = 0; c < ch; c++) {
        T* xc = x.row(c);
        for (int ky = 0; ky < k; ky++) {
            for (int kx = 0; kx < k; kx++) {
                const T* src_row = cols.row((c * k + ky) * k + kx);
                for (int b = 0; b < batch; b++) {
                    for (int oy = 0; oy < ohw; oy++) {
                        const int iy = oy * s + ky - p;
                        if (iy < 0 || iy >= hw) continue;
                        const T* src = src_row + static_cast<size_t>(b) * pout +
                                       static_cast<size_t>(oy) * ohw;
                        T* dst = xc + static_cast<size_t>(b) * pin + static_cast<size_t>(iy) * hw;
                        for (int ox = 0; ox < ohw; ox++) {
                            const int ix = ox * s + kx - p;
                            if (ix >= 0 && ix < hw) dst[ix] += src[ox];
                        }
                    }
                }
            }
        }
    }
}

template <typename T>
void add_row_bias(Mat<T>& y, const Mat<T>& bias) {
    for (int r = 0; r < y.rows; r++) {
        T* row = y.row(r);
        const T b = bias.v[r];
        for (int c = 0; c < y.cols; c++) row[c] += b;
    }
}

template <typename T>
void accumulate_row_sums(const Mat<T>& dy, Mat<T>& db) {
    for (int r = 0; r < dy.rows; r++) {
        const T* row = dy.row(r);
        T s = 0;
        for (int c = 0; c < dy.cols; c++) s += row[c];
        db.v[r] += s;
    }
}

template <typename T>
struct Conv2d {
    int in_ch = 0, out_ch = 0, k = 4, s = 2, p = 1;
    Param<T> w;  // [out_ch, in_ch*k*k]
    Param<T> b;  // [out_ch, 1]

    struct Cache {
        Mat<T> cols;   // im2col of the forward input
        Mat<T> dcols;  // scratch for backward
        int hw = 0, batch = 0;
    };

    void init(int in, int out) {
        in_ch = in;
        out_ch = out;
        w.init(out, in * k * k);
        b.init(out, 1);
    }

    void forward(const Mat<T>& x, int hw, int batch, Mat<T>& y, Cache& cache) const {
        if (x.rows != in_ch) throw std::invalid_argument("conv2d: channel mismatch");
        const int ohw = conv_out_hw(hw, k, s, p);
        im2col(x, in_ch, hw, batch, k, s, p, cache.cols);
        cache.hw = hw;
        cache.batch = batch;
        y.ensure(out_ch, batch * ohw * ohw);
        matmul(w.val, cache.cols, y);
        add_row_bias(y, b.val);
    }

    /// dx may be null; param_grads=false skips weight/bias accumulation.
    void backward(Cache& cache, const Mat<T>& dy, Mat<T>* dx, bool param_grads) {
        if (param_grads) {
            matmul(dy, cache.cols, w.grad, false, true, T(1));
            accumulate_row_sums(dy, b.grad);
        }
        if (dx) {
            matmul(w.val, dy, cache.dcols, true, false);
            col2im(cache.dcols, in_ch, cache.hw, cache.batch, k, s, p, *dx);
        }
    }
};

/// Transposed convolution; exactly doubles the spatial size for k=4, s=2,
/// p=1. Weights use the layout of the mirror-image convolution
/// [in_ch, out_ch*k*k], so forward here is that convolution's backward-data
/// pass and vice versa.
template <typename T>
struct ConvTranspose2d {
    int in_ch = 0, out_ch = 0, k = 4, s = 2, p = 1;
    Param<T> w;  // [in_ch, out_ch*k*k]
    Param<T> b;  // [out_ch, 1]

    struct Cache {
        Mat<T> cols;
        const Mat<T>* x = nullptr;  // borrowed until backward
        int hw = 0, batch = 0;
    };

    void init(int in, int out) {
        in_ch = in;
        out_ch = out;
        w.init(in, out * k * k);
        b.init(out, 1);
    }

    int out_hw(int hw) const { return (hw - 1) * s - 2 * p + k; }  // = 2*hw for k4 s2 p1

    void forward(const Mat<T>& x, int hw, int batch, Mat<T>& y, Cache& cache) const {
        if (x.rows != in_ch) throw std::invalid_argument("convT2d: channel mismatch");
        const int ohw = 2 * hw;
        cache.x = &x;
        cache.hw = hw;
        cache.batch = batch;
        matmul(w.val, x, cache.cols, true, false);  // [out_ch*k*k, B*Pin]
        col2im(cache.cols, out_ch, ohw, batch, k, s, p, y);
        add_row_bias(y, b.val);
    }

    void backward(Cache& cache, const Mat<T>& dy, Mat<T>* dx, bool param_grads) {
        const int ohw = 2 * cache.hw;
        im2col(dy, out_ch, ohw, cache.batch, k, s, p, cache.cols);
        if (param_grads) {
            matmul(*cache.x, cache.cols, w.grad, false, true, T(1));
            accumulate_row_sums(dy, b.grad);
        }
        if (dx) matmul(w.val, cache.cols, *dx);
    }
};

template <typename T>
struct Linear {
    int in_dim = 0, out_dim = 0;
    Param<T> w;  // [out, in]
    Param<T> b;  // [out, 1]

    struct Cache {
        const Mat<T>* x = nullptr;
    };

    void init(int in, int out) {
        in_dim = in;
        out_dim = out;
        w.init(out, in);
        b.init(out, 1);
    }

    // x is [in, B], one column per sample.
    void forward(const Mat<T>& x, Mat<T>& y, Cache& cache) const {
        if (x.rows != in_dim) throw std::invalid_argument("linear: input dim mismatch");
        cache.x = &x;
        matmul(w.val, x, y);
        add_row_bias(y, b.val);
    }

    void backward(Cache& cache, const Mat<T>& dy, Mat<T>* dx, bool param_grads) {
        if (param_grads) {
            matmul(dy, *cache.x, w.grad, false, true, T(1));
            accumulate_row_sums(dy, b.grad);
        }
        if (dx) matmul(w.val, dy, *dx, true, false);
    }
};

/// Per-channel batch normalization over [C, B*P]. Training mode uses batch
/// statistics and updates running estimates; eval mode reads the running
/// estimates only, keeping inference deterministic sample-by-sample.
template <typename T>
struct BatchNorm2d {
    int ch = 0;
    T eps = T(1e-5);
    T momentum = T(0.1);
    Param<T> gamma;  // [C,1]
    Param<T> beta;   // [C,1]
    Mat<T> running_mean, running_var;

    struct Cache {
        Mat<T> xhat;     // normalized input
        Mat<T> inv_std;  // [C,1]
    };

    void init(int c) {
        ch = c;
        gamma.init(c, 1);
        beta.init(c, 1);
        running_mean.resize(c, 1);
        running_var.resize(c, 1);
        for (int i = 0; i < c; i++) running_var.v[i] = T(1);
    }

    void forward(const Mat<T>& x, Mat<T>& y, Cache& cache, bool train) {
        const int n = x.cols;
        y.ensure(ch, n);
        if (train) {
            cache.xhat.ensure(ch, n);
            cache.inv_std.ensure(ch, 1);
#pragma omp parallel for schedule(static)
            for (int c = 0; c < ch; c++) {
                const T* xr = x.row(c);
                double mu = 0;
                for (int i = 0; i < n; i++) mu += xr[i];
                mu /= n;
                double var = 0;
                for (int i = 0; i < n; i++) {
                    const double d = xr[i] - mu;
                    var += d * d;
                }
                var /= n;
                const T inv = T(1) / std::sqrt(static_cast<T>(var) + eps);
                cache.inv_std.v[c] = inv;
                T* xh = cache.xhat.row(c);
                T* yr = y.row(c);
                const T g = gamma.val.v[c], bt = beta.val.v[c];
                for (int i = 0; i < n; i++) {
                    xh[i] = (xr[i] - static_cast<T>(mu)) * inv;
                    yr[i] = g * xh[i] + bt;
                }
                const T unbiased = n > 1 ? static_cast<T>(var) * n / (n - 1)
                                         : static_cast<T>(var);
                running_mean.v[c] = (T(1) - momentum) * running_mean.v[c] +
                                    momentum * static_cast<T>(mu);
                running_var.v[c] =
                    (T(1) - momentum) * running_var.v[c] + momentum * unbiased;
            }
        } else {
#pragma omp parallel for schedule(static)
            for (int c = 0; c < ch; c++) {
                const T* xr = x.row(c);
                T* yr = y.row(c);
                const T inv = T(1) / std::sqrt(running_var.v[c] + eps);
                const T g = gamma.val.v[c], bt = beta.val.v[c];
                const T mu = running_mean.v[c];
                for (int i = 0; i < n; i++) yr[i] = g * (xr[i] - mu) * inv + bt;
            }
        }
    }

    // Train-mode backward only.
    void backward(Cache& cache, const Mat<T>& dy, Mat<T>* dx, bool param_grads) {
        const int n = dy.cols;
        if (dx) dx->ensure(ch, n);
#pragma omp parallel for schedule(static)
        for (int c = 0; c < ch; c++) {
            const T* dyr = dy.row(c);
            const T* xh = cache.xhat.row(c);
            double sum_dy = 0, sum_dy_xh = 0;
            for (int i = 0; i < n; i++) {
                sum_dy += dyr[i];
                sum_dy_xh += dyr[i] * xh[i];
            }
            if (param_grads) {
                gamma.grad.v[c] += static_cast<T>(sum_dy_xh);
                beta.grad.v[c] += static_cast<T>(sum_dy);
            }
            if (dx) {
                T* dxr = dx->row(c);
                const T scale = gamma.val.v[c] * cache.inv_std.v[c] / n;
                for (int i = 0; i < n; i++) {
                    dxr[i] = scale * (n * dyr[i] - static_cast<T>(sum_dy) -
                                      xh[i] * static_cast<T>(sum_dy_xh));
                }
            }
        }
    }
};

// In-place activations; backward rescales dy using the forward output.

template <typename T>
void leaky_relu_forward(Mat<T>& x, T slope) {
    T* v = x.data();
    const size_t n = x.size();
#pragma omp parallel for schedule(static)
    for (size_t i = 0; i < n; i++) v[i] = v[i] > T(0) ? v[i] : slope * v[i];
}

template <typename T>
void leaky_relu_backward(const Mat<T>& y, Mat<T>& dy, T slope) {
    const T* yv = y.data();
    T* dv = dy.data();
    const size_t n = y.size();
#pragma omp parallel for schedule(static)
    for (size_t i = 0; i < n; i++) {
        if (yv[i] <= T(0)) dv[i] *= slope;
    }
}

template <typename T>
void relu_forward(Mat<T>& x) {
    T* v = x.data();
    const size_t n = x.size();
#pragma omp parallel for schedule(static)
    for (size_t i = 0; i < n; i++) v[i] = std::max(v[i], T(0));
}

template <typename T>
void relu_backward(const Mat<T>& y, Mat<T>& dy) {
    const T* yv = y.data();
    T* dv = dy.data();
    const size_t n = y.size();
#pragma omp parallel for schedule(static)
    for (size_t i = 0; i < n; i++) {
        if (yv[i] <= T(0)) dv[i] = T(0);
    }
}

template <typename T>
void sigmoid_forward(Mat<T>& x) {
    T* v = x.data();
    const size_t n = x.size();
#pragma omp parallel for schedule(static)
    for (size_t i = 0; i < n; i++) v[i] = T(1) / (T(1) + std::exp(-v[i]));
}

template <typename T>
void sigmoid_backward(const Mat<T>& y, Mat<T>& dy) {
    const T* yv = y.data();
    T* dv = dy.data();
    const size_t n = y.size();
#pragma omp parallel for schedule(static)
    for (size_t i = 0; i < n; i++) dv[i] *= yv[i] * (T(1) - yv[i]);
}

}  // namespace acd
