#include <doctest.h>

#include <cmath>
#include <vector>

#include "acd/core/rng.hpp"
#include "acd/nn/layers.hpp"
#include "acd/nn/rmsprop.hpp"
#include "oracles.hpp"

using namespace acd;

namespace {

void fill_random(Mat<double>& m, Rng& rng, double scale = 1.0) {
    for (auto& v : m.v) v = scale * (rng.uniform() * 2 - 1);
}

// Linear probe loss: L = <probe, y>, so dL/dy = probe.
struct Probe {
    Mat<double> w;
    explicit Probe(int rows, int cols, Rng& rng) : w(rows, cols) { fill_random(w, rng); }
    double operator()(const Mat<double>& y) const {
        double s = 0;
        for (size_t i = 0; i < y.size(); i++) s += w.v[i] * y.v[i];
        return s;
    }
};

template <typename Forward>
void check_grads(Mat<double>& values, const Mat<double>& analytic, Forward forward,
                 double tol = 1e-5) {
    for (size_t i = 0; i < values.size(); i++) {
        const double fd = oracle::central_difference(forward, values.v[i]);
        CAPTURE(i);
        CHECK(oracle::grad_rel_err(analytic.v[i], fd) < tol);
    }
}

}  // namespace

TEST_CASE("conv output size halves spatial dims for k4 s2 p1") {
    for (const int hw : {64, 32, 16, 8}) {
        CHECK(conv_out_hw(hw, 4, 2, 1) == hw / 2);
    }
}

TEST_CASE("im2col and col2im are adjoint") {
    Rng rng(7);
    const int ch = 3, hw = 6, batch = 2, k = 4, s = 2, p = 1;
    const int ohw = conv_out_hw(hw, k, s, p);
    Mat<double> x(ch, batch * hw * hw);
    fill_random(x, rng);
    Mat<double> cols;
    im2col(x, ch, hw, batch, k, s, p, cols);

    Mat<double> c(ch * k * k, batch * ohw * ohw);
    fill_random(c, rng);
    Mat<double> back;
    col2im(c, ch, hw, batch, k, s, p, back);

    // <im2col(x), c> == <x, col2im(c)>
    double lhs = 0, rhs = 0;
    for (size_t i = 0; i < cols.size(); i++) lhs += cols.v[i] * c.v[i];
    for (size_t i = 0; i < x.size(); i++) rhs += x.v[i] * back.v[i];
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("conv2d gradients match finite differences") {
    Rng rng(11);
    const int in_ch = 2, out_ch = 3, hw = 6, batch = 2;
    Conv2d<double> conv;
    conv.init(in_ch, out_ch);
    fill_random(conv.w.val, rng, 0.3);
    fill_random(conv.b.val, rng, 0.3);
    Mat<double> x(in_ch, batch * hw * hw);
    fill_random(x, rng);

    const int ohw = conv_out_hw(hw, 4, 2, 1);
    Probe probe(out_ch, batch * ohw * ohw, rng);
    Conv2d<double>::Cache cache;
    Mat<double> y;
    auto forward = [&]() {
        conv.forward(x, hw, batch, y, cache);
        return probe(y);
    };

    forward();
    conv.w.zero_grad();
    conv.b.zero_grad();
    Mat<double> dx;
    conv.backward(cache, probe.w, &dx, true);

    check_grads(conv.w.val, conv.w.grad, forward);
    check_grads(conv.b.val, conv.b.grad, forward);
    check_grads(x, dx, forward);
}

TEST_CASE("conv transpose gradients match finite differences") {
    Rng rng(13);
    const int in_ch = 3, out_ch = 2, hw = 3, batch = 2;
    ConvTranspose2d<double> deconv;
    deconv.init(in_ch, out_ch);
    fill_random(deconv.w.val, rng, 0.3);
    fill_random(deconv.b.val, rng, 0.3);
    Mat<double> x(in_ch, batch * hw * hw);
    fill_random(x, rng);

    CHECK(deconv.out_hw(hw) == 2 * hw);
    Probe probe(out_ch, batch * 4 * hw * hw, rng);
    ConvTranspose2d<double>::Cache cache;
    Mat<double> y;
    auto forward = [&]() {
        deconv.forward(x, hw, batch, y, cache);
        return probe(y);
    };

    forward();
    deconv.w.zero_grad();
    deconv.b.zero_grad();
    Mat<double> dx;
    deconv.backward(cache, probe.w, &dx, true);
    // backward overwrote cache.cols; the forward pass must be repeated
    // before further gradient evaluations, which check_grads does anyway.

    check_grads(deconv.w.val, deconv.w.grad, forward);
    check_grads(deconv.b.val, deconv.b.grad, forward);
    check_grads(x, dx, forward);
}

TEST_CASE("batch norm gradients match finite differences (train mode)") {
    Rng rng(17);
    const int ch = 4, n = 10;
    BatchNorm2d<double> bn;
    bn.init(ch);
    fill_random(bn.gamma.val, rng, 0.5);
    for (auto& g : bn.gamma.val.v) g += 1.0;
    fill_random(bn.beta.val, rng, 0.5);
    Mat<double> x(ch, n);
    fill_random(x, rng);

    Probe probe(ch, n, rng);
    BatchNorm2d<double>::Cache cache;
    Mat<double> y;
    auto forward = [&]() {
        // Keep running stats out of the differentiated path.
        BatchNorm2d<double> fresh = bn;
        fresh.forward(x, y, cache, true);
        return probe(y);
    };

    forward();
    bn.gamma.zero_grad();
    bn.beta.zero_grad();
    Mat<double> dy = probe.w;
    Mat<double> dx;
    {
        BatchNorm2d<double> fresh = bn;
        fresh.forward(x, y, cache, true);
        bn.backward(cache, dy, &dx, true);
    }

    check_grads(bn.gamma.val, bn.gamma.grad, forward);
    check_grads(bn.beta.val, bn.beta.grad, forward);
    check_grads(x, dx, forward);
}

TEST_CASE("batch norm backward supports in-place dy/dx") {
    Rng rng(29);
    const int ch = 3, n = 8;
    BatchNorm2d<double> bn;
    bn.init(ch);
    Mat<double> x(ch, n);
    fill_random(x, rng);
    BatchNorm2d<double>::Cache cache;
    Mat<double> y;
    bn.forward(x, y, cache, true);

    Mat<double> dy(ch, n);
    fill_random(dy, rng);
    Mat<double> dx_separate;
    bn.backward(cache, dy, &dx_separate, false);
    Mat<double> dx_inplace = dy;
    bn.backward(cache, dx_inplace, &dx_inplace, false);
    for (size_t i = 0; i < dx_separate.size(); i++)
        CHECK(dx_inplace.v[i] == doctest::Approx(dx_separate.v[i]).epsilon(1e-14));
}

TEST_CASE("linear layer gradients match finite differences") {
    Rng rng(19);
    const int in = 7, out = 4, batch = 3;
    Linear<double> lin;
    lin.init(in, out);
    fill_random(lin.w.val, rng, 0.4);
    fill_random(lin.b.val, rng, 0.4);
    Mat<double> x(in, batch);
    fill_random(x, rng);

    Probe probe(out, batch, rng);
    Linear<double>::Cache cache;
    Mat<double> y;
    auto forward = [&]() {
        lin.forward(x, y, cache);
        return probe(y);
    };

    forward();
    lin.w.zero_grad();
    lin.b.zero_grad();
    Mat<double> dx;
    lin.backward(cache, probe.w, &dx, true);

    check_grads(lin.w.val, lin.w.grad, forward);
    check_grads(lin.b.val, lin.b.grad, forward);
    check_grads(x, dx, forward);
}

TEST_CASE("activation chain gradients match finite differences") {
    // conv -> leaky relu -> linear-probe and a sigmoid/relu pair, checking
    // the in-place activation backward rules end to end.
    Rng rng(23);
    const int ch = 2, hw = 6, batch = 1;
    Conv2d<double> conv;
    conv.init(ch, 3);
    fill_random(conv.w.val, rng, 0.4);
    fill_random(conv.b.val, rng, 0.1);
    Mat<double> x(ch, batch * hw * hw);
    fill_random(x, rng);

    const int ohw = conv_out_hw(hw, 4, 2, 1);
    Probe probe(3, batch * ohw * ohw, rng);
    Conv2d<double>::Cache cache;
    Mat<double> y;

    SUBCASE("leaky relu") {
        auto forward = [&]() {
            conv.forward(x, hw, batch, y, cache);
            leaky_relu_forward(y, 0.2);
            return probe(y);
        };
        forward();
        conv.w.zero_grad();
        Mat<double> dy = probe.w;
        leaky_relu_backward(y, dy, 0.2);
        Mat<double> dx;
        conv.backward(cache, dy, &dx, true);
        check_grads(conv.w.val, conv.w.grad, forward, 1e-5);
        check_grads(x, dx, forward, 1e-5);
    }

    SUBCASE("sigmoid") {
        auto forward = [&]() {
            conv.forward(x, hw, batch, y, cache);
            sigmoid_forward(y);
            return probe(y);
        };
        forward();
        conv.w.zero_grad();
        Mat<double> dy = probe.w;
        sigmoid_backward(y, dy);
        Mat<double> dx;
        conv.backward(cache, dy, &dx, true);
        check_grads(conv.w.val, conv.w.grad, forward, 1e-5);
        check_grads(x, dx, forward, 1e-5);
    }

    SUBCASE("relu") {
        auto forward = [&]() {
            conv.forward(x, hw, batch, y, cache);
            relu_forward(y);
            return probe(y);
        };
        forward();
        conv.w.zero_grad();
        Mat<double> dy = probe.w;
        relu_backward(y, dy);
        Mat<double> dx;
        conv.backward(cache, dy, &dx, true);
        check_grads(conv.w.val, conv.w.grad, forward, 1e-5);
        check_grads(x, dx, forward, 1e-5);
    }
}

TEST_CASE("rmsprop follows the update rule") {
    ParamRegistry<double> reg;
    Param<double> p;
    p.init(1, 2);
    p.val.v = {1.0, -2.0};
    reg.add("p", p);
    RmsProp<double> opt(reg, 0.99, 1e-5);

    p.grad.v = {0.5, -1.0};
    opt.step(0.1);
    // sq = 0.01 * g^2; p -= lr * g / (sqrt(sq) + eps)
    const double sq0 = 0.01 * 0.25, sq1 = 0.01 * 1.0;
    CHECK(p.val.v[0] ==
          doctest::Approx(1.0 - 0.1 * 0.5 / (std::sqrt(sq0) + 1e-5)).epsilon(1e-12));
    CHECK(p.val.v[1] ==
          doctest::Approx(-2.0 + 0.1 * 1.0 / (std::sqrt(sq1) + 1e-5)).epsilon(1e-12));

    const double v0 = p.val.v[0];
    p.grad.v = {0.25, 0.0};
    opt.step(0.1);
    const double sq0b = 0.99 * sq0 + 0.01 * 0.0625;
    CHECK(p.val.v[0] ==
          doctest::Approx(v0 - 0.1 * 0.25 / (std::sqrt(sq0b) + 1e-5)).epsilon(1e-12));
}

TEST_CASE("rng streams are deterministic and serializable") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; i++) CHECK(a.next_u64() == b.next_u64());

    const std::string state = a.serialize();
    std::vector<double> expect;
    for (int i = 0; i < 10; i++) expect.push_back(a.normal());
    Rng c;
    c.deserialize(state);
    for (int i = 0; i < 10; i++) CHECK(c.normal() == expect[i]);

    CHECK(Rng::derive(1, 0).next_u64() != Rng::derive(1, 1).next_u64());
    CHECK(Rng::derive(1, 7).next_u64() == Rng::derive(1, 7).next_u64());
}
