#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>

namespace acd {

template <typename T>
struct PpoCoeffs {
    T clip_eps;
    T c1;   // policy
    T c2;   // entropy
    T c_v;  // value
};

template <typename T>
struct PpoLossTerms {
    T total = 0;
    T policy = 0;
    T value = 0;
    T entropy = 0;
};

namespace detail {
template <typename T>
void require_finite(std::span<const T> xs, const char* what) {
    for (const T x : xs) {
        if (!std::isfinite(static_cast<double>(x)))
            throw std::invalid_argument(std::string("ppo_loss: non-finite ") + what);
    }
}
}  // namespace detail

/// Clipped-surrogate PPO loss. Advantages are constants here: no gradient
/// flows through them. total = c1*policy + c_v*value - c2*entropy with
///   policy  = -mean(min(r*A, clip(r, 1-eps, 1+eps)*A)),  r = exp(lp - lp_old)
///   value   = mean((v - returns)^2)
///   entropy = mean(entropy)
template <typename T>
PpoLossTerms<T> ppo_loss(std::span<const T> logp_new, std::span<const T> logp_old,
                         std::span<const T> entropy, std::span<const T> advantages,
                         std::span<const T> values_pred, std::span<const T> returns,
                         const PpoCoeffs<T>& cfg) {
    const size_t n = logp_new.size();
    if (logp_old.size() != n || entropy.size() != n || advantages.size() != n ||
        values_pred.size() != n || returns.size() != n)
        throw std::invalid_argument("ppo_loss: size mismatch");
    if (n == 0) throw std::invalid_argument("ppo_loss: empty batch");
    detail::require_finite(logp_new, "logp_new");
    detail::require_finite(logp_old, "logp_old");
    detail::require_finite(entropy, "entropy");
    detail::require_finite(advantages, "advantages");
    detail::require_finite(values_pred, "values_pred");
    detail::require_finite(returns, "returns");

    PpoLossTerms<T> out;
    for (size_t i = 0; i < n; i++) {
        const T ratio = std::exp(logp_new[i] - logp_old[i]);
        const T clipped = std::clamp(ratio, T(1) - cfg.clip_eps, T(1) + cfg.clip_eps);
        out.policy -= std::min(ratio * advantages[i], clipped * advantages[i]);
        const T verr = values_pred[i] - returns[i];
        out.value += verr * verr;
        out.entropy += entropy[i];
    }
    out.policy /= static_cast<T>(n);
    out.value /= static_cast<T>(n);
    out.entropy /= static_cast<T>(n);
    out.total = cfg.c1 * out.policy + cfg.c_v * out.value - cfg.c2 * out.entropy;
    return out;
}

/// Gradients of the total PPO loss w.r.t. per-sample logp_new, value
/// prediction and entropy. The caller chains these into logits.
template <typename T>
void ppo_loss_grads(std::span<const T> logp_new, std::span<const T> logp_old,
                    std::span<const T> advantages, std::span<const T> values_pred,
                    std::span<const T> returns, const PpoCoeffs<T>& cfg,
                    std::span<T> dlogp, std::span<T> dvalue, std::span<T> dentropy) {
    const size_t n = logp_new.size();
    const T inv_n = T(1) / static_cast<T>(n);
    for (size_t i = 0; i < n; i++) {
        const T ratio = std::exp(logp_new[i] - logp_old[i]);
        const T clipped = std::clamp(ratio, T(1) - cfg.clip_eps, T(1) + cfg.clip_eps);
        const T surr_unclipped = ratio * advantages[i];
        const T surr_clipped = clipped * advantages[i];
        // min() picks the unclipped branch when it is <=; the clipped
        // branch has zero gradient outside the trust region.
        dlogp[i] = surr_unclipped <= surr_clipped
                       ? cfg.c1 * (-inv_n) * ratio * advantages[i]
                       : T(0);
        dvalue[i] = cfg.c_v * T(2) * (values_pred[i] - returns[i]) * inv_n;
        dentropy[i] = -cfg.c2 * inv_n;
    }
}

/// Chains per-sample dlogp/dentropy into logits of a categorical policy:
///   dlogits[k,j] = dlogp[j]*(1[k==a_j] - p[k,j]) + dentropy[j]*dH/dlogits[k,j]
/// with dH/dz_k = -p_k (log p_k + H).
template <typename T, typename MatT>
void chain_policy_gradients(const MatT& probs, const MatT& logps,
                            std::span<const int> actions, std::span<const T> dlogp,
                            std::span<const T> dentropy, MatT& dlogits) {
    const int n_actions = probs.rows;
    const int batch = probs.cols;
    dlogits.ensure(n_actions, batch);
    for (int j = 0; j < batch; j++) {
        T h = 0;
        for (int k = 0; k < n_actions; k++) h -= probs(k, j) * logps(k, j);
        for (int k = 0; k < n_actions; k++) {
            const T p = probs(k, j);
            const T onehot = k == actions[j] ? T(1) : T(0);
            const T dh = -p * (logps(k, j) + h);
            dlogits(k, j) = dlogp[j] * (onehot - p) + dentropy[j] * dh;
        }
    }
}

/// Relativistic average least-squares discriminator loss:
///   L_D = mean_real (D(x) - mean_fake - 1)^2 + mean_fake (D(z) - mean_real + 1)^2
template <typename T>
T ralsgan_d_loss(std::span<const T> real, std::span<const T> fake) {
    if (real.empty() || fake.empty())
        throw std::invalid_argument("ralsgan_d_loss: empty batch");
    T mean_real = 0, mean_fake = 0;
    for (const T r : real) mean_real += r;
    for (const T f : fake) mean_fake += f;
    mean_real /= static_cast<T>(real.size());
    mean_fake /= static_cast<T>(fake.size());
    T real_term = 0, fake_term = 0;
    for (const T r : real) {
        const T d = r - mean_fake - T(1);
        real_term += d * d;
    }
    for (const T f : fake) {
        const T d = f - mean_real + T(1);
        fake_term += d * d;
    }
    return real_term / static_cast<T>(real.size()) +
           fake_term / static_cast<T>(fake.size());
}

/// Generator side of the same relativistic-average formulation:
///   L_G = mean_fake (D(z) - mean_real - 1)^2 + mean_real (D(x) - mean_fake + 1)^2
template <typename T>
T ralsgan_g_loss(std::span<const T> real, std::span<const T> fake) {
    if (real.empty() || fake.empty())
        throw std::invalid_argument("ralsgan_g_loss: empty batch");
    T mean_real = 0, mean_fake = 0;
    for (const T r : real) mean_real += r;
    for (const T f : fake) mean_fake += f;
    mean_real /= static_cast<T>(real.size());
    mean_fake /= static_cast<T>(fake.size());
    T fake_term = 0, real_term = 0;
    for (const T f : fake) {
        const T d = f - mean_real - T(1);
        fake_term += d * d;
    }
    for (const T r : real) {
        const T d = r - mean_fake + T(1);
        real_term += d * d;
    }
    return fake_term / static_cast<T>(fake.size()) +
           real_term / static_cast<T>(real.size());
}

// The relativistic means couple the two score sets, so each gradient has
// a direct term plus a cross term through the opposite mean.

template <typename T>
void ralsgan_d_grads(std::span<const T> real, std::span<const T> fake,
                     std::span<T> dreal, std::span<T> dfake) {
    const T nr = static_cast<T>(real.size()), nf = static_cast<T>(fake.size());
    T mean_real = 0, mean_fake = 0;
    for (const T r : real) mean_real += r;
    for (const T f : fake) mean_fake += f;
    mean_real /= nr;
    mean_fake /= nf;
    for (size_t i = 0; i < real.size(); i++) {
        dreal[i] = (T(2) / nr) *
                   ((real[i] - mean_fake - T(1)) - (mean_fake - mean_real + T(1)));
    }
    for (size_t j = 0; j < fake.size(); j++) {
        dfake[j] = (T(2) / nf) *
                   ((fake[j] - mean_real + T(1)) - (mean_real - mean_fake - T(1)));
    }
}

template <typename T>
void ralsgan_g_grads(std::span<const T> real, std::span<const T> fake,
                     std::span<T> dreal, std::span<T> dfake) {
    const T nr = static_cast<T>(real.size()), nf = static_cast<T>(fake.size());
    T mean_real = 0, mean_fake = 0;
    for (const T r : real) mean_real += r;
    for (const T f : fake) mean_fake += f;
    mean_real /= nr;
    mean_fake /= nf;
    for (size_t i = 0; i < real.size(); i++) {
        dreal[i] = (T(2) / nr) *
                   ((real[i] - mean_fake + T(1)) - (mean_fake - mean_real - T(1)));
    }
    for (size_t j = 0; j < fake.size(); j++) {
        dfake[j] = (T(2) / nf) *
                   ((fake[j] - mean_real - T(1)) - (mean_real - mean_fake + T(1)));
    }
}

}  // namespace acd
