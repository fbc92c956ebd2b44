#pragma once

#include <cmath>
#include <vector>

#include "acd/core/mat.hpp"
#include "acd/nn/param.hpp"

namespace acd {

/// RMSProp with smoothing 0.99 and epsilon 1e-5. One instance owns the
/// squared-gradient accumulators for every parameter in a registry;
/// accumulators are checkpointed alongside the parameters.
template <typename T>
class RmsProp {
public:
    RmsProp() = default;
    explicit RmsProp(ParamRegistry<T>& reg, T alpha = T(0.99), T eps = T(1e-5))
        : reg_(&reg), alpha_(alpha), eps_(eps) {
        sq_.resize(reg.params.size());
        for (size_t i = 0; i < reg.params.size(); i++) {
            const Mat<T>& val = reg.params[i].second->val;
            sq_[i].resize(val.rows, val.cols);
        }
    }

    void step(T lr) {
        for (size_t i = 0; i < reg_->params.size(); i++) {
            Param<T>& p = *reg_->params[i].second;
            T* sq = sq_[i].data();
            T* w = p.val.data();
            const T* g = p.grad.data();
            const size_t n = p.val.size();
            for (size_t j = 0; j < n; j++) {
                sq[j] = alpha_ * sq[j] + (T(1) - alpha_) * g[j] * g[j];
                w[j] -= lr * g[j] / (std::sqrt(sq[j]) + eps_);
            }
        }
    }

    std::vector<Mat<T>>& accumulators() { return sq_; }
    const ParamRegistry<T>& registry() const { return *reg_; }

private:
    ParamRegistry<T>* reg_ = nullptr;
    T alpha_ = T(0.99);
    T eps_ = T(1e-5);
    std::vector<Mat<T>> sq_;
};

}  // namespace acd
