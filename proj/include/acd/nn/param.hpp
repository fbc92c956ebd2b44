#pragma once

#include <string>
#include <utility>
#include <vector>

#include "acd/core/mat.hpp"

namespace acd {

template <typename T>
struct Param {
    Mat<T> val;
    Mat<T> grad;

    void init(int r, int c) {
        val.resize(r, c);
        grad.resize(r, c);
    }
    void zero_grad() { grad.zero(); }
};

/// Named views over a model's parameters and persistent state buffers
/// (batch-norm running statistics). Checkpointing and the optimizer walk
/// this list; order is the registration order and is part of the format.
template <typename T>
struct ParamRegistry {
    std::vector<std::pair<std::string, Param<T>*>> params;
    std::vector<std::pair<std::string, Mat<T>*>> state;

    void add(const std::string& name, Param<T>& p) { params.emplace_back(name, &p); }
    void add_state(const std::string& name, Mat<T>& m) { state.emplace_back(name, &m); }

    void zero_grad() {
        for (auto& [name, p] : params) p->zero_grad();
    }
    size_t param_count() const {
        size_t n = 0;
        for (auto& [name, p] : params) n += p->val.size();
        return n;
    }
};

}  // namespace acd
