#pragma once

#include <cmath>
#include <stdexcept>

#include "acd/core/mat.hpp"

namespace acd {

/// Column-wise softmax of logits [A, B] into probabilities and log
/// probabilities, shifted by the column max for stability.
template <typename T>
void softmax_columns(const Mat<T>& logits, Mat<T>& probs, Mat<T>& logps) {
    const int a = logits.rows, b = logits.cols;
    probs.ensure(a, b);
    logps.ensure(a, b);
    for (int col = 0; col < b; col++) {
        T max_logit = logits(0, col);
        bool finite = true;
        for (int r = 0; r < a; r++) {
            finite = finite && std::isfinite(static_cast<double>(logits(r, col)));
            max_logit = std::max(max_logit, logits(r, col));
        }
        if (!finite) throw std::invalid_argument("softmax: non-finite logits");
        T z = 0;
        for (int r = 0; r < a; r++) z += std::exp(logits(r, col) - max_logit);
        const T log_z = std::log(z);
        for (int r = 0; r < a; r++) {
            const T shifted = logits(r, col) - max_logit;
            logps(r, col) = shifted - log_z;
            probs(r, col) = std::exp(shifted - log_z);
        }
    }
}

/// Entropy of the categorical distribution in column `col`.
template <typename T>
T column_entropy(const Mat<T>& probs, const Mat<T>& logps, int col) {
    T h = 0;
    for (int r = 0; r < probs.rows; r++) h -= probs(r, col) * logps(r, col);
    return h;
}

}  // namespace acd
