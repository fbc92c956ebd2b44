#pragma once

#include <cblas.h>

#include "acd/core/mat.hpp"

namespace acd {

// C = alpha * op(A) * op(B) + beta * C, row-major. Thin dispatch so the
// layer code can stay scalar-generic (float in training, double in the
// finite-difference tests).
inline void gemm(bool trans_a, bool trans_b, int m, int n, int k, float alpha,
                 const float* a, int lda, const float* b, int ldb, float beta,
                 float* c, int ldc) {
    cblas_sgemm(CblasRowMajor, trans_a ? CblasTrans : CblasNoTrans,
                trans_b ? CblasTrans : CblasNoTrans, m, n, k, alpha, a, lda, b,
                ldb, beta, c, ldc);
}

inline void gemm(bool trans_a, bool trans_b, int m, int n, int k, double alpha,
                 const double* a, int lda, const double* b, int ldb,
                 double beta, double* c, int ldc) {
    cblas_dgemm(CblasRowMajor, trans_a ? CblasTrans : CblasNoTrans,
                trans_b ? CblasTrans : CblasNoTrans, m, n, k, alpha, a, lda, b,
                ldb, beta, c, ldc);
}

// C = A * B with A [m,k], B [k,n], C [m,n], all unpacked row-major.
template <typename T>
void matmul(const Mat<T>& a, const Mat<T>& b, Mat<T>& c, bool trans_a = false,
            bool trans_b = false, T beta = T(0)) {
    const int m = trans_a ? a.cols : a.rows;
    const int k = trans_a ? a.rows : a.cols;
    const int n = trans_b ? b.rows : b.cols;
    assert((trans_b ? b.cols : b.rows) == k);
    c.ensure(m, n);
    gemm(trans_a, trans_b, m, n, k, T(1), a.data(), a.cols, b.data(), b.cols,
         beta, c.data(), c.cols);
}

}  // namespace acd
