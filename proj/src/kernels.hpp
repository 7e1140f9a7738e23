#pragma once

// Dense kernels used by the tape. Accumulation order over the contraction
// index is fixed per output element and does not depend on the number of
// rows, so batched and single-row evaluations agree bitwise.

namespace oplearn::kern {

// C = A * B (+= when accumulate), A m x k, B k x n, C m x n, all row-major.
inline void gemm_nn(const double* A, const double* B, double* C, long m, long n, long k,
                    bool accumulate = false) {
    for (long i = 0; i < m; ++i) {
        double* c = C + i * n;
        if (!accumulate)
            for (long j = 0; j < n; ++j) c[j] = 0.0;
        const double* a = A + i * k;
        for (long kk = 0; kk < k; ++kk) {
            const double av = a[kk];
            const double* b = B + kk * n;
            for (long j = 0; j < n; ++j) c[j] += av * b[j];
        }
    }
}

// C += A^T * B, A m x k, B m x n, C k x n. Row index is the contraction.
inline void gemm_tn_acc(const double* A, const double* B, double* C, long m, long n, long k) {
    for (long r = 0; r < m; ++r) {
        const double* a = A + r * k;
        const double* b = B + r * n;
        for (long i = 0; i < k; ++i) {
            const double av = a[i];
            double* c = C + i * n;
            for (long j = 0; j < n; ++j) c[j] += av * b[j];
        }
    }
}

// B = A^T, A m x n.
inline void transpose(const double* A, double* B, long m, long n) {
    for (long i = 0; i < m; ++i)
        for (long j = 0; j < n; ++j) B[j * m + i] = A[i * n + j];
}

inline double dot(const double* a, const double* b, long k) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    long i = 0;
    for (; i + 4 <= k; i += 4) {
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
    }
    double s = (s0 + s1) + (s2 + s3);
    for (; i < k; ++i) s += a[i] * b[i];
    return s;
}

} // namespace oplearn::kern
