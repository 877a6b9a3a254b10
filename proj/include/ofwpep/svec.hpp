#pragma once

#include "ofwpep/core.hpp"

namespace ofwpep {

// Scaled half-vectorization of symmetric matrices. Off-diagonal entries are
// multiplied by sqrt(2) so that <svec(A), svec(B)> = tr(A B). Ordering is
// column-major over the lower triangle: (0,0), (1,0), ..., (n-1,0), (1,1), ...

inline int svec_len(int n) { return n * (n + 1) / 2; }

inline constexpr double kSqrt2 = 1.4142135623730951;

inline void check_symmetric(const Mat& M, double tol = 1e-12) {
    if (M.rows() != M.cols())
        throw std::invalid_argument("svec: matrix is not square");
    double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    for (int j = 0; j < M.cols(); ++j)
        for (int i = j + 1; i < M.rows(); ++i)
            if (std::abs(M(i, j) - M(j, i)) > tol * scale)
                throw std::invalid_argument("svec: matrix is not symmetric");
}

inline Vec svec(const Mat& M, bool validate = true) {
    if (validate) check_symmetric(M);
    const int n = static_cast<int>(M.rows());
    Vec v(svec_len(n));
    int k = 0;
    for (int j = 0; j < n; ++j) {
        v[k++] = M(j, j);
        for (int i = j + 1; i < n; ++i) v[k++] = kSqrt2 * 0.5 * (M(i, j) + M(j, i));
    }
    return v;
}

inline Mat smat(const Vec& v) {
    // invert n(n+1)/2 = len
    const int len = static_cast<int>(v.size());
    const int n = static_cast<int>((std::sqrt(8.0 * len + 1.0) - 1.0) / 2.0 + 0.5);
    if (svec_len(n) != len) throw std::invalid_argument("smat: invalid svec length");
    Mat M(n, n);
    int k = 0;
    for (int j = 0; j < n; ++j) {
        M(j, j) = v[k++];
        for (int i = j + 1; i < n; ++i) {
            double x = v[k++] / kSqrt2;
            M(i, j) = x;
            M(j, i) = x;
        }
    }
    return M;
}

/// Symmetric Kronecker product P (x)_s Q as a matrix acting on svec
/// coordinates: (P (x)_s Q) svec(M) = svec((P M Q' + Q M P')/2).
inline Mat sym_kron(const Mat& P, const Mat& Q) {
    const int n = static_cast<int>(P.rows());
    const int ns = svec_len(n);
    Mat K(ns, ns);
    // index map: (i>=j) -> position
    auto pos = [n](int i, int j) {  // requires i >= j
        return j * n - j * (j - 1) / 2 + (i - j);
    };
    for (int l = 0; l < n; ++l) {
        for (int k = l; k < n; ++k) {
            int col = pos(k, l);
            double ckl = (k == l) ? 1.0 : kSqrt2;
            for (int j = 0; j < n; ++j) {
                for (int i = j; i < n; ++i) {
                    int row = pos(i, j);
                    double cij = (i == j) ? 1.0 : kSqrt2;
                    // entry = (1/2) [ P_ik Q_jl + Q_ik P_jl + P_il Q_jk + Q_il P_jk ] / 2 * scale
                    double val = P(i, k) * Q(j, l) + Q(i, k) * P(j, l) +
                                 P(i, l) * Q(j, k) + Q(i, l) * P(j, k);
                    K(row, col) = 0.25 * cij * ckl * val;
                }
            }
        }
    }
    return K;
}

}  // namespace ofwpep
