#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace sgl {

// Tiny fixed-size helpers for the per-node 1x1 / 2x2 matrix work. Row-major
// storage m[r*dim + c]; only the leading dim*dim block is used.

using Mat2 = std::array<double, 4>;
using CMat2 = std::array<std::complex<double>, 4>;

/// Eigenvalues of a symmetric matrix via the closed quadratic formula.
inline std::pair<double, double> sym_eigenvalues(const Mat2& m, int dim) {
    if (dim == 1) return {m[0], m[0]};
    double tr = m[0] + m[3];
    double diff = m[0] - m[3];
    double disc = std::sqrt(diff * diff / 4.0 + m[1] * m[1]);
    return {tr / 2.0 - disc, tr / 2.0 + disc};
}

/// Inverse square root of a symmetric positive definite matrix.
inline Mat2 spd_inv_sqrt(const Mat2& m, int dim) {
    if (dim == 1) return {1.0 / std::sqrt(m[0]), 0, 0, 0};
    // Closed-form 2x2 eigen-decomposition.
    auto [l1, l2] = sym_eigenvalues(m, 2);
    double c, s; // eigenvector (c,s) for l2 (the larger root)
    if (std::abs(m[1]) > 1e-300) {
        double vx = l2 - m[3], vy = m[1];
        double nrm = std::hypot(vx, vy);
        c = vx / nrm;
        s = vy / nrm;
    } else {
        bool first_larger = m[0] >= m[3];
        c = first_larger ? 1.0 : 0.0;
        s = first_larger ? 0.0 : 1.0;
        if (!first_larger) std::swap(l1, l2);
        // after swap: l2 belongs to (c,s) = (0,1)
    }
    double a = 1.0 / std::sqrt(l2), b = 1.0 / std::sqrt(l1);
    // V diag(a,b) V^T with V = [[c,-s],[s,c]]
    return {c * c * a + s * s * b, c * s * (a - b), c * s * (a - b), s * s * a + c * c * b};
}

inline Mat2 mul(const Mat2& A, const Mat2& B, int dim) {
    if (dim == 1) return {A[0] * B[0], 0, 0, 0};
    return {A[0] * B[0] + A[1] * B[2], A[0] * B[1] + A[1] * B[3],
            A[2] * B[0] + A[3] * B[2], A[2] * B[1] + A[3] * B[3]};
}

/// Largest singular value (operator 2-norm) of a real matrix.
inline double real_op_norm(const Mat2& m, int dim) {
    if (dim == 1) return std::abs(m[0]);
    // sqrt of largest eigenvalue of m^T m
    Mat2 mtm = {m[0] * m[0] + m[2] * m[2], m[0] * m[1] + m[2] * m[3],
                m[1] * m[0] + m[3] * m[2], m[1] * m[1] + m[3] * m[3]};
    auto [l1, l2] = sym_eigenvalues(mtm, 2);
    (void)l1;
    return std::sqrt(std::max(0.0, l2));
}

/// Operator 2-norm of a complex matrix (largest singular value).
inline double cplx_op_norm(const CMat2& m, int dim) {
    if (dim == 1) return std::abs(m[0]);
    // m^H m is Hermitian 2x2; closed-form eigenvalues.
    auto conj = [](std::complex<double> z) { return std::conj(z); };
    std::complex<double> a = conj(m[0]) * m[0] + conj(m[2]) * m[2];
    std::complex<double> b = conj(m[0]) * m[1] + conj(m[2]) * m[3];
    std::complex<double> d = conj(m[1]) * m[1] + conj(m[3]) * m[3];
    double tr = a.real() + d.real();
    double diff = a.real() - d.real();
    double disc = std::sqrt(diff * diff / 4.0 + std::norm(b));
    return std::sqrt(std::max(0.0, tr / 2.0 + disc));
}

inline std::array<double, 2> apply_real(const Mat2& m, const std::array<double, 2>& v, int dim) {
    if (dim == 1) return {m[0] * v[0], 0.0};
    return {m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1]};
}

inline double dot2(const std::array<double, 2>& a, const std::array<double, 2>& b, int dim) {
    return dim == 1 ? a[0] * b[0] : a[0] * b[0] + a[1] * b[1];
}

/// Solve S z = rhs for symmetric positive definite S.
inline std::array<double, 2> spd_solve(const Mat2& S, const std::array<double, 2>& rhs, int dim) {
    if (dim == 1) return {rhs[0] / S[0], 0.0};
    double det = S[0] * S[3] - S[1] * S[2];
    return {(S[3] * rhs[0] - S[1] * rhs[1]) / det, (S[0] * rhs[1] - S[2] * rhs[0]) / det};
}

inline std::array<std::complex<double>, 2> spd_solve(const Mat2& S,
                                                     const std::array<std::complex<double>, 2>& rhs,
                                                     int dim) {
    if (dim == 1) return {rhs[0] / S[0], {0.0, 0.0}};
    double det = S[0] * S[3] - S[1] * S[2];
    return {(S[3] * rhs[0] - S[1] * rhs[1]) / det, (S[0] * rhs[1] - S[2] * rhs[0]) / det};
}

} // namespace sgl
