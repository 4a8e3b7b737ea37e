#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

namespace kaonbell {

using complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using Vector2c = Eigen::Vector2cd;
using Vector4c = Eigen::Vector4cd;

namespace linalg {

inline constexpr double kHermitianTolerance = 1e-10;

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol = kHermitianTolerance) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

template <typename Derived>
bool is_projector(const Eigen::MatrixBase<Derived>& m, double tol = kHermitianTolerance) {
    return is_hermitian(m, tol) && (m * m - m).cwiseAbs().maxCoeff() <= tol;
}

/// Sum of |m_ij|^2, i.e. Tr(m m^dagger); equals Tr(m^2) for Hermitian m.
template <typename Derived>
double hs_norm2(const Eigen::MatrixBase<Derived>& m) {
    return m.squaredNorm();
}

inline Matrix4c kron(const Matrix2c& a, const Matrix2c& b) {
    Matrix4c out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

// Two-qubit index convention: row (2*left + right).
inline Matrix2c trace_right(const Matrix4c& m) {
    Matrix2c out = Matrix2c::Zero();
    for (int n = 0; n < 2; ++n)
        for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l) out(n, k) += m(2 * n + l, 2 * k + l);
    return out;
}

inline Matrix2c trace_left(const Matrix4c& m) {
    Matrix2c out = Matrix2c::Zero();
    for (int l = 0; l < 2; ++l)
        for (int k = 0; k < 2; ++k)
            for (int n = 0; n < 2; ++n) out(l, k) += m(2 * n + l, 2 * n + k);
    return out;
}

/// Transpose of the right factor.
inline Matrix4c partial_transpose_right(const Matrix4c& m) {
    Matrix4c out;
    for (int n = 0; n < 2; ++n)
        for (int l = 0; l < 2; ++l)
            for (int k = 0; k < 2; ++k)
                for (int j = 0; j < 2; ++j) out(2 * n + l, 2 * k + j) = m(2 * n + j, 2 * k + l);
    return out;
}

template <int N>
double min_eigenvalue(const Eigen::Matrix<complex, N, N>& m) {
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix<complex, N, N>> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

/// Square root of a Hermitian PSD matrix; eigenvalues below zero are clamped.
template <int N>
Eigen::Matrix<complex, N, N> psd_sqrt(const Eigen::Matrix<complex, N, N>& m) {
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix<complex, N, N>> es(m);
    const Eigen::Matrix<complex, N, 1> roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().template cast<complex>();
    return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace linalg
} // namespace kaonbell
