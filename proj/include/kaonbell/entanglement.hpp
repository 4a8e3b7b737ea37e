#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include "kaonbell/bipartite.hpp"
#include "kaonbell/errors.hpp"
#include "kaonbell/linalg.hpp"

namespace kaonbell {

struct ConcurrenceResult {
    double value = 0.0;
    /// Square roots of the eigenvalues of rho * rho_flipped, descending.
    std::array<double, 4> lambdas{};
};

// Eigenvalues below this fraction of the largest are treated as rounding noise.
inline constexpr double kRankTolerance = 1e-14;

inline Matrix4c spin_flip_operator() {
    Matrix2c sy;
    sy << 0.0, complex(0.0, -1.0), complex(0.0, 1.0), 0.0;
    return linalg::kron(sy, sy);
}

/// (sigma_y x sigma_y) rho^* (sigma_y x sigma_y), conjugation in the mass basis.
inline Matrix4c spin_flip(const Matrix4c& rho) {
    const Matrix4c yy = spin_flip_operator();
    return yy * rho.conjugate() * yy;
}

/// Wootters concurrence of a (possibly unnormalized) two-qubit block.
///
/// Homogeneous of degree one: a block with trace s < 1 yields s times the
/// concurrence of the normalized state. With rho = A A^dagger the spectrum of
/// rho * rho_flipped equals that of tau^dagger tau, tau = A^T Y A, so the
/// lambdas are the singular values of tau. This avoids square roots of
/// eigenvalues that are zero up to rounding (rank-deficient blocks).
inline ConcurrenceResult wootters_concurrence(const Matrix4c& block) {
    if (!linalg::is_hermitian(block)) throw DomainError("concurrence requires a Hermitian block");
    const Eigen::SelfAdjointEigenSolver<Matrix4c> es(0.5 * (block + block.adjoint()));
    const auto& d = es.eigenvalues();
    const double floor = kRankTolerance * std::max(d.cwiseAbs().maxCoeff(), 0.0);

    Eigen::Matrix<complex, 4, Eigen::Dynamic> factor(4, 0);
    for (int i = 0; i < 4; ++i) {
        if (d(i) <= floor) continue;
        factor.conservativeResize(Eigen::NoChange, factor.cols() + 1);
        factor.col(factor.cols() - 1) = es.eigenvectors().col(i) * std::sqrt(d(i));
    }

    ConcurrenceResult out;
    if (factor.cols() > 0) {
        const Eigen::MatrixXcd tau = factor.transpose() * spin_flip_operator() * factor;
        const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(tau);
        for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
            out.lambdas[static_cast<std::size_t>(i)] = svd.singularValues()(i);
    }
    std::sort(out.lambdas.begin(), out.lambdas.end(), std::greater<>());
    out.value = std::max(0.0, out.lambdas[0] - out.lambdas[1] - out.lambdas[2] - out.lambdas[3]);
    return out;
}

/// Concurrence of the block rescaled to unit trace; zero for an empty block.
inline double normalized_concurrence(const Matrix4c& block) {
    const double tr = block.trace().real();
    if (tr <= 0.0) return 0.0;
    return wootters_concurrence(block / tr).value;
}

/// 2 |r1 r4 e^{i(phi1+phi4)} - r2 r3 e^{i(phi2+phi3)}| e^{-Gamma (t_l + t_r)}.
inline double concurrence_closed_form(const PureTwoKaonState& s, double t_l, double t_r, const MesonParameters& p) {
    detail::require_time(t_l);
    detail::require_time(t_r);
    const complex a = std::polar(s.r[0] * s.r[3], s.phi[0] + s.phi[3]);
    const complex b = std::polar(s.r[1] * s.r[2], s.phi[1] + s.phi[2]);
    return 2.0 * std::abs(a - b) * std::exp(-p.gamma_mean() * (t_l + t_r));
}

/// Two-qubit entanglement of formation as a function of concurrence.
inline double eof_from_concurrence(double c) {
    if (!(c >= 0.0 && c <= 1.0)) throw DomainError("concurrence must lie in [0, 1]");
    const double x = 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c)));
    const auto plogp = [](double q) { return q > 0.0 ? -q * std::log2(q) : 0.0; };
    return plogp(x) + plogp(1.0 - x);
}

/// Smallest eigenvalue of the partially transposed state, block by block.
/// Negative means entangled; only the surviving-surviving block can go negative.
inline double ppt_min_eigenvalue(const BipartiteEvolvedState& s) {
    double lowest = linalg::min_eigenvalue<4>(linalg::partial_transpose_right(s.ssss));
    for (const Matrix4c* block : {&s.ssff, &s.ffss, &s.ffff})
        lowest = std::min(lowest, linalg::min_eigenvalue<4>(linalg::partial_transpose_right(*block)));
    return lowest;
}

} // namespace kaonbell
