#pragma once

// Reference computations used only by the tests. Nothing here calls the
// library's evolution, expectation or concurrence code; the kaon dynamics are
// rebuilt from Kraus operators on the 4-dimensional space H_s (+) H_f and the
// 16-dimensional two-kaon space.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <functional>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Mat4 = Eigen::Matrix<cplx, 4, 4>;
using Mat16 = Eigen::Matrix<cplx, 16, 16>;
using Vec4 = Eigen::Matrix<cplx, 4, 1>;

struct Rates {
    double gamma_S;
    double gamma_L;
    double delta_m;
};

// Basis of H_s (+) H_f: 0 = K_S, 1 = K_L, 2 = channel fed by K_L, 3 = channel fed by K_S.
inline std::array<Mat4, 3> kraus(double t, const Rates& r) {
    Mat4 k0 = Mat4::Zero();
    k0(0, 0) = std::exp(-0.5 * r.gamma_S * t);
    k0(1, 1) = std::exp(cplx(-0.5 * r.gamma_L * t, -r.delta_m * t));
    k0(2, 2) = 1.0;
    k0(3, 3) = 1.0;
    Mat4 k_s = Mat4::Zero();
    k_s(3, 0) = std::sqrt(1.0 - std::exp(-r.gamma_S * t));
    Mat4 k_l = Mat4::Zero();
    k_l(2, 1) = std::sqrt(1.0 - std::exp(-r.gamma_L * t));
    return {k0, k_s, k_l};
}

inline Mat4 evolve_single(const Eigen::Matrix2cd& rho_ss, double t, const Rates& r) {
    Mat4 rho = Mat4::Zero();
    rho.topLeftCorner<2, 2>() = rho_ss;
    Mat4 out = Mat4::Zero();
    for (const auto& k : kraus(t, r)) out += k * rho * k.adjoint();
    return out;
}

inline Mat16 kron4(const Mat4& a, const Mat4& b) {
    Mat16 m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m.block<4, 4>(4 * i, 4 * j) = a(i, j) * b;
    return m;
}

/// Amplitudes c_{SS}, c_{SL}, c_{LS}, c_{LL} embedded in the 16-dimensional space.
inline Mat16 evolve_pair(const Vec4& amp, double t_l, double t_r, const Rates& r) {
    Eigen::Matrix<cplx, 16, 1> v = Eigen::Matrix<cplx, 16, 1>::Zero();
    v(0) = amp(0);
    v(1) = amp(1);
    v(4) = amp(2);
    v(5) = amp(3);
    const Mat16 rho = v * v.adjoint();
    const auto kl = kraus(t_l, r);
    const auto kr = kraus(t_r, r);
    Mat16 out = Mat16::Zero();
    for (const auto& a : kl)
        for (const auto& b : kr) {
            const Mat16 k = kron4(a, b);
            out += k * rho * k.adjoint();
        }
    return out;
}

/// Surviving-surviving block with index 2 * left + right.
inline Mat4 surviving_block(const Mat16& rho) {
    Mat4 m;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) m(a, b) = rho(4 * (a / 2) + a % 2, 4 * (b / 2) + b % 2);
    return m;
}

/// Mass-basis projector onto alpha|K0> + beta|K0bar>, where
/// K0 = (K_S + K_L)/sqrt2 and K0bar = (K_L - K_S)/sqrt2.
inline Eigen::Matrix2cd quasispin_projector(cplx alpha, cplx beta) {
    const double s = std::numbers::sqrt2 / 2.0;
    Eigen::Vector2cd v((alpha - beta) * s, (alpha + beta) * s);
    return v * v.adjoint();
}

/// YES (+1) for the quasi-spin, NO (-1) otherwise, decays included in NO.
inline Mat4 yes_no_observable(const Eigen::Matrix2cd& projector) {
    Mat4 a = -Mat4::Identity();
    a.topLeftCorner<2, 2>() += 2.0 * projector;
    return a;
}

inline double expectation(const Vec4& amp, double t_l, double t_r, const Rates& r,
                          const Eigen::Matrix2cd& p_l, const Eigen::Matrix2cd& p_r) {
    const Mat16 rho = evolve_pair(amp, t_l, t_r, r);
    return (kron4(yes_no_observable(p_l), yes_no_observable(p_r)) * rho).trace().real();
}

inline Eigen::Matrix2cd antikaon_projector() { return quasispin_projector(0.0, 1.0); }

inline double chsh(const Vec4& amp, const std::array<double, 4>& t, const Rates& r) {
    const auto p = antikaon_projector();
    const auto e = [&](double a, double b) { return expectation(amp, a, b, r, p, p); };
    return std::abs(e(t[0], t[1]) - e(t[0], t[2])) + std::abs(e(t[3], t[1]) + e(t[3], t[2]));
}

/// Concurrence of the unnormalized pure vector (U x U) psi: 2 |a_SS a_LL - a_SL a_LS|.
inline double surviving_concurrence(const Vec4& amp, double t_l, double t_r, const Rates& r) {
    const auto ul = kraus(t_l, r)[0];
    const auto ur = kraus(t_r, r)[0];
    const cplx a = ul(0, 0) * ur(0, 0) * amp(0);
    const cplx b = ul(0, 0) * ur(1, 1) * amp(1);
    const cplx c = ul(1, 1) * ur(0, 0) * amp(2);
    const cplx d = ul(1, 1) * ur(1, 1) * amp(3);
    return 2.0 * std::abs(a * d - b * c);
}

/// Wootters' square-root form for full-rank two-qubit matrices: eigenvalues of
/// rho (sy x sy) rho* (sy x sy), square roots sorted descending.
inline double concurrence_full_rank(const Mat4& rho) {
    Mat4 yy = Mat4::Zero();
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;
    const Mat4 m = rho * yy * rho.conjugate() * yy;
    Eigen::ComplexEigenSolver<Mat4> es(m);
    std::array<double, 4> l{};
    for (int i = 0; i < 4; ++i) l[static_cast<std::size_t>(i)] = std::sqrt(std::max(0.0, es.eigenvalues()(i).real()));
    std::sort(l.begin(), l.end(), std::greater<>());
    return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

/// Explicit 4x4 Lindblad RK4 on H_s (+) H_f. With `single_jump` the two
/// decays share one jump operator, which builds up channel coherence.
inline Mat4 lindblad_rk4(const Eigen::Matrix2cd& rho_ss, double t, const Rates& r, double h,
                         bool single_jump = false) {
    Mat4 ham = Mat4::Zero();
    ham(1, 1) = r.delta_m;
    Mat4 ls = Mat4::Zero();
    ls(3, 0) = std::sqrt(r.gamma_S);
    Mat4 ll = Mat4::Zero();
    ll(2, 1) = std::sqrt(r.gamma_L);
    std::vector<Mat4> jumps;
    if (single_jump)
        jumps = {ls + ll};
    else
        jumps = {ls, ll};
    Mat4 sum = Mat4::Zero();
    for (const auto& l : jumps) sum += l.adjoint() * l;
    const cplx i(0.0, 1.0);
    const auto rhs = [&](const Mat4& rho) -> Mat4 {
        Mat4 d = -i * (ham * rho - rho * ham) - 0.5 * (sum * rho + rho * sum);
        for (const auto& l : jumps) d += l * rho * l.adjoint();
        return d;
    };
    Mat4 rho = Mat4::Zero();
    rho.topLeftCorner<2, 2>() = rho_ss;
    const long n = std::max(1L, static_cast<long>(std::ceil(t / h)));
    const double dt = t / static_cast<double>(n);
    for (long k = 0; k < n; ++k) {
        const Mat4 k1 = rhs(rho);
        const Mat4 k2 = rhs(rho + 0.5 * dt * k1);
        const Mat4 k3 = rhs(rho + 0.5 * dt * k2);
        const Mat4 k4 = rhs(rho + dt * k3);
        rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return rho;
}

// ----------------------------------------------------------------- sampling

inline double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double gaussian(std::mt19937_64& rng) {
    const double u1 = 1.0 - uniform(rng);
    const double u2 = uniform(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Haar-random normalized 4-vector.
inline Vec4 random_amplitudes(std::mt19937_64& rng) {
    Vec4 v;
    for (int i = 0; i < 4; ++i) v(i) = cplx(gaussian(rng), gaussian(rng));
    return v / v.norm();
}

/// Random density matrix of rank `rank` (1..4), Hilbert-Schmidt-like.
inline Mat4 random_density(std::mt19937_64& rng, int rank) {
    Eigen::Matrix<cplx, 4, Eigen::Dynamic> g(4, rank);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < rank; ++j) g(i, j) = cplx(gaussian(rng), gaussian(rng));
    Mat4 rho = g * g.adjoint();
    return rho / rho.trace().real();
}

inline double purity(const Mat4& rho) { return (rho * rho).trace().real(); }

} // namespace oracle
