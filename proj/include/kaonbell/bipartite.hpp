#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "kaonbell/errors.hpp"
#include "kaonbell/linalg.hpp"
#include "kaonbell/params.hpp"
#include "kaonbell/quasispin.hpp"
#include "kaonbell/single_kaon.hpp"

namespace kaonbell {

/// Pure two-kaon state sum_i r_i e^{i phi_i} |b_i> with
/// b = (K_S K_S, K_S K_L, K_L K_S, K_L K_L), left factor first.
struct PureTwoKaonState {
    std::array<double, 4> r{1.0, 0.0, 0.0, 0.0};
    std::array<double, 4> phi{0.0, 0.0, 0.0, 0.0};

    [[nodiscard]] Vector4c amplitudes() const {
        Vector4c v;
        for (int i = 0; i < 4; ++i) v(i) = std::polar(r[i], phi[i]);
        return v;
    }

    [[nodiscard]] Matrix4c density() const {
        const Vector4c v = amplitudes();
        return v * v.adjoint();
    }

    [[nodiscard]] double norm2() const { return r[0] * r[0] + r[1] * r[1] + r[2] * r[2] + r[3] * r[3]; }

    /// Global phase removed so that phi_4 = 0.
    [[nodiscard]] PureTwoKaonState gauge_fixed() const {
        PureTwoKaonState s = *this;
        for (double& x : s.phi) x -= phi[3];
        return s;
    }

    /// Rescales the amplitudes to unit norm. Throws on a zero vector.
    [[nodiscard]] PureTwoKaonState normalized() const;

    /// Swap of the two particles (left <-> right).
    [[nodiscard]] PureTwoKaonState swapped() const {
        return {{r[0], r[2], r[1], r[3]}, {phi[0], phi[2], phi[1], phi[3]}};
    }
};

inline constexpr double kStateNormTolerance = 1e-12;

inline void validate(const PureTwoKaonState& s) {
    for (int i = 0; i < 4; ++i)
        if (!std::isfinite(s.r[i]) || !std::isfinite(s.phi[i])) throw DomainError("state must be finite");
    if (std::abs(s.norm2() - 1.0) > kStateNormTolerance) throw DomainError("state amplitudes must have unit norm");
}

inline PureTwoKaonState PureTwoKaonState::normalized() const {
    const double n = std::sqrt(norm2());
    if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("cannot normalize a zero state");
    PureTwoKaonState s = *this;
    for (double& x : s.r) x /= n;
    return s;
}

/// Bell states in the mass basis: phi+-, psi+-.
inline PureTwoKaonState bell_state(std::string_view name) {
    const double s = std::numbers::sqrt2 / 2.0;
    const double pi = std::numbers::pi;
    if (name == "phi+") return {{s, 0.0, 0.0, s}, {0.0, 0.0, 0.0, 0.0}};
    if (name == "phi-") return {{s, 0.0, 0.0, s}, {pi, 0.0, 0.0, 0.0}};
    if (name == "psi+") return {{0.0, s, s, 0.0}, {0.0, 0.0, 0.0, 0.0}};
    if (name == "psi-") return {{0.0, s, s, 0.0}, {0.0, 0.0, pi, 0.0}};
    throw ConfigurationError("unknown Bell state '" + std::string(name) + "'");
}

/// Best strangeness-CHSH states with vanishing (xi) and free (chi) phases,
/// renormalized from their four-digit amplitudes.
inline PureTwoKaonState xi_state() {
    return PureTwoKaonState{{-0.8335, -0.2446, -0.2446, 0.4308}, {0.0, 0.0, 0.0, 0.0}}.normalized();
}

inline PureTwoKaonState chi_state() {
    return PureTwoKaonState{{-0.7823, 0.1460, 0.1460, 0.5877}, {-0.2751, -0.6784, -0.6784, 0.0}}.normalized();
}

/// Bell states plus "xi" and "chi".
inline PureTwoKaonState named_state(std::string_view name) {
    if (name == "xi") return xi_state();
    if (name == "chi") return chi_state();
    return bell_state(name);
}

/// Two-time state sigma(t_l, t_r) on (H_s (+) H_f) x (H_s (+) H_f).
///
/// Only the four diagonal blocks are stored; surviving/final cross blocks are
/// never measurable and set to zero. Index convention inside every block is
/// (2 * left + right). Surviving indices are {K_S, K_L}; final-channel indices
/// are {from K_L, from K_S}, matching EvolvedSingleState.
struct BipartiteEvolvedState {
    Matrix4c ssss = Matrix4c::Zero();
    Matrix4c ssff = Matrix4c::Zero();
    Matrix4c ffss = Matrix4c::Zero();
    Matrix4c ffff = Matrix4c::Zero();
    double t_l = 0.0;
    double t_r = 0.0;

    [[nodiscard]] double total_trace() const {
        return (ssss.trace() + ssff.trace() + ffss.trace() + ffff.trace()).real();
    }

    /// Surviving block of the left kaon with the right kaon traced out
    /// (surviving or decayed).
    [[nodiscard]] Matrix2c left_surviving() const { return linalg::trace_right(ssss) + linalg::trace_right(ssff); }
    [[nodiscard]] Matrix2c right_surviving() const { return linalg::trace_left(ssss) + linalg::trace_left(ffss); }
};

namespace detail {

// Final channel j is fed by mass eigenstate (1 - j): channel 0 <- K_L, channel 1 <- K_S.
inline constexpr int source_of_channel(int j) { return 1 - j; }

} // namespace detail

/// Evolves |psi0><psi0| with factorized single-kaon weights.
inline BipartiteEvolvedState evolve_bipartite(const PureTwoKaonState& psi0, double t_l, double t_r,
                                              const MesonParameters& p) {
    detail::require_time(t_l);
    detail::require_time(t_r);
    validate(psi0);

    const Matrix4c s0 = psi0.density();
    BipartiteEvolvedState out;
    out.t_l = t_l;
    out.t_r = t_r;

    std::array<std::array<complex, 2>, 2> wl{}, wr{};
    std::array<double, 2> gl{}, gr{};
    for (int n = 0; n < 2; ++n) {
        for (int m = 0; m < 2; ++m) {
            wl[n][m] = surviving_weight(n, m, t_l, p);
            wr[n][m] = surviving_weight(n, m, t_r, p);
        }
    }
    for (int j = 0; j < 2; ++j) {
        gl[j] = decayed_weight(detail::source_of_channel(j), t_l, p);
        gr[j] = decayed_weight(detail::source_of_channel(j), t_r, p);
    }

    for (int n = 0; n < 2; ++n)
        for (int l = 0; l < 2; ++l)
            for (int m = 0; m < 2; ++m)
                for (int k = 0; k < 2; ++k)
                    out.ssss(2 * n + l, 2 * m + k) = s0(2 * n + l, 2 * m + k) * wl[n][m] * wr[l][k];

    for (int j = 0; j < 2; ++j) {
        const int src = detail::source_of_channel(j);
        for (int n = 0; n < 2; ++n)
            for (int m = 0; m < 2; ++m) {
                out.ssff(2 * n + j, 2 * m + j) = s0(2 * n + src, 2 * m + src) * wl[n][m] * gr[j];
                out.ffss(2 * j + n, 2 * j + m) = s0(2 * src + n, 2 * src + m) * gl[j] * wr[n][m];
            }
        for (int i = 0; i < 2; ++i) {
            const int src_l = detail::source_of_channel(i);
            out.ffff(2 * i + j, 2 * i + j) = s0(2 * src_l + src, 2 * src_l + src).real() * gl[i] * gr[j];
        }
    }
    return out;
}

/// Reduced initial state of the left kaon.
inline SingleKaonInitial left_reduced_initial(const PureTwoKaonState& psi0) {
    validate(psi0);
    const Matrix2c rho = linalg::trace_right(psi0.density()) / psi0.norm2();
    return {rho(0, 0).real(), rho(1, 1).real(), rho(0, 1)};
}

inline SingleKaonInitial right_reduced_initial(const PureTwoKaonState& psi0) {
    validate(psi0);
    const Matrix2c rho = linalg::trace_left(psi0.density()) / psi0.norm2();
    return {rho(0, 0).real(), rho(1, 1).real(), rho(0, 1)};
}

inline EvolvedSingleState left_marginal(const PureTwoKaonState& psi0, double t_l, const MesonParameters& p) {
    return evolve_single(left_reduced_initial(psi0), t_l, p);
}

inline EvolvedSingleState right_marginal(const PureTwoKaonState& psi0, double t_r, const MesonParameters& p) {
    return evolve_single(right_reduced_initial(psi0), t_r, p);
}

/// Joint YES/NO correlation E = P(YY) + P(NN) - P(YN) - P(NY) for arbitrary
/// quasi-spin projectors, computed from the evolved density matrix.
inline double expectation_matrix(const BipartiteEvolvedState& sigma, const Matrix2c& p_l, const Matrix2c& p_r) {
    if (!linalg::is_projector(p_l) || !linalg::is_projector(p_r))
        throw DomainError("measurement operator is not a projector");
    const double yes_l = (p_l * sigma.left_surviving()).trace().real();
    const double yes_r = (p_r * sigma.right_surviving()).trace().real();
    const double yes_yes = (linalg::kron(p_l, p_r) * sigma.ssss).trace().real();
    return 1.0 - 2.0 * yes_l - 2.0 * yes_r + 4.0 * yes_yes;
}

inline double expectation_matrix(const PureTwoKaonState& psi0, const Matrix2c& p_l, const Matrix2c& p_r, double t_l,
                                 double t_r, const MesonParameters& p) {
    return expectation_matrix(evolve_bipartite(psi0, t_l, t_r, p), p_l, p_r);
}

/// Antikaon-antikaon correlation E(t_l, t_r) in closed form.
///
/// Hot path for the optimizer; expectation_matrix with both projectors on
/// K0bar is the reference implementation.
inline double expectation_closed_form(const PureTwoKaonState& s, double t_l, double t_r, const MesonParameters& p) {
    detail::require_time(t_l);
    detail::require_time(t_r);
    const auto& [r1, r2, r3, r4] = s.r;
    const auto& [f1, f2, f3, f4] = s.phi;
    const double gs = p.gamma_S;
    const double gl = p.gamma_L;
    const double g = p.gamma_mean();
    const double dm = p.delta_m;

    const double sl = std::exp(-gs * t_l);
    const double sr = std::exp(-gs * t_r);
    const double ll = std::exp(-gl * t_l);
    const double lr = std::exp(-gl * t_r);
    const double ml = std::exp(-g * t_l);
    const double mr = std::exp(-g * t_r);

    double e = 1.0;
    e += r1 * r1 * sl * sr + r2 * r2 * sl * lr + r3 * r3 * ll * sr + r4 * r4 * ll * lr;
    e -= r1 * r1 * (sl + sr) + r2 * r2 * (sl + lr) + r3 * r3 * (ll + sr) + r4 * r4 * (ll + lr);
    e += 2.0 * r1 * r2 * (1.0 - sl) * std::cos(dm * t_r + f1 - f2) * mr;
    e += 2.0 * r1 * r3 * std::cos(dm * t_l + f1 - f3) * ml * (1.0 - sr);
    e += 2.0 * r2 * r4 * std::cos(dm * t_l + f2 - f4) * ml * (1.0 - lr);
    e += 2.0 * r3 * r4 * (1.0 - ll) * std::cos(dm * t_r + f3 - f4) * mr;
    e += 2.0 * r1 * r4 * std::cos(dm * (t_l + t_r) + f1 - f4) * ml * mr;
    e += 2.0 * r2 * r3 * std::cos(dm * (t_l - t_r) + f2 - f3) * ml * mr;
    return e;
}

/// Hermitian K(t_l, t_r) with E_{K0bar,K0bar}(t_l, t_r) = <psi0|K|psi0> for unit psi0.
///
/// Read off term by term from the closed form: every r_i r_j cos(theta + phi_i - phi_j)
/// term becomes the element pair K(j, i) = c e^{i theta}, K(i, j) = c e^{-i theta}.
/// For fixed times the best state is therefore an eigenvector of a
/// combination of such operators.
inline Matrix4c correlation_operator(double t_l, double t_r, const MesonParameters& p) {
    detail::require_time(t_l);
    detail::require_time(t_r);
    const double gs = p.gamma_S;
    const double gl = p.gamma_L;
    const double g = p.gamma_mean();
    const double dm = p.delta_m;
    const double sl = std::exp(-gs * t_l), sr = std::exp(-gs * t_r);
    const double ll = std::exp(-gl * t_l), lr = std::exp(-gl * t_r);
    const double ml = std::exp(-g * t_l), mr = std::exp(-g * t_r);

    Matrix4c k = Matrix4c::Identity();
    k(0, 0) += sl * sr - sl - sr;
    k(1, 1) += sl * lr - sl - lr;
    k(2, 2) += ll * sr - ll - sr;
    k(3, 3) += ll * lr - ll - lr;
    const auto couple = [&k](int i, int j, double c, double theta) {
        const complex z = std::polar(c, theta);
        k(j, i) += z;
        k(i, j) += std::conj(z);
    };
    couple(0, 1, (1.0 - sl) * mr, dm * t_r);
    couple(0, 2, ml * (1.0 - sr), dm * t_l);
    couple(1, 3, ml * (1.0 - lr), dm * t_l);
    couple(2, 3, (1.0 - ll) * mr, dm * t_r);
    couple(0, 3, ml * mr, dm * (t_l + t_r));
    couple(1, 2, ml * mr, dm * (t_l - t_r));
    return k;
}

/// Raw Tr(sigma^2) and its normalized form (d Tr sigma^2 - 1)/(d - 1).
struct BipartitePurity {
    double raw;
    double normalized;
};

inline constexpr int kBipartiteKaonDimension = 16;

inline double normalized_purity(double raw, int dimension) {
    return (dimension * raw - 1.0) / (dimension - 1.0);
}

inline BipartitePurity purity_bipartite(const BipartiteEvolvedState& s) {
    const double raw = linalg::hs_norm2(s.ssss) + linalg::hs_norm2(s.ssff) + linalg::hs_norm2(s.ffss) +
                       linalg::hs_norm2(s.ffff);
    return {raw, normalized_purity(raw, kBipartiteKaonDimension)};
}

} // namespace kaonbell
