#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <vector>
#include <string>
#include <string_view>

#include "kaonbell/errors.hpp"
#include "kaonbell/linalg.hpp"
#include "kaonbell/numeric.hpp"
#include "kaonbell/params.hpp"

namespace kaonbell {

/// Initial single-kaon state in the mass basis {K_S, K_L}.
struct SingleKaonInitial {
    double rho_SS = 1.0;
    double rho_LL = 0.0;
    complex rho_SL = 0.0;

    static SingleKaonInitial short_lived() { return {1.0, 0.0, 0.0}; }
    static SingleKaonInitial long_lived() { return {0.0, 1.0, 0.0}; }
    static SingleKaonInitial kaon() { return {0.5, 0.5, 0.5}; }
    static SingleKaonInitial antikaon() { return {0.5, 0.5, -0.5}; }

    /// Density matrix of a (not necessarily normalized) pure state c_S|K_S> + c_L|K_L>.
    static SingleKaonInitial pure(complex c_S, complex c_L);
    static SingleKaonInitial from_matrix(const Matrix2c& rho);

    [[nodiscard]] Matrix2c matrix() const {
        Matrix2c m;
        m << rho_SS, rho_SL, std::conj(rho_SL), rho_LL;
        return m;
    }
};

inline void validate(const SingleKaonInitial& s) {
    constexpr double tol = 1e-12;
    if (!(std::isfinite(s.rho_SS) && std::isfinite(s.rho_LL) && std::isfinite(std::abs(s.rho_SL))))
        throw DomainError("initial state must be finite");
    if (s.rho_SS < -tol || s.rho_LL < -tol) throw DomainError("diagonal weights must be non-negative");
    if (std::abs(s.rho_SS + s.rho_LL - 1.0) > tol) throw DomainError("rho_SS + rho_LL must equal 1");
    if (std::norm(s.rho_SL) > s.rho_SS * s.rho_LL + tol)
        throw DomainError("|rho_SL|^2 must not exceed rho_SS * rho_LL");
}

inline SingleKaonInitial SingleKaonInitial::pure(complex c_S, complex c_L) {
    const double n = std::norm(c_S) + std::norm(c_L);
    if (!(n > 0.0)) throw DomainError("zero state vector");
    return {std::norm(c_S) / n, std::norm(c_L) / n, c_S * std::conj(c_L) / n};
}

inline SingleKaonInitial SingleKaonInitial::from_matrix(const Matrix2c& rho) {
    if (!linalg::is_hermitian(rho)) throw DomainError("initial density matrix must be Hermitian");
    SingleKaonInitial s{rho(0, 0).real(), rho(1, 1).real(), rho(0, 1)};
    validate(s);
    return s;
}

/// Named initial states for the CLI: KS, KL, K0, K0bar.
inline SingleKaonInitial named_single_initial(std::string_view name) {
    if (name == "KS") return SingleKaonInitial::short_lived();
    if (name == "KL") return SingleKaonInitial::long_lived();
    if (name == "K0") return SingleKaonInitial::kaon();
    if (name == "K0bar") return SingleKaonInitial::antikaon();
    throw ConfigurationError("unknown single-kaon state '" + std::string(name) + "'");
}

/// How the unobservable coherence between the two decay channels is fixed.
enum class OffdiagMode { zero, formal_x };

/// Single kaon on the enlarged space H_s (+) H_f at time t.
///
/// `ss` is the surviving block in the mass basis. The final block is
/// diag(p_fromL, p_fromS) in the channel order {from K_L, from K_S}, with the
/// optional coherence `ff_offdiag` sitting at (from K_S, from K_L).
struct EvolvedSingleState {
    Matrix2c ss = Matrix2c::Zero();
    double p_fromL = 0.0;
    double p_fromS = 0.0;
    complex ff_offdiag = 0.0;
    double t = 0.0;

    [[nodiscard]] Matrix2c ff() const {
        Matrix2c m;
        m << p_fromL, std::conj(ff_offdiag), ff_offdiag, p_fromS;
        return m;
    }

    [[nodiscard]] Matrix4c full() const {
        Matrix4c m = Matrix4c::Zero();
        m.topLeftCorner<2, 2>() = ss;
        m.bottomRightCorner<2, 2>() = ff();
        return m;
    }

    [[nodiscard]] double surviving_trace() const { return ss.trace().real(); }
    [[nodiscard]] double total_trace() const { return surviving_trace() + p_fromL + p_fromS; }
};

namespace detail {

inline void require_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time must be finite and non-negative");
}

} // namespace detail

/// Weight of the surviving mass-basis element |n><m| after time t:
/// exp(-Gamma_n t) on the diagonal, exp(+i dm t - Gamma t) for |K_S><K_L|.
inline complex surviving_weight(int n, int m, double t, const MesonParameters& p) {
    if (n == m) return std::exp(-(n == 0 ? p.gamma_S : p.gamma_L) * t);
    const complex w = std::exp(complex(-p.gamma_mean() * t, p.delta_m * t));
    return n == 0 ? w : std::conj(w);
}

/// Probability that mass eigenstate n has decayed by time t.
inline double decayed_weight(int n, double t, const MesonParameters& p) {
    return -std::expm1(-(n == 0 ? p.gamma_S : p.gamma_L) * t);
}

/// Closed-form evolution under the decay master equation.
inline EvolvedSingleState evolve_single(const SingleKaonInitial& init, double t, const MesonParameters& p,
                                        OffdiagMode mode = OffdiagMode::zero) {
    detail::require_time(t);
    validate(init);
    EvolvedSingleState out;
    out.t = t;
    const Matrix2c rho0 = init.matrix();
    for (int n = 0; n < 2; ++n)
        for (int m = 0; m < 2; ++m) out.ss(n, m) = rho0(n, m) * surviving_weight(n, m, t, p);
    out.p_fromL = decayed_weight(1, t, p) * init.rho_LL;
    out.p_fromS = decayed_weight(0, t, p) * init.rho_SS;
    if (mode == OffdiagMode::formal_x) {
        // Integral of sqrt(G_S G_L) rho_SL(t') dt' over [0, t].
        const complex rate(p.gamma_mean(), -p.delta_m);
        const complex decayed = 1.0 - std::exp(complex(-p.gamma_mean() * t, p.delta_m * t));
        out.ff_offdiag = std::sqrt(p.gamma_S * p.gamma_L) * init.rho_SL * decayed / rate;
    }
    return out;
}

/// Right-hand side of the master equation restricted to the (ss, ff) blocks.
///
/// H = diag(0, dm) in the frame co-moving with m_S, A^dagger A = diag(G_S, G_L),
/// and A maps K_L -> channel 0, K_S -> channel 1.
struct MasterEquation {
    Matrix2c hamiltonian;
    Matrix2c decay;
    Matrix2c jump;
    OffdiagMode mode;

    MasterEquation(const MesonParameters& p, OffdiagMode m) : mode(m) {
        hamiltonian << 0.0, 0.0, 0.0, p.delta_m;
        decay << p.gamma_S, 0.0, 0.0, p.gamma_L;
        jump << 0.0, std::sqrt(p.gamma_L), std::sqrt(p.gamma_S), 0.0;
    }

    void operator()(const Matrix2c& ss, Matrix2c& dss, Matrix2c& dff) const {
        const complex i(0.0, 1.0);
        dss = -i * (hamiltonian * ss - ss * hamiltonian) - 0.5 * (decay * ss + ss * decay);
        dff = jump * ss * jump.adjoint();
        if (mode == OffdiagMode::zero) dff(0, 1) = dff(1, 0) = 0.0;
    }
};

/// Fixed-step RK4 integration of the master equation from 0 to t.
///
/// The step is shrunk so that an integer number of steps lands exactly on t.
/// `observer(time, ss, ff)` is invoked after every step.
template <typename Observer>
EvolvedSingleState integrate_master_equation(const SingleKaonInitial& init, double t, const MesonParameters& p,
                                             double step, OffdiagMode mode, Observer&& observer) {
    detail::require_time(t);
    if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("integration step must be positive");
    validate(init);

    const MasterEquation rhs(p, mode);
    Matrix2c ss = init.matrix();
    Matrix2c ff = Matrix2c::Zero();
    const auto n_steps = static_cast<long>(std::ceil(t / step - 1e-12));
    const double h = n_steps > 0 ? t / static_cast<double>(n_steps) : 0.0;

    Matrix2c k1s, k2s, k3s, k4s, k1f, k2f, k3f, k4f;
    for (long i = 0; i < n_steps; ++i) {
        rhs(ss, k1s, k1f);
        rhs(ss + 0.5 * h * k1s, k2s, k2f);
        rhs(ss + 0.5 * h * k2s, k3s, k3f);
        rhs(ss + h * k3s, k4s, k4f);
        ss += (h / 6.0) * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
        ff += (h / 6.0) * (k1f + 2.0 * k2f + 2.0 * k3f + k4f);
        observer(h * static_cast<double>(i + 1), ss, ff);
    }

    EvolvedSingleState out;
    out.t = t;
    out.ss = ss;
    out.p_fromL = ff(0, 0).real();
    out.p_fromS = ff(1, 1).real();
    out.ff_offdiag = ff(1, 0);
    return out;
}

inline constexpr double kDefaultIntegrationStep = 1e-4;

inline EvolvedSingleState integrate_master_equation(const SingleKaonInitial& init, double t,
                                                    const MesonParameters& p,
                                                    double step = kDefaultIntegrationStep,
                                                    OffdiagMode mode = OffdiagMode::zero) {
    return integrate_master_equation(init, t, p, step, mode, [](double, const Matrix2c&, const Matrix2c&) {});
}

/// Tr(P rho_ss): probability of a YES event for the quasi-spin projector P.
inline double prob_yes(const EvolvedSingleState& state, const Matrix2c& projector) {
    if (!linalg::is_projector(projector)) throw DomainError("measurement operator is not a projector");
    return (projector * state.ss).trace().real();
}

/// YES minus NO; decays count as NO.
inline double expectation_single(const EvolvedSingleState& state, const Matrix2c& projector) {
    return 2.0 * prob_yes(state, projector) - 1.0;
}

/// Tr(rho^2) of the full enlarged state.
inline double purity(const EvolvedSingleState& state) {
    return linalg::hs_norm2(state.full());
}

/// Purity with vanishing final-channel coherence, evaluated in closed form.
inline double purity_single(const SingleKaonInitial& init, double t, const MesonParameters& p) {
    detail::require_time(t);
    validate(init);
    const auto recovery = [t](double gamma) {
        const double e = std::exp(-gamma * t);
        return 1.0 - 2.0 * e + 2.0 * e * e;
    };
    return init.rho_SS * init.rho_SS * recovery(p.gamma_S) + init.rho_LL * init.rho_LL * recovery(p.gamma_L) +
           2.0 * std::norm(init.rho_SL) * std::exp(-2.0 * p.gamma_mean() * t);
}

struct PurityMinimum {
    double t;
    double purity;
};

/// Local minimum of purity_single in [t_lo, t_hi] by golden-section search.
inline PurityMinimum minimize_purity_time(const SingleKaonInitial& init, const MesonParameters& p, double t_lo,
                                          double t_hi, double tol = 1e-9) {
    detail::require_time(t_lo);
    if (!(t_hi > t_lo)) throw DomainError("empty time bracket");
    const auto m = numeric::golden_section_minimize([&](double t) { return purity_single(init, t, p); }, t_lo,
                                                    t_hi, tol);
    return {m.x, m.value};
}

struct GlobalPurityMinimum {
    SingleKaonInitial init;
    double t;
    double purity;
};

/// Minimum of purity_single over all initial states and t in [0, t_max].
///
/// Coordinates: rho_SS = sin^2 a, |rho_SL| = sqrt(rho_SS rho_LL) sin^2 b, t
/// folded into [0, t_max]. The phase of rho_SL does not enter the purity.
/// Simplex runs start from a fixed grid, so the result is deterministic.
inline GlobalPurityMinimum minimize_purity_global(const MesonParameters& p, double t_max = 1000.0) {
    validate(p);
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw DomainError("t_max must be positive");
    const auto decode = [t_max](const std::vector<double>& x) {
        const double ss = std::sin(x[0]) * std::sin(x[0]);
        const double sl = std::sqrt(ss * (1.0 - ss)) * std::sin(x[1]) * std::sin(x[1]);
        return std::pair{SingleKaonInitial{ss, 1.0 - ss, sl}, numeric::reflect_into(x[2], t_max)};
    };
    const auto objective = [&](const std::vector<double>& x) {
        const auto [init, t] = decode(x);
        return purity_single(init, t, p);
    };
    numeric::SimplexOptions opt;
    opt.max_evaluations = 4000;
    opt.value_tolerance = 1e-15;
    opt.size_tolerance = 1e-10;
    numeric::SimplexResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (double a : {0.3, 0.7, 1.1, 1.4})
        for (double b : {0.2, 1.0})
            for (double t : {0.3, 1.0, 3.0, 30.0, 0.5 * t_max}) {
                auto r = numeric::nelder_mead(objective, {a, b, std::min(t, t_max)}, {0.2, 0.2, 0.25 * std::min(t, t_max)}, opt);
                r = numeric::nelder_mead(objective, r.x, {0.05, 0.05, 0.05 * std::min(t, t_max)}, opt);
                if (r.value < best.value) best = r;
            }
    const auto [init, t] = decode(best.x);
    return {init, t, best.value};
}

} // namespace kaonbell
