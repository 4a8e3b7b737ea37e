#pragma once

#include <array>
#include <cmath>

#include "kaonbell/bipartite.hpp"
#include "kaonbell/errors.hpp"
#include "kaonbell/quasispin.hpp"

namespace kaonbell {

/// Detection times and quasi-spins of a CHSH experiment.
///
/// Setting order follows S_{n, m, n', m'}(t1, t2, t3, t4): Alice measures n at
/// t1 or n' at t4; Bob measures m at t2 or m' at t3.
struct BellConfiguration {
    std::array<double, 4> times{0.0, 0.0, 0.0, 0.0};
    std::array<QuasiSpin, 4> quasispins{QuasiSpin::antikaon(), QuasiSpin::antikaon(), QuasiSpin::antikaon(),
                                        QuasiSpin::antikaon()};

    BellConfiguration() = default;
    explicit BellConfiguration(std::array<double, 4> t) : times(t) {}
    BellConfiguration(std::array<double, 4> t, std::array<QuasiSpin, 4> q) : times(t), quasispins(q) {}

    [[nodiscard]] bool all_antikaon() const {
        for (const auto& q : quasispins)
            if (!q.is_antikaon()) return false;
        return true;
    }
};

enum class EvaluationPath { closed, matrix };

inline constexpr double kLocalRealismBound = 2.0;
inline constexpr double kAlgebraicChshBound = 4.0;

/// |E(a, b) - E(a, b')| + |E(a', b) + E(a', b')| for any correlation E(left_setting, right_setting).
/// Left settings: 0 -> (n, t1), 1 -> (n', t4). Right: 0 -> (m, t2), 1 -> (m', t3).
template <typename Correlation>
double chsh_combination(Correlation&& e) {
    return std::abs(e(0, 0) - e(0, 1)) + std::abs(e(1, 0) + e(1, 1));
}

namespace detail {

inline void require_times(const BellConfiguration& cfg) {
    for (double t : cfg.times) require_time(t);
}

} // namespace detail

/// Quasi-spin-general S via the density-matrix path.
inline double s_general(const PureTwoKaonState& psi0, const BellConfiguration& cfg, const MesonParameters& p) {
    detail::require_times(cfg);
    const std::array<double, 2> t_left{cfg.times[0], cfg.times[3]};
    const std::array<double, 2> t_right{cfg.times[1], cfg.times[2]};
    const std::array<Matrix2c, 2> p_left{cfg.quasispins[0].projector(), cfg.quasispins[2].projector()};
    const std::array<Matrix2c, 2> p_right{cfg.quasispins[1].projector(), cfg.quasispins[3].projector()};
    return chsh_combination([&](int a, int b) {
        return expectation_matrix(psi0, p_left[a], p_right[b], t_left[a], t_right[b], p);
    });
}

/// Strangeness CHSH value S_{K0bar,K0bar,K0bar,K0bar}(t1, t2, t3, t4).
inline double s_value(const PureTwoKaonState& psi0, const BellConfiguration& cfg, const MesonParameters& p,
                      EvaluationPath path = EvaluationPath::closed) {
    if (path == EvaluationPath::matrix) return s_general(psi0, cfg, p);
    if (!cfg.all_antikaon())
        throw UnsupportedConfiguration("closed-form path supports only antikaon quasi-spins");
    detail::require_times(cfg);
    const std::array<double, 2> t_left{cfg.times[0], cfg.times[3]};
    const std::array<double, 2> t_right{cfg.times[1], cfg.times[2]};
    return chsh_combination(
        [&](int a, int b) { return expectation_closed_form(psi0, t_left[a], t_right[b], p); });
}

inline double s_value(const PureTwoKaonState& psi0, const std::array<double, 4>& times, const MesonParameters& p,
                      EvaluationPath path = EvaluationPath::closed) {
    return s_value(psi0, BellConfiguration(times), p, path);
}

} // namespace kaonbell
