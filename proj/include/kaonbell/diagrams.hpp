#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "kaonbell/bell_chsh.hpp"
#include "kaonbell/bipartite.hpp"
#include "kaonbell/entanglement.hpp"
#include "kaonbell/errors.hpp"
#include "kaonbell/single_kaon.hpp"

namespace kaonbell {

/// Detection-time path of a purity/concurrence trajectory.
enum class Scenario { equal_times, left_zero, left_offset };

inline constexpr double kLeftOffsetTime = 0.3;

inline Scenario parse_scenario(std::string_view name) {
    if (name == "equal" || name == "equal-times") return Scenario::equal_times;
    if (name == "left-zero") return Scenario::left_zero;
    if (name == "left-0.3") return Scenario::left_offset;
    throw ConfigurationError("unknown scenario '" + std::string(name) + "'");
}

inline std::string_view scenario_name(Scenario s) {
    switch (s) {
    case Scenario::equal_times: return "equal-times";
    case Scenario::left_zero: return "left-zero";
    case Scenario::left_offset: return "left-0.3";
    }
    return "?";
}

struct TrajectoryPoint {
    double t = 0.0;
    double t_l = 0.0;
    double t_r = 0.0;
    double purity_raw = 0.0;
    /// (16 Tr sigma^2 - 1) / 15.
    double purity_norm = 0.0;
    /// Concurrence of the unnormalized surviving block.
    double concurrence_raw = 0.0;
    /// Concurrence of the surviving block rescaled to unit trace.
    double concurrence_renorm = 0.0;
};

/// Number of samples 0, step, 2 step, ... not exceeding t_end.
inline std::size_t grid_size(double t_end, double step) {
    return static_cast<std::size_t>(std::floor(t_end / step + 1e-9)) + 1;
}

inline TrajectoryPoint trajectory_point(const PureTwoKaonState& psi0, double t_l, double t_r,
                                        const MesonParameters& p) {
    const auto sigma = evolve_bipartite(psi0, t_l, t_r, p);
    const auto pur = purity_bipartite(sigma);
    TrajectoryPoint pt;
    pt.t_l = t_l;
    pt.t_r = t_r;
    pt.purity_raw = pur.raw;
    pt.purity_norm = pur.normalized;
    pt.concurrence_raw = wootters_concurrence(sigma.ssss).value;
    pt.concurrence_renorm = normalized_concurrence(sigma.ssss);
    return pt;
}

/// Samples purity and concurrence along a scenario path.
/// Sample times are k * step (k = 0, 1, ...) in units of `time_unit` tau_S.
/// Rows are filled in strides by up to `threads` workers; the result does not
/// depend on the thread count.
inline std::vector<TrajectoryPoint> trajectory(const PureTwoKaonState& psi0, Scenario scenario, double t_end,
                                               double step, const MesonParameters& p, double time_unit = 1.0,
                                               unsigned threads = 1) {
    if (!(step > 0.0) || !(t_end >= step) || !std::isfinite(t_end))
        throw DomainError("trajectory needs step > 0 and t_end >= step");
    if (!(time_unit > 0.0)) throw DomainError("time unit must be positive");
    validate(psi0);
    validate(p);
    const std::size_t n = grid_size(t_end, step);
    std::vector<TrajectoryPoint> out(n);
    const auto fill = [&](std::size_t first, std::size_t stride) {
        for (std::size_t k = first; k < n; k += stride) {
            const double t = static_cast<double>(k) * step;
            const double tt = t * time_unit;
            double t_l = tt;
            if (scenario == Scenario::left_zero) t_l = 0.0;
            if (scenario == Scenario::left_offset) t_l = kLeftOffsetTime * time_unit;
            out[k] = trajectory_point(psi0, t_l, tt, p);
            out[k].t = t;
        }
    };
    const std::size_t workers = std::clamp<std::size_t>(threads, 1, n);
    if (workers == 1) {
        fill(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(fill, w, workers);
    }
    return out;
}

struct PurityPoint {
    double t = 0.0;
    double purity = 0.0;
};

/// Single-kaon purity on the grid 0, step, ..., t_end.
inline std::vector<PurityPoint> purity_curve(const SingleKaonInitial& init, double t_end, double step,
                                             const MesonParameters& p) {
    if (!(step > 0.0) || !(t_end >= step) || !std::isfinite(t_end))
        throw DomainError("purity curve needs step > 0 and t_end >= step");
    std::vector<PurityPoint> out;
    const std::size_t n = grid_size(t_end, step);
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * step;
        out.push_back({t, purity_single(init, t, p)});
    }
    return out;
}

/// A point of a two-qubit reference family in the purity/concurrence plane
/// (purity normalized with d = 4).
struct ReferencePoint {
    double parameter = 0.0;
    double purity_norm = 0.0;
    double concurrence = 0.0;
};

inline constexpr int kQubitPairDimension = 4;

/// p |psi-><psi-| + (1 - p) 1/4.
inline Matrix4c werner_state(double p) {
    Vector4c singlet(0.0, 1.0, -1.0, 0.0);
    singlet /= std::sqrt(2.0);
    return p * (singlet * singlet.adjoint()) + (1.0 - p) * 0.25 * Matrix4c::Identity();
}

/// Normalized purity of the Werner state with concurrence c.
inline double werner_purity_at(double c) {
    const double p = (2.0 * c + 1.0) / 3.0;
    return normalized_purity((1.0 + 3.0 * p * p) / 4.0, kQubitPairDimension);
}

/// Werner family for p in [1/3, 1].
inline std::vector<ReferencePoint> werner_curve(std::size_t n_points) {
    if (n_points < 2) throw DomainError("need at least two curve points");
    std::vector<ReferencePoint> out;
    for (std::size_t i = 0; i < n_points; ++i) {
        const double p = 1.0 / 3.0 + (2.0 / 3.0) * static_cast<double>(i) / static_cast<double>(n_points - 1);
        const double raw = (1.0 + 3.0 * p * p) / 4.0;
        out.push_back({p, normalized_purity(raw, kQubitPairDimension), std::max(0.0, (3.0 * p - 1.0) / 2.0)});
    }
    return out;
}

/// Maximally entangled mixed state with concurrence c:
/// [[g, 0, 0, c/2], [0, 1 - 2g, 0, 0], [0, 0, 0, 0], [c/2, 0, 0, g]],
/// g = c/2 for c >= 2/3 and 1/3 below.
inline Matrix4c mems_state(double c) {
    if (!(c >= 0.0 && c <= 1.0)) throw DomainError("concurrence must lie in [0, 1]");
    const double g = c >= 2.0 / 3.0 ? c / 2.0 : 1.0 / 3.0;
    Matrix4c m = Matrix4c::Zero();
    m(0, 0) = g;
    m(3, 3) = g;
    m(1, 1) = 1.0 - 2.0 * g;
    m(0, 3) = c / 2.0;
    m(3, 0) = c / 2.0;
    return m;
}

inline double mems_purity_at(double c) {
    const double raw = c >= 2.0 / 3.0 ? c * c + (1.0 - c) * (1.0 - c) : 1.0 / 3.0 + 0.5 * c * c;
    return normalized_purity(raw, kQubitPairDimension);
}

/// MEMS boundary for concurrence in [0, 1].
inline std::vector<ReferencePoint> mems_curve(std::size_t n_points) {
    if (n_points < 2) throw DomainError("need at least two curve points");
    std::vector<ReferencePoint> out;
    for (std::size_t i = 0; i < n_points; ++i) {
        const double c = static_cast<double>(i) / static_cast<double>(n_points - 1);
        out.push_back({c, mems_purity_at(c), c});
    }
    return out;
}

struct SCurvePoint {
    double u = 0.0;
    std::array<double, 4> times{};
    double s = 0.0;
};

/// S along the ray times(u) = u * base_times, u in [0, u_max].
inline std::vector<SCurvePoint> s_curve(const PureTwoKaonState& psi0, const std::array<double, 4>& base_times,
                                        const MesonParameters& p, double u_max = 3.0, std::size_t n_points = 301) {
    if (n_points < 2 || !(u_max > 0.0)) throw DomainError("invalid S-curve path");
    for (double t : base_times)
        if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("path times must be finite and non-negative");
    validate(psi0);
    std::vector<SCurvePoint> out;
    out.reserve(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        SCurvePoint pt;
        pt.u = u_max * static_cast<double>(i) / static_cast<double>(n_points - 1);
        for (std::size_t k = 0; k < 4; ++k) pt.times[k] = pt.u * base_times[k];
        pt.s = s_value(psi0, pt.times, p);
        out.push_back(pt);
    }
    return out;
}

/// Detection times at which the named states reach their quoted CHSH values.
inline constexpr std::array<double, 4> kXiTimes{0.0, 0.0, 5.77, 5.77};
inline constexpr std::array<double, 4> kChiTimes{1.79, 1.79, 0.0, 0.0};

} // namespace kaonbell
