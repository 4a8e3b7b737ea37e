#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <utility>
#include <random>
#include <thread>
#include <vector>

#include "kaonbell/bell_chsh.hpp"
#include "kaonbell/bipartite.hpp"
#include "kaonbell/errors.hpp"
#include "kaonbell/numeric.hpp"
#include "kaonbell/params.hpp"

namespace kaonbell {

/// What the CHSH maximization is allowed to vary.
///
/// Amplitudes live on the unit 3-sphere via three hyperspherical angles, so
/// every decoded point is normalized by construction; full angle ranges give
/// all sign combinations. Phases phi_1..phi_3 are free or frozen at zero with
/// phi_4 = 0 as gauge. Times use a logarithmic coordinate
/// y = log(1 + t / time_scale) folded into [0, log(1 + t_max / time_scale)]
/// by reflection; S is flat (= 2) once all four times are many lifetimes
/// long, so starts are spread evenly in y rather than in t.
struct SearchSpace {
    enum class Mode { zero_phases, free_phases, fixed_state };

    Mode mode = Mode::free_phases;
    PureTwoKaonState fixed{};
    double t_max = 50.0;
    double time_scale = 1.0;

    static SearchSpace zero_phases(double t_max = 50.0) { return {Mode::zero_phases, {}, t_max}; }
    static SearchSpace free_phases(double t_max = 50.0) { return {Mode::free_phases, {}, t_max}; }
    static SearchSpace fixed_state(const PureTwoKaonState& s, double t_max = 50.0) {
        return {Mode::fixed_state, s, t_max};
    }

    [[nodiscard]] double log_time_extent() const { return std::log1p(t_max / time_scale); }
    [[nodiscard]] double time_from_coordinate(double y) const {
        return std::min(t_max, time_scale * std::expm1(numeric::reflect_into(y, log_time_extent())));
    }
    [[nodiscard]] double coordinate_from_time(double t) const { return std::log1p(t / time_scale); }

    [[nodiscard]] std::size_t state_dimension() const {
        switch (mode) {
        case Mode::zero_phases: return 3;
        case Mode::free_phases: return 6;
        case Mode::fixed_state: return 0;
        }
        return 0;
    }
    [[nodiscard]] std::size_t dimension() const { return state_dimension() + 4; }

    struct Point {
        PureTwoKaonState state;
        std::array<double, 4> times;
    };

    [[nodiscard]] Point decode(const std::vector<double>& x) const {
        Point pt;
        if (mode == Mode::fixed_state) {
            pt.state = fixed;
        } else {
            const double s1 = std::sin(x[0]), s2 = std::sin(x[1]);
            pt.state.r = {std::cos(x[0]), s1 * std::cos(x[1]), s1 * s2 * std::cos(x[2]), s1 * s2 * std::sin(x[2])};
            pt.state.phi = {0.0, 0.0, 0.0, 0.0};
            if (mode == Mode::free_phases)
                for (int i = 0; i < 3; ++i) pt.state.phi[i] = std::remainder(x[3 + i], 2.0 * std::numbers::pi);
        }
        const std::size_t off = state_dimension();
        for (std::size_t i = 0; i < 4; ++i) pt.times[i] = time_from_coordinate(x[off + i]);
        return pt;
    }

    /// Inverse of decode() for the state coordinates (gauge phi_4 = 0).
    [[nodiscard]] std::vector<double> encode(const PureTwoKaonState& state, const std::array<double, 4>& times) const {
        std::vector<double> x(dimension());
        if (mode != Mode::fixed_state) {
            const auto& r = state.r;
            x[0] = std::atan2(std::sqrt(r[1] * r[1] + r[2] * r[2] + r[3] * r[3]), r[0]);
            x[1] = std::atan2(std::sqrt(r[2] * r[2] + r[3] * r[3]), r[1]);
            x[2] = std::atan2(r[3], r[2]);
            if (mode == Mode::free_phases)
                for (int i = 0; i < 3; ++i) x[3 + i] = std::remainder(state.phi[i] - state.phi[3], 2.0 * std::numbers::pi);
        }
        const std::size_t off = state_dimension();
        for (std::size_t i = 0; i < 4; ++i) x[off + i] = coordinate_from_time(times[i]);
        return x;
    }

    /// Maps a unit-cube sample onto the decoded box.
    [[nodiscard]] std::vector<double> from_unit_cube(const std::vector<double>& u) const {
        std::vector<double> x(dimension());
        const double two_pi = 2.0 * std::numbers::pi;
        const std::size_t off = state_dimension();
        for (std::size_t i = 0; i < off; ++i) x[i] = (i < 3 ? two_pi * u[i] : two_pi * (u[i] - 0.5));
        for (std::size_t i = 0; i < 4; ++i) x[off + i] = log_time_extent() * u[off + i];
        return x;
    }

    /// Initial simplex edge per coordinate.
    [[nodiscard]] std::vector<double> initial_step() const {
        std::vector<double> step(dimension(), 0.5);
        for (std::size_t i = 0; i < 4; ++i) step[state_dimension() + i] = 0.05 * log_time_extent();
        return step;
    }
};

struct OptimizerSettings {
    std::size_t starts = 200;
    std::size_t budget = 200000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    /// Low-discrepancy points screened per start; the best one seeds the simplex.
    std::size_t candidates_per_start = 64;
    /// Absolute convergence tolerance in S for each simplex run.
    double tolerance = 1e-10;
};

struct OptimizationResult {
    double best_S = 0.0;
    /// S re-evaluated at the optimum through the density-matrix path.
    double matrix_S = 0.0;
    PureTwoKaonState best_state{};
    std::array<double, 4> best_times{};
    std::size_t n_starts = 0;
    std::size_t n_evals = 0;
    std::uint64_t seed = 0;
    bool budget_exhausted = false;
    std::vector<double> history;
};

namespace detail {

struct StartOutcome {
    double value = -1.0;
    SearchSpace::Point point{};
    std::size_t evals = 0;
    bool exhausted = false;
};

// Deterministic tie-break on equal S: lexicographically smaller decoded coordinates win.
inline bool better(const StartOutcome& a, const StartOutcome& b) {
    if (a.value != b.value) return a.value > b.value;
    const auto key = [](const StartOutcome& o) {
        std::array<double, 12> k{};
        for (int i = 0; i < 4; ++i) {
            k[static_cast<std::size_t>(i)] = o.point.state.r[static_cast<std::size_t>(i)];
            k[4 + static_cast<std::size_t>(i)] = o.point.state.phi[static_cast<std::size_t>(i)];
            k[8 + static_cast<std::size_t>(i)] = o.point.times[static_cast<std::size_t>(i)];
        }
        return k;
    };
    return key(a) < key(b);
}

/// Best S over all states admitted by `space` for fixed times.
///
/// E is a quadratic form in the amplitudes, so for each sign pattern of the
/// two absolute values S is <psi|H|psi> and its maximum is the top eigenvalue
/// of H (of Re H when the phases are frozen at zero).
inline std::pair<double, PureTwoKaonState> best_state_for_times(const SearchSpace& space,
                                                                const std::array<double, 4>& t,
                                                                const MesonParameters& p) {
    const Matrix4c a = correlation_operator(t[0], t[1], p) - correlation_operator(t[0], t[2], p);
    const Matrix4c b = correlation_operator(t[3], t[1], p) + correlation_operator(t[3], t[2], p);
    double best = -std::numeric_limits<double>::infinity();
    Vector4c arg = Vector4c::Zero();
    for (const double s1 : {1.0, -1.0}) {
        for (const double s2 : {1.0, -1.0}) {
            Matrix4c h = s1 * a + s2 * b;
            if (space.mode == SearchSpace::Mode::zero_phases) h = h.real().cast<complex>();
            const Eigen::SelfAdjointEigenSolver<Matrix4c> es(h);
            if (es.eigenvalues()(3) > best) {
                best = es.eigenvalues()(3);
                arg = es.eigenvectors().col(3);
            }
        }
    }
    PureTwoKaonState state;
    const double gauge = std::arg(arg(3));
    for (int i = 0; i < 4; ++i) {
        const complex z = arg(i) * std::polar(1.0, -gauge);
        if (space.mode == SearchSpace::Mode::zero_phases) {
            state.r[static_cast<std::size_t>(i)] = z.real();
        } else {
            state.r[static_cast<std::size_t>(i)] = std::abs(z);
            state.phi[static_cast<std::size_t>(i)] = std::abs(z) > 0.0 ? std::arg(z) : 0.0;
        }
    }
    state.phi[3] = 0.0;
    return {best, state.normalized()};
}

// Simplex runs around the incumbent, restarted until a restart stops improving.
template <typename Objective>
numeric::SimplexResult restarted_simplex(Objective&& objective, std::vector<double> x, const std::vector<double>& step,
                                         std::size_t budget, double tolerance, bool& exhausted) {
    numeric::SimplexOptions opt;
    opt.value_tolerance = tolerance;
    numeric::SimplexResult best;
    best.x = x;
    best.value = std::numeric_limits<double>::infinity();
    while (best.evaluations < budget) {
        opt.max_evaluations = budget - best.evaluations;
        const auto r = numeric::nelder_mead(objective, best.x, step, opt);
        best.evaluations += r.evaluations;
        const bool improved = r.value < best.value - tolerance;
        if (r.value < best.value) {
            best.value = r.value;
            best.x = r.x;
        }
        if (!r.converged) {
            exhausted = true;
            break;
        }
        if (!improved) break;
    }
    best.converged = !exhausted;
    return best;
}

inline StartOutcome run_start(const SearchSpace& space, const MesonParameters& p,
                              const std::vector<std::vector<double>>& candidates, std::size_t budget,
                              double tolerance) {
    const std::size_t off = space.state_dimension();
    const bool profiled = space.mode != SearchSpace::Mode::fixed_state;
    const auto times_of = [&](const std::vector<double>& y) {
        std::array<double, 4> t{};
        for (std::size_t i = 0; i < 4; ++i) t[i] = space.time_from_coordinate(y[i]);
        return t;
    };
    // Minimized over the four time coordinates; the state is either fixed or
    // profiled out exactly.
    const auto objective = [&](const std::vector<double>& y) {
        const auto t = times_of(y);
        if (profiled) return -best_state_for_times(space, t, p).first;
        return -s_value(space.fixed, t, p, EvaluationPath::closed);
    };

    StartOutcome out;
    std::vector<double> y0;
    double y0_value = std::numeric_limits<double>::infinity();
    for (const auto& c : candidates) {
        if (out.evals >= budget) break;
        std::vector<double> y(c.begin() + static_cast<std::ptrdiff_t>(off), c.end());
        const double v = objective(y);
        ++out.evals;
        if (v < y0_value) {
            y0_value = v;
            y0 = std::move(y);
        }
    }

    const auto full_step = space.initial_step();
    const std::vector<double> ystep(full_step.begin() + static_cast<std::ptrdiff_t>(off), full_step.end());
    const auto r = restarted_simplex(objective, y0, ystep, budget - out.evals, tolerance, out.exhausted);
    out.evals += r.evaluations;

    const auto times = times_of(r.x.empty() ? y0 : r.x);
    const PureTwoKaonState state = profiled ? best_state_for_times(space, times, p).second : space.fixed;
    out.point = space.decode(space.encode(state, times));
    out.value = s_value(out.point.state, out.point.times, p, EvaluationPath::closed);
    return out;
}

} // namespace detail

/// Multi-start simplex maximization of the strangeness CHSH value.
///
/// Start i begins at the i-th point of a Halton sequence whose random shift is
/// drawn from `seed`; each start receives budget / starts evaluations. Results
/// do not depend on the thread count.
inline OptimizationResult maximize_s(const SearchSpace& space, const MesonParameters& p,
                                     const OptimizerSettings& settings) {
    validate(p);
    if (settings.budget < 1) throw DomainError("evaluation budget must be at least 1");
    if (settings.starts < 1) throw DomainError("at least one start is required");
    if (!(space.t_max > 0.0) || !(space.time_scale > 0.0)) throw DomainError("t_max and time_scale must be positive");
    if (space.mode == SearchSpace::Mode::fixed_state) validate(space.fixed);

    const std::size_t starts = std::min(settings.starts, settings.budget);
    const std::size_t per_start = settings.budget / starts;
    const std::size_t dim = space.dimension();

    std::mt19937_64 rng(settings.seed);
    std::vector<double> shift(dim);
    for (double& s : shift) s = static_cast<double>(rng() >> 11) * 0x1.0p-53;

    // Screening never takes more than a quarter of a start's budget.
    const std::size_t n_candidates =
        std::max<std::size_t>(1, std::min(settings.candidates_per_start, per_start / 4));

    std::vector<detail::StartOutcome> outcomes(starts);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < starts; i = next++) {
            std::vector<std::vector<double>> candidates;
            for (std::size_t j = 0; j < n_candidates; ++j) {
                auto u = numeric::halton_point(i * n_candidates + j, dim, shift);
                // Odd candidates sit on a t = 0 face; optima often pin some times to zero.
                if (j % 2 == 1) {
                    const std::size_t mask = (j / 2) % 15 + 1;
                    for (std::size_t k = 0; k < 4; ++k)
                        if (mask & (std::size_t{1} << k)) u[dim - 4 + k] = 0.0;
                }
                candidates.push_back(space.from_unit_cube(u));
            }
            outcomes[i] = detail::run_start(space, p, candidates, per_start, settings.tolerance);
        }
    };
    const unsigned n_threads = std::max(1u, std::min<unsigned>(settings.threads, static_cast<unsigned>(starts)));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }

    OptimizationResult res;
    res.seed = settings.seed;
    res.n_starts = starts;
    std::size_t best = 0;
    for (std::size_t i = 0; i < starts; ++i) {
        res.history.push_back(outcomes[i].value);
        res.n_evals += outcomes[i].evals;
        res.budget_exhausted = res.budget_exhausted || outcomes[i].exhausted;
        if (detail::better(outcomes[i], outcomes[best])) best = i;
    }
    res.best_S = outcomes[best].value;
    res.best_state = outcomes[best].point.state;
    res.best_times = outcomes[best].point.times;
    res.matrix_S = s_value(res.best_state, res.best_times, p, EvaluationPath::matrix);
    return res;
}

inline OptimizationResult maximize_s(const SearchSpace& space, const MesonParameters& p, std::size_t budget,
                                     std::uint64_t seed, std::size_t starts = 200) {
    OptimizerSettings s;
    s.budget = budget;
    s.seed = seed;
    s.starts = starts;
    return maximize_s(space, p, s);
}

/// Maximization over the four detection times only.
inline OptimizationResult maximize_s_fixed_state(const PureTwoKaonState& psi0, const MesonParameters& p,
                                                 std::size_t budget, std::uint64_t seed, std::size_t starts = 200,
                                                 double t_max = 50.0) {
    return maximize_s(SearchSpace::fixed_state(psi0, t_max), p, budget, seed, starts);
}

} // namespace kaonbell
