#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <algorithm>
#include <numeric>
#include <vector>

namespace kaonbell::numeric {

struct ScalarMinimum {
    double x;
    double value;
};

/// Golden-section search for a minimum of a unimodal function on [lo, hi].
template <typename F>
ScalarMinimum golden_section_minimize(F&& f, double lo, double hi, double tol = 1e-9) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

/// Radical-inverse (Halton) point in [0,1)^dim with a Cranley-Patterson shift.
inline std::vector<double> halton_point(std::uint64_t index, std::size_t dim, const std::vector<double>& shift) {
    static constexpr std::uint32_t kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
    std::vector<double> out(dim);
    for (std::size_t d = 0; d < dim; ++d) {
        const std::uint32_t base = kPrimes[d % std::size(kPrimes)];
        double f = 1.0;
        double r = 0.0;
        for (std::uint64_t i = index + 1; i > 0; i /= base) {
            f /= base;
            r += f * static_cast<double>(i % base);
        }
        if (d < shift.size()) r = std::fmod(r + shift[d], 1.0);
        out[d] = r;
    }
    return out;
}

/// Maps any real onto [0, width] by reflection at the box faces.
inline double reflect_into(double x, double width) {
    if (width <= 0.0) return 0.0;
    const double period = 2.0 * width;
    double y = std::fmod(x, period);
    if (y < 0.0) y += period;
    return y <= width ? y : period - y;
}


struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

struct SimplexOptions {
    std::size_t max_evaluations = 1000;
    /// Stop when best and worst vertex values differ by less than this.
    double value_tolerance = 1e-10;
    /// ... and the simplex diameter is below this.
    double size_tolerance = 1e-9;
};

/// Nelder-Mead minimization with dimension-adaptive coefficients
/// (reflection 1, expansion 1 + 2/n, contraction 0.75 - 1/2n, shrink 1 - 1/n).
///
/// The initial simplex is x0 plus one vertex per axis displaced by step[i].
/// Deterministic: the same inputs always produce the same vertex sequence, so
/// a run with a larger evaluation budget extends a smaller one.
template <typename F>
SimplexResult nelder_mead(F&& f, std::vector<double> x0, const std::vector<double>& step,
                          const SimplexOptions& opt = {}) {
    const std::size_t n = x0.size();
    const double dn = static_cast<double>(std::max<std::size_t>(n, 1));
    const double alpha = 1.0;
    const double gamma = 1.0 + 2.0 / dn;
    const double rho = 0.75 - 0.5 / dn;
    const double sigma = 1.0 - 1.0 / dn;

    SimplexResult out;
    std::vector<std::vector<double>> vert(n + 1, x0);
    std::vector<double> val(n + 1);
    auto eval = [&](const std::vector<double>& x) {
        ++out.evaluations;
        return f(x);
    };
    auto budget_left = [&] { return out.evaluations < opt.max_evaluations; };

    val[0] = eval(vert[0]);
    for (std::size_t i = 0; i < n && budget_left(); ++i) {
        vert[i + 1][i] += step[i];
        val[i + 1] = eval(vert[i + 1]);
    }
    const std::size_t filled = std::min(out.evaluations, n + 1);

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), trial(n), trial2(n);
    if (filled == n + 1) {
        while (budget_left()) {
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
            const std::size_t best = order.front();
            const std::size_t worst = order.back();
            const std::size_t second = order[n - (n > 0 ? 1 : 0)];

            double diameter = 0.0;
            for (std::size_t i = 0; i <= n; ++i)
                for (std::size_t d = 0; d < n; ++d)
                    diameter = std::max(diameter, std::abs(vert[i][d] - vert[best][d]));
            if (val[worst] - val[best] <= opt.value_tolerance && diameter <= opt.size_tolerance) {
                out.converged = true;
                break;
            }

            std::fill(centroid.begin(), centroid.end(), 0.0);
            for (std::size_t i = 0; i <= n; ++i) {
                if (i == worst) continue;
                for (std::size_t d = 0; d < n; ++d) centroid[d] += vert[i][d] / dn;
            }
            for (std::size_t d = 0; d < n; ++d) trial[d] = centroid[d] + alpha * (centroid[d] - vert[worst][d]);
            const double f_r = eval(trial);

            if (f_r < val[best]) {
                if (!budget_left()) {
                    vert[worst] = trial;
                    val[worst] = f_r;
                    break;
                }
                for (std::size_t d = 0; d < n; ++d) trial2[d] = centroid[d] + gamma * (trial[d] - centroid[d]);
                const double f_e = eval(trial2);
                if (f_e < f_r) {
                    vert[worst] = trial2;
                    val[worst] = f_e;
                } else {
                    vert[worst] = trial;
                    val[worst] = f_r;
                }
                continue;
            }
            if (f_r < val[second]) {
                vert[worst] = trial;
                val[worst] = f_r;
                continue;
            }
            if (!budget_left()) break;
            const bool outside = f_r < val[worst];
            for (std::size_t d = 0; d < n; ++d) {
                const double far = outside ? trial[d] : vert[worst][d];
                trial2[d] = centroid[d] + rho * (far - centroid[d]);
            }
            const double f_c = eval(trial2);
            if (f_c < (outside ? f_r : val[worst])) {
                vert[worst] = trial2;
                val[worst] = f_c;
                continue;
            }
            for (std::size_t i = 0; i <= n && budget_left(); ++i) {
                if (i == best) continue;
                for (std::size_t d = 0; d < n; ++d)
                    vert[i][d] = vert[best][d] + sigma * (vert[i][d] - vert[best][d]);
                val[i] = eval(vert[i]);
            }
        }
    }

    const auto it = std::min_element(val.begin(), val.begin() + static_cast<std::ptrdiff_t>(filled));
    const auto idx = static_cast<std::size_t>(it - val.begin());
    out.x = vert[idx];
    out.value = val[idx];
    return out;
}

} // namespace kaonbell::numeric
