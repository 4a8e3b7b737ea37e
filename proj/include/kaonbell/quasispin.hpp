#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include "kaonbell/errors.hpp"
#include "kaonbell/linalg.hpp"

namespace kaonbell {

/// A quasi-spin direction |k> = alpha |K0> + beta |K0bar> (strangeness basis).
///
/// CP violation is neglected, so |K0> = (|K_S> + |K_L>)/sqrt2 and
/// |K0bar> = (-|K_S> + |K_L>)/sqrt2. Projectors are returned in the
/// mass basis {K_S, K_L} used by every density matrix in the library.
class QuasiSpin {
public:
    QuasiSpin(complex alpha, complex beta) : alpha_(alpha), beta_(beta) {
        const double n = std::norm(alpha) + std::norm(beta);
        if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-10)
            throw DomainError("quasi-spin amplitudes must satisfy |alpha|^2 + |beta|^2 = 1");
    }

    static QuasiSpin kaon() { return {1.0, 0.0}; }
    static QuasiSpin antikaon() { return {0.0, 1.0}; }

    /// From mass-basis amplitudes c_S |K_S> + c_L |K_L>.
    static QuasiSpin from_mass_basis(complex c_S, complex c_L) {
        const double s = 1.0 / std::sqrt(2.0);
        return {s * (c_S + c_L), s * (c_L - c_S)};
    }
    static QuasiSpin short_lived() { return from_mass_basis(1.0, 0.0); }
    static QuasiSpin long_lived() { return from_mass_basis(0.0, 1.0); }

    /// Names: K0, K0bar, KS, KL.
    static QuasiSpin named(std::string_view name) {
        if (name == "K0") return kaon();
        if (name == "K0bar") return antikaon();
        if (name == "KS") return short_lived();
        if (name == "KL") return long_lived();
        throw ConfigurationError("unknown quasi-spin '" + std::string(name) + "'");
    }

    [[nodiscard]] complex alpha() const { return alpha_; }
    [[nodiscard]] complex beta() const { return beta_; }

    [[nodiscard]] Vector2c mass_vector() const {
        const double s = 1.0 / std::sqrt(2.0);
        return Vector2c{s * (alpha_ - beta_), s * (alpha_ + beta_)};
    }

    [[nodiscard]] Matrix2c projector() const {
        const Vector2c v = mass_vector();
        return v * v.adjoint();
    }

    [[nodiscard]] bool is_antikaon(double tol = 1e-12) const {
        return std::abs(alpha_) <= tol && std::abs(std::abs(beta_) - 1.0) <= tol;
    }

private:
    complex alpha_;
    complex beta_;
};

} // namespace kaonbell
