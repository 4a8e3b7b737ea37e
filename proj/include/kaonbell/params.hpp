#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include "kaonbell/errors.hpp"

namespace kaonbell {

/// Decay widths and mass difference of a neutral-meson pair.
///
/// Units: hbar = 1, rates in 1/time. All presets use gamma_S = 1, so times
/// throughout the library are measured in units of the short lifetime tau_S.
/// Absolute masses are not stored; only delta_m = m_L - m_S is observable.
struct MesonParameters {
    double gamma_S = 1.0;
    double gamma_L = 1.0 / 579.8;
    double delta_m = 0.5;
    std::string label = "kaon-paper";

    [[nodiscard]] double gamma_mean() const { return 0.5 * (gamma_S + gamma_L); }
    [[nodiscard]] double tau_S() const { return 1.0 / gamma_S; }
    [[nodiscard]] double tau_L() const { return 1.0 / gamma_L; }
    /// Oscillation-to-decay ratio x = delta_m / gamma_mean.
    [[nodiscard]] double mixing_ratio() const { return delta_m / gamma_mean(); }

    /// Same physics with every rate multiplied by `factor` (times scale by 1/factor).
    [[nodiscard]] MesonParameters rescaled(double factor) const;
};

inline void validate(const MesonParameters& p) {
    if (!(std::isfinite(p.gamma_S) && std::isfinite(p.gamma_L) && std::isfinite(p.delta_m)))
        throw ConfigurationError("meson parameters must be finite");
    if (!(p.gamma_S > 0.0) || !(p.gamma_L > 0.0))
        throw ConfigurationError("decay widths must be positive");
    if (p.gamma_L > p.gamma_S)
        throw ConfigurationError("gamma_L must not exceed gamma_S");
    if (p.delta_m < 0.0)
        throw ConfigurationError("delta_m must be non-negative");
}

/// Builds a validated parameter set from explicit constants.
inline MesonParameters make_parameters(double gamma_S, double gamma_L, double delta_m,
                                       std::string label = "custom") {
    MesonParameters p{gamma_S, gamma_L, delta_m, std::move(label)};
    validate(p);
    return p;
}

inline MesonParameters MesonParameters::rescaled(double factor) const {
    if (!(factor > 0.0)) throw DomainError("rescale factor must be positive");
    return make_parameters(gamma_S * factor, gamma_L * factor, delta_m * factor, label);
}

namespace presets {

// Gamma_S / Gamma_L chosen so that ln2 / Gamma_L lands on the quoted purity
// minimum time 401.881 tau_S.
inline constexpr double kKaonLifetimeRatio = 579.8;
inline constexpr double kKaonDeltaM = 0.5;
inline constexpr double kPdgLifetimeRatio = 571.3;
inline constexpr double kPdgDeltaM = 0.4739;
inline constexpr double kBMesonDeltaM = 0.77;

} // namespace presets

/// Named parameter sets: kaon-paper, kaon-pdg, b-meson, custom.
///
/// "custom" starts from the kaon-paper values; callers override individual
/// constants and re-validate with make_parameters().
inline MesonParameters preset(std::string_view name) {
    using namespace presets;
    if (name == "kaon-paper")
        return make_parameters(1.0, 1.0 / kKaonLifetimeRatio, kKaonDeltaM, "kaon-paper");
    if (name == "kaon-pdg")
        return make_parameters(1.0, 1.0 / kPdgLifetimeRatio, kPdgDeltaM, "kaon-pdg");
    if (name == "b-meson")
        return make_parameters(1.0, 1.0, kBMesonDeltaM, "b-meson");
    if (name == "custom")
        return make_parameters(1.0, 1.0 / kKaonLifetimeRatio, kKaonDeltaM, "custom");
    throw ConfigurationError("unknown preset '" + std::string(name) + "'");
}

} // namespace kaonbell
