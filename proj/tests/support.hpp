#pragma once

// Bridges between library types and the oracle's plain Eigen types.

#include <random>

#include "kaonbell/kaonbell.hpp"
#include "oracles.hpp"

namespace support {

inline oracle::Rates rates(const kaonbell::MesonParameters& p) { return {p.gamma_S, p.gamma_L, p.delta_m}; }

inline kaonbell::PureTwoKaonState to_state(const oracle::Vec4& v) {
    kaonbell::PureTwoKaonState s;
    for (int i = 0; i < 4; ++i) {
        s.r[static_cast<std::size_t>(i)] = std::abs(v(i));
        s.phi[static_cast<std::size_t>(i)] = std::arg(v(i));
    }
    return s;
}

inline kaonbell::PureTwoKaonState random_state(std::mt19937_64& rng) {
    return to_state(oracle::random_amplitudes(rng));
}

/// Random mixed single-kaon initial state.
inline kaonbell::SingleKaonInitial random_single(std::mt19937_64& rng) {
    const double ss = oracle::uniform(rng);
    const double bound = std::sqrt(ss * (1.0 - ss));
    const auto sl = std::polar(bound * oracle::uniform(rng), 2.0 * std::numbers::pi * oracle::uniform(rng));
    return {ss, 1.0 - ss, sl};
}

/// Random parameters around the kaon and B-meson regimes, gamma_S = 1.
inline kaonbell::MesonParameters random_params(std::mt19937_64& rng) {
    const double ratio = 1.0 + 999.0 * oracle::uniform(rng);
    return kaonbell::make_parameters(1.0, 1.0 / ratio, 2.0 * oracle::uniform(rng));
}

} // namespace support
