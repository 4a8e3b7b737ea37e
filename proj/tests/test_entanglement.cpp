#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace kaonbell;

namespace {
const MesonParameters kKaon = preset("kaon-paper");
}

TEST(Wootters, BellAndProductStates) {
    for (const char* name : {"phi+", "phi-", "psi+", "psi-"})
        EXPECT_NEAR(wootters_concurrence(bell_state(name).density()).value, 1.0, 1e-12) << name;
    const PureTwoKaonState product{{0.6, 0.8, 0.0, 0.0}, {0.0, 0.3, 0.0, 0.0}};
    EXPECT_NEAR(wootters_concurrence(product.density()).value, 0.0, 1e-12);
    EXPECT_NEAR(wootters_concurrence(Matrix4c::Identity() / 4.0).value, 0.0, 1e-12);
    EXPECT_NEAR(wootters_concurrence(Matrix4c::Zero()).value, 0.0, 0.0);
}

TEST(Wootters, MatchesSquareRootFormOnFullRankStates) {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 300; ++i) {
        const auto rho = oracle::random_density(rng, 4);
        EXPECT_NEAR(wootters_concurrence(rho).value, oracle::concurrence_full_rank(rho), 1e-9);
    }
}

TEST(Wootters, MatchesPureStateFormulaOnSurvivingBlocks) {
    std::mt19937_64 rng(32);
    for (int i = 0; i < 300; ++i) {
        const auto amp = oracle::random_amplitudes(rng);
        const auto p = support::random_params(rng);
        const double tl = 10.0 * oracle::uniform(rng), tr = 10.0 * oracle::uniform(rng);
        const auto psi = support::to_state(amp);
        const double ref = oracle::surviving_concurrence(amp, tl, tr, support::rates(p));
        EXPECT_NEAR(wootters_concurrence(evolve_bipartite(psi, tl, tr, p).ssss).value, ref, 1e-12);
        EXPECT_NEAR(concurrence_closed_form(psi, tl, tr, p), ref, 1e-12);
    }
}

TEST(Wootters, HomogeneousOfDegreeOne) {
    std::mt19937_64 rng(33);
    for (int i = 0; i < 50; ++i) {
        const auto rho = oracle::random_density(rng, 1 + static_cast<int>(rng() % 4));
        const double s = 0.01 + oracle::uniform(rng);
        EXPECT_NEAR(wootters_concurrence(s * rho).value, s * wootters_concurrence(rho).value, 1e-12);
        EXPECT_NEAR(normalized_concurrence(s * rho), wootters_concurrence(rho).value, 1e-12);
    }
    EXPECT_EQ(normalized_concurrence(Matrix4c::Zero()), 0.0);
}

TEST(Wootters, RejectsNonHermitian) {
    Matrix4c m = Matrix4c::Identity();
    m(0, 1) = 1.0;
    EXPECT_THROW(wootters_concurrence(m), DomainError);
}

TEST(Concurrence, QuotedStates) {
    EXPECT_NEAR(concurrence_closed_form(xi_state(), 0.0, 0.0, kKaon), 0.8378, 5e-4);
    EXPECT_NEAR(concurrence_closed_form(chi_state(), 0.0, 0.0, kKaon), 0.9403, 5e-4);
    // Decay factor exp(-Gamma (t_l + t_r)).
    const double c0 = concurrence_closed_form(xi_state(), 0.0, 0.0, kKaon);
    EXPECT_NEAR(concurrence_closed_form(xi_state(), 1.0, 2.0, kKaon), c0 * std::exp(-3.0 * kKaon.gamma_mean()), 1e-14);
    EXPECT_THROW(concurrence_closed_form(xi_state(), -1.0, 0.0, kKaon), DomainError);
}

TEST(EntanglementOfFormation, Endpoints) {
    EXPECT_NEAR(eof_from_concurrence(0.0), 0.0, 1e-15);
    EXPECT_NEAR(eof_from_concurrence(1.0), 1.0, 1e-15);
    // h((1 + sqrt(1 - C^2))/2) at C = 0.6: x = 0.9.
    EXPECT_NEAR(eof_from_concurrence(0.6), -0.9 * std::log2(0.9) - 0.1 * std::log2(0.1), 1e-14);
    double prev = 0.0;
    for (int i = 1; i <= 100; ++i) {
        const double e = eof_from_concurrence(i / 100.0);
        EXPECT_GT(e, prev);
        prev = e;
    }
    EXPECT_THROW(eof_from_concurrence(1.1), DomainError);
    EXPECT_THROW(eof_from_concurrence(-0.1), DomainError);
}

TEST(Ppt, EntangledIffNegative) {
    EXPECT_LT(ppt_min_eigenvalue(evolve_bipartite(bell_state("psi-"), 0.5, 0.5, kKaon)), -1e-3);
    const PureTwoKaonState product{{1.0, 0.0, 0.0, 0.0}, {}};
    EXPECT_GE(ppt_min_eigenvalue(evolve_bipartite(product, 0.5, 0.5, kKaon)), -1e-14);
    // For the surviving pure block, the PPT minimum is -C/2.
    std::mt19937_64 rng(34);
    for (int i = 0; i < 50; ++i) {
        const auto psi = support::random_state(rng);
        const auto sigma = evolve_bipartite(psi, 2.0 * oracle::uniform(rng), 2.0 * oracle::uniform(rng), kKaon);
        const double c = wootters_concurrence(sigma.ssss).value;
        EXPECT_NEAR(linalg::min_eigenvalue<4>(linalg::partial_transpose_right(sigma.ssss)), -c / 2.0, 1e-12);
    }
}
