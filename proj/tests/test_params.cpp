#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "kaonbell/params.hpp"

using namespace kaonbell;

TEST(Presets, KaonPaperConstants) {
    const auto p = preset("kaon-paper");
    EXPECT_EQ(p.gamma_S, 1.0);
    EXPECT_DOUBLE_EQ(p.gamma_L, 1.0 / 579.8);
    EXPECT_EQ(p.delta_m, 0.5);
    EXPECT_EQ(p.label, "kaon-paper");
}

TEST(Presets, LongLifetimeMatchesPurityMinimumTime) {
    // ln2 / Gamma_L is where a K0 beam is least pure; quoted as 401.881.
    EXPECT_NEAR(std::log(2.0) / preset("kaon-paper").gamma_L, 401.881, 0.01);
}

TEST(Presets, OthersAndUnknown) {
    EXPECT_DOUBLE_EQ(preset("kaon-pdg").gamma_L, 1.0 / 571.3);
    EXPECT_DOUBLE_EQ(preset("kaon-pdg").delta_m, 0.4739);
    const auto b = preset("b-meson");
    EXPECT_EQ(b.gamma_S, b.gamma_L);
    EXPECT_DOUBLE_EQ(b.delta_m, 0.77);
    EXPECT_EQ(preset("custom").label, "custom");
    EXPECT_THROW(preset("kaon"), ConfigurationError);
    EXPECT_THROW(preset(""), ConfigurationError);
}

TEST(Presets, DerivedQuantities) {
    const auto p = make_parameters(2.0, 0.5, 1.0);
    EXPECT_DOUBLE_EQ(p.gamma_mean(), 1.25);
    EXPECT_DOUBLE_EQ(p.tau_S(), 0.5);
    EXPECT_DOUBLE_EQ(p.tau_L(), 2.0);
    EXPECT_DOUBLE_EQ(p.mixing_ratio(), 0.8);
}

TEST(Validation, RejectsUnphysicalConstants) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(make_parameters(0.0, 0.0, 0.5), ConfigurationError);
    EXPECT_THROW(make_parameters(1.0, -0.1, 0.5), ConfigurationError);
    EXPECT_THROW(make_parameters(1.0, 2.0, 0.5), ConfigurationError);
    EXPECT_THROW(make_parameters(1.0, 0.1, -0.5), ConfigurationError);
    EXPECT_THROW(make_parameters(nan, 0.1, 0.5), ConfigurationError);
    EXPECT_THROW(make_parameters(1.0, 0.1, std::numeric_limits<double>::infinity()), ConfigurationError);
    EXPECT_NO_THROW(make_parameters(1.0, 1.0, 0.0));
}

TEST(Rescale, MultipliesEveryRate) {
    const auto p = preset("kaon-paper").rescaled(3.0);
    EXPECT_DOUBLE_EQ(p.gamma_S, 3.0);
    EXPECT_DOUBLE_EQ(p.gamma_L, 3.0 / 579.8);
    EXPECT_DOUBLE_EQ(p.delta_m, 1.5);
    EXPECT_DOUBLE_EQ(p.mixing_ratio(), preset("kaon-paper").mixing_ratio());
    EXPECT_THROW(preset("kaon-paper").rescaled(0.0), DomainError);
}
