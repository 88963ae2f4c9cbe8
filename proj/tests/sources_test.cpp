// Copyright 2026 The fockswap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fockswap/sources.hpp"

namespace fs = fockswap;
using fs::Amplitude;
using fs::FockKet;

TEST(Spdc, OrderOne) {
    const double tau = 0.3;
    auto k = fs::spdc_pair({tau, 1}, "a", "b");
    const double n = std::sqrt(1.0 + tau * tau);
    EXPECT_NEAR(k.amplitude({0, 0}).real(), 1.0 / n, 1e-15);
    EXPECT_NEAR(k.amplitude({1, 1}).real(), tau / n, 1e-15);
    EXPECT_EQ(k.term_count(), 2u);
}

TEST(Spdc, ZeroTauIsVacuum) {
    auto k = fs::spdc_pair({0.0, 2}, "a", "b");
    EXPECT_EQ(k.term_count(), 1u);
    EXPECT_EQ(k.amplitude({0, 0}), Amplitude(1.0));
}

TEST(Spdc, OrderTwoGeometricWeights) {
    // Independent normalization of the truncated geometric series.
    const double raw[] = {1.0, 0.1, 0.01};
    double s = 0.0;
    for (double r : raw) s += r * r;
    auto k = fs::spdc_pair({0.1, 2}, "a", "b");
    for (unsigned n = 0; n < 3; ++n) EXPECT_NEAR(k.amplitude({n, n}).real(), raw[n] / std::sqrt(s), 1e-15);
}

TEST(Spdc, ComplexTauKeepsPhase) {
    const Amplitude tau{0.0, 0.2};
    auto k = fs::spdc_pair({tau, 1}, "a", "b");
    EXPECT_NEAR(std::arg(k.amplitude({1, 1})), std::numbers::pi / 2, 1e-15);
}

TEST(Spdc, RejectsBadParams) {
    EXPECT_THROW(fs::spdc_pair({1.0, 1}, "a", "b"), std::invalid_argument);
    EXPECT_THROW(fs::spdc_pair({0.1, 0}, "a", "b"), std::invalid_argument);
    EXPECT_THROW(fs::spdc_pair({0.1, 3}, "a", "b", 2), std::invalid_argument);
}

TEST(DoublePass, ModesAndTerms) {
    auto k = fs::double_pass_source({0.1, 1});
    EXPECT_EQ(k.modes().labels(), (std::vector<std::string>{"1", "4", "2", "3"}));
    EXPECT_EQ(k.term_count(), 4u);
    EXPECT_NEAR(fs::norm(k), 1.0, 1e-15);
    auto v = fs::double_pass_source({0.0, 1});
    EXPECT_EQ(v.term_count(), 1u);
    EXPECT_EQ(v.amplitude({0, 0, 0, 0}), Amplitude(1.0));
}

TEST(DoublePass, Factorizes) {
    // <nn|_{23} applied to the source leaves (tau^n / N) times the (1,4) pair state.
    for (unsigned order : {1u, 2u, 3u}) {
        const fs::SpdcParams p{0.2, order};
        auto src = fs::double_pass_source(p, 3);
        auto pair = fs::spdc_pair(p, "1", "4", 3);
        for (unsigned n = 0; n <= order; ++n) {
            auto bra = FockKet::basis(fs::ModeRegister({"2", "3"}, 3), {n, n});
            auto rest = fs::contract(bra, src);
            const Amplitude expected = pair.amplitude({n, n});
            auto ov = fs::inner_product(pair, rest);
            EXPECT_NEAR(std::abs(ov - expected), 0.0, 1e-15);
            EXPECT_NEAR(fs::norm(rest), std::abs(expected), 1e-15);
        }
    }
}

TEST(Theta, Amplitudes) {
    const double t = 0.1, c = std::cos(t), s = std::sin(t);
    auto k = fs::theta_product(t);
    EXPECT_NEAR(k.amplitude({0, 0, 0, 0}).real(), c * c, 1e-15);
    EXPECT_NEAR(k.amplitude({0, 0, 1, 1}).real(), c * s, 1e-15);
    EXPECT_NEAR(k.amplitude({1, 1, 0, 0}).real(), s * c, 1e-15);
    EXPECT_NEAR(k.amplitude({1, 1, 1, 1}).real(), s * s, 1e-15);
    auto z = fs::theta_product(0.0);
    EXPECT_EQ(z.term_count(), 1u);
    auto q = fs::theta_product(std::numbers::pi / 4);
    for (const auto& [occ, amp] : q.terms()) EXPECT_NEAR(amp.real(), 0.5, 1e-15);
    EXPECT_EQ(q.term_count(), 4u);
}

TEST(Chi, Examples) {
    auto z = fs::chi_state(0.0, "a", "b");
    EXPECT_EQ(z.term_count(), 1u);
    auto one = fs::chi_state(1.0, "a", "b");
    EXPECT_NEAR(std::abs(fs::inner_product(fs::bell_state(fs::Bell::phi_plus, "a", "b"), one)), 1.0, 1e-15);
    const double e = 0.3;
    EXPECT_NEAR(fs::chi_state(e, "a", "b").amplitude({1, 1}).real(), e / std::sqrt(1 + e * e), 1e-15);
}

TEST(Polarization, TermStructure) {
    auto k = fs::polarization_double_pass();
    EXPECT_EQ(k.term_count(), 10u);
    EXPECT_NEAR(fs::norm(k), 1.0, 1e-15);
    // Modes: 1H 1V 2H 2V 3H 3V 4H 4V. Sum of squared raw amplitudes is 4 + 3 + 3.
    const double n = std::sqrt(10.0);
    EXPECT_NEAR(k.amplitude({1, 0, 1, 0, 0, 1, 0, 1}).real(), 1.0 / n, 1e-15);
    EXPECT_NEAR(k.amplitude({1, 0, 0, 1, 0, 1, 1, 0}).real(), -1.0 / n, 1e-15);
    EXPECT_NEAR(k.amplitude({0, 1, 1, 0, 1, 0, 0, 1}).real(), -1.0 / n, 1e-15);
    EXPECT_NEAR(k.amplitude({0, 1, 0, 1, 1, 0, 1, 0}).real(), 1.0 / n, 1e-15);
    // |Y>_13: (+, +, -)
    EXPECT_NEAR(k.amplitude({2, 0, 0, 0, 0, 2, 0, 0}).real(), 1.0 / n, 1e-15);
    EXPECT_NEAR(k.amplitude({0, 2, 0, 0, 2, 0, 0, 0}).real(), 1.0 / n, 1e-15);
    EXPECT_NEAR(k.amplitude({1, 1, 0, 0, 1, 1, 0, 0}).real(), -1.0 / n, 1e-15);
    for (const auto& [occ, amp] : k.terms()) EXPECT_EQ(fs::total_photons(occ), 4u);
}

TEST(Polarization, WithoutY) {
    auto k = fs::polarization_double_pass({1.0, 0.0, 0.0});
    EXPECT_EQ(k.term_count(), 4u);
    EXPECT_THROW(fs::polarization_double_pass({}, 1), std::invalid_argument);
}

TEST(VacuumOnePhoton, PrintedBranchesNormalized) {
    auto k = fs::vacuum_one_photon_postbs();
    const double scale = std::sqrt(2.0 / 5.0);  // 1 / sqrt(1 + 1/4 + 1/4 + 1/2 + 1/2)
    EXPECT_NEAR(fs::norm(k), 1.0, 1e-15);
    EXPECT_NEAR(k.amplitude({0, 0, 1, 1}).real(), scale, 1e-15);
    EXPECT_NEAR(k.amplitude({2, 0, 0, 0}).real(), scale / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(k.amplitude({0, 2, 0, 0}).real(), -scale / std::sqrt(2.0), 1e-15);
    // <10|_{2'3'} leaves (1/2) psi+ on (1,4) before normalization.
    auto rest = fs::contract(FockKet::basis(fs::ModeRegister({"2'", "3'"}, 2), {1, 0}), k);
    auto psi = fs::bell_state(fs::Bell::psi_plus, fs::ModeRegister({"1", "4"}, 2), "1", "4");
    EXPECT_NEAR(std::abs(fs::inner_product(psi, rest)), 0.5 * scale, 1e-15);
    for (const auto& [occ, amp] : k.terms()) EXPECT_EQ(fs::total_photons(occ), 2u);
}

TEST(Properties, ConstructorsAreNormalized) {
    for (double t : {0.0, 0.05, 0.4, 0.9})
        for (unsigned o : {1u, 2u, 3u}) EXPECT_TRUE(fs::is_normalized(fs::double_pass_source({t, o})));
    for (double th : {0.0, 0.3, 1.2}) EXPECT_TRUE(fs::is_normalized(fs::theta_product(th)));
    for (double e : {0.0, 0.2, 5.0}) EXPECT_TRUE(fs::is_normalized(fs::chi_state(e, "a", "b")));
    EXPECT_TRUE(fs::is_normalized(fs::polarization_double_pass({0.3, 2.0, 0.1})));
    EXPECT_TRUE(fs::is_normalized(fs::vacuum_one_photon_postbs(3)));
}
