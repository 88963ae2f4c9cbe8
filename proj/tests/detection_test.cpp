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
#include <random>

#include "fockswap/detection.hpp"
#include "fockswap/optics.hpp"
#include "fockswap/sources.hpp"
#include "test_util.hpp"

namespace fs = fockswap;
using fs::Bell;
using fs::FockKet;
using fs::ModeRegister;
using fs::Outcome;

namespace {

// Each of n photons is seen independently with probability eta; the detector
// stays silent only if every photon is missed. Enumerates all 2^n loss patterns.
double binomial_loss_click(unsigned n, double eta) {
    double silent = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        double p = 1.0;
        for (unsigned i = 0; i < n; ++i) p *= (mask >> i & 1u) ? eta : 1.0 - eta;
        if (mask == 0) silent += p;
    }
    return 1.0 - silent;
}

}  // namespace

TEST(Povm, Weights) {
    EXPECT_DOUBLE_EQ(fs::povm_weight(0, 0.7, Outcome::click), 0.0);
    EXPECT_DOUBLE_EQ(fs::povm_weight(1, 0.5, Outcome::click), 0.5);
    for (unsigned n = 0; n <= 4; ++n)
        for (double eta : {0.0, 0.3, 0.5, 1.0})
            EXPECT_NEAR(fs::povm_weight(n, eta, Outcome::click), binomial_loss_click(n, eta), 1e-15);
    EXPECT_THROW(fs::validate(fs::ThresholdDetector{1.5}), std::invalid_argument);
    EXPECT_THROW(fs::validate(fs::ThresholdDetector{-0.1}), std::invalid_argument);
}

TEST(Measure, SplitPhotonClickOnFirstMode) {
    auto psi = fs::bell_state(Bell::psi_plus, "1", "2");
    auto c = fs::measure_pattern(psi, fs::make_pattern({{"1", Outcome::click}}, 1.0));
    EXPECT_NEAR(c.probability, 0.5, 1e-15);
    ASSERT_EQ(c.ensemble.members().size(), 1u);
    EXPECT_EQ(c.ensemble.modes().labels(), std::vector<std::string>{"2"});
    EXPECT_NEAR(std::abs(c.ensemble.members()[0].state.amplitude({0})), 1.0, 1e-15);
}

TEST(Measure, SinglePhotonHalfEfficiency) {
    auto one = FockKet::basis(ModeRegister({"a"}, 1), {1});
    EXPECT_NEAR(fs::measure_pattern(one, fs::make_pattern({{"a", Outcome::click}}, 0.5)).probability, 0.5, 1e-15);
}

TEST(Measure, TwoPhotonsHalfEfficiency) {
    auto two = FockKet::basis(ModeRegister({"a"}, 2), {2});
    EXPECT_NEAR(fs::measure_pattern(two, fs::make_pattern({{"a", Outcome::click}}, 0.5)).probability,
                binomial_loss_click(2, 0.5), 1e-15);
    EXPECT_NEAR(binomial_loss_click(2, 0.5), 0.75, 1e-15);
}

TEST(Measure, ImpossibleIsFlagged) {
    auto vac = FockKet::vacuum(ModeRegister({"a", "b"}, 1));
    auto c = fs::measure_pattern(vac, fs::make_pattern({{"a", Outcome::click}}, 1.0));
    EXPECT_TRUE(c.impossible);
    EXPECT_EQ(c.probability, 0.0);
    EXPECT_TRUE(c.ensemble.empty());
}

TEST(Measure, RejectsBadPatterns) {
    auto psi = fs::bell_state(Bell::psi_plus, "1", "2");
    EXPECT_THROW(fs::measure_pattern(psi, fs::make_pattern({{"1", Outcome::click}, {"1", Outcome::silent}}, 1.0)),
                 std::invalid_argument);
    EXPECT_THROW(fs::measure_pattern(psi, fs::make_pattern({{"9", Outcome::click}}, 1.0)), std::invalid_argument);
    EXPECT_THROW(fs::measure_pattern(psi.scaled(2.0), fs::make_pattern({{"1", Outcome::click}}, 1.0)),
                 std::invalid_argument);
}

TEST(Measure, DistinctMeasuredOccupationsAreIncoherent) {
    // (|1>_a|0>_b + |2>_a|1>_b)/sqrt2 with a click on a leaves a 50/50 mixture on b.
    ModeRegister r({"a", "b"}, 2);
    const double h = 1.0 / std::sqrt(2.0);
    FockKet k(r, {{{1, 0}, h}, {{2, 1}, h}});
    auto c = fs::measure_pattern(k, fs::make_pattern({{"a", Outcome::click}}, 1.0));
    EXPECT_EQ(c.ensemble.members().size(), 2u);
    auto plus = fs::normalize(FockKet(ModeRegister({"b"}, 2), {{{0}, 1.0}, {{1}, 1.0}}));
    EXPECT_NEAR(fs::fidelity(c.ensemble, plus), 0.5, 1e-15);
}

TEST(Measure, SharedMeasuredOccupationStaysCoherent) {
    // (|1>_a|0>_b + |1>_a|1>_b)/sqrt2: one branch key, so the conditional is a pure superposition.
    ModeRegister r({"a", "b"}, 1);
    const double h = 1.0 / std::sqrt(2.0);
    FockKet k(r, {{{1, 0}, h}, {{1, 1}, h}});
    auto c = fs::measure_pattern(k, fs::make_pattern({{"a", Outcome::click}}, 0.6));
    EXPECT_NEAR(c.probability, 0.6, 1e-15);
    auto plus = fs::normalize(FockKet(ModeRegister({"b"}, 1), {{{0}, 1.0}, {{1}, 1.0}}));
    EXPECT_NEAR(fs::fidelity(c.ensemble, plus), 1.0, 1e-15);
}

TEST(Measure, DiscardTracesOut) {
    // Tracing the partner of a Bell pair leaves a mixture.
    auto psi = fs::tensor_product(fs::bell_state(Bell::psi_plus, "a", "b"), FockKet::basis(ModeRegister({"c"}, 1), {1}));
    auto c = fs::measure_pattern(psi, fs::make_pattern({{"c", Outcome::click}}, 1.0), {"b"});
    EXPECT_NEAR(c.probability, 1.0, 1e-15);
    EXPECT_EQ(c.ensemble.members().size(), 2u);
    EXPECT_EQ(c.ensemble.modes().labels(), std::vector<std::string>{"a"});
}

TEST(Measure, DoublePassHeraldsBellState) {
    // Pair sources on (1,4),(2,3), balanced BS on (1,2), D1 click and D2 silent.
    auto s = fs::apply_mode_unitary(fs::double_pass_source({std::sqrt(1e-3), 1}), fs::balanced_bs(), {"1", "2"});
    auto c = fs::measure_pattern(s, fs::make_pattern({{"1", Outcome::click}, {"2", Outcome::silent}}, 1.0));
    auto ens = fs::reorder(c.ensemble, {"3", "4"});
    auto plus = fs::bell_state(Bell::psi_plus, ModeRegister({"3", "4"}, 1), "3", "4");
    EXPECT_GT(fs::fidelity(ens, plus), 0.999);
}

TEST(Coincidence, SplitPhotonGoesOneWay) {
    // psi+ through a balanced BS returns the photon to a single port.
    auto psi = fs::bell_state(Bell::psi_plus, "3", "4");
    auto out = fs::apply_mode_unitary(psi, fs::balanced_bs(), {"3", "4"});
    auto t = fs::coincidence_table(out, {{"D3", {"3"}}, {"D4", {"4"}}}, 1.0);
    EXPECT_NEAR(t.probability({{"D3", Outcome::click}}), 1.0, 1e-15);
    EXPECT_NEAR(t.probability({{"D4", Outcome::click}}), 0.0, 1e-15);
    EXPECT_EQ(t.label(2), "10");
}

TEST(Coincidence, ZeroEfficiencyIsSilent) {
    auto psi = fs::tensor_product(fs::bell_state(Bell::psi_plus, "1", "2"), fs::bell_state(Bell::psi_plus, "3", "4"));
    auto t = fs::coincidence_table(psi, {{"D1", {"1"}}, {"D2", {"2"}}, {"D3", {"3"}}}, 0.0);
    EXPECT_NEAR(t.joint()[0], 1.0, 1e-15);
    EXPECT_FALSE(t.conditional({{"D1", Outcome::click}}, {{"D2", Outcome::click}}).has_value());
}

TEST(Coincidence, ConditionalClickEqualsEfficiency) {
    // Photon pair (1: herald, 3/4: split), herald clicks, analyzer recombines onto 3.
    ModeRegister r({"1", "3", "4"}, 1);
    const double h = 1.0 / std::sqrt(2.0);
    FockKet k(r, {{{1, 1, 0}, h}, {{1, 0, 1}, h}});
    auto out = fs::apply_mode_unitary(k, fs::balanced_bs(), {"3", "4"});
    auto t = fs::coincidence_table(out, {{"D1", {"1"}}, {"D3", {"3"}}, {"D4", {"4"}}}, 0.8);
    EXPECT_NEAR(*t.conditional({{"D3", Outcome::click}}, {{"D1", Outcome::click}}), 0.8, 1e-15);
    EXPECT_NEAR(*t.conditional({{"D4", Outcome::click}}, {{"D1", Outcome::click}}), 0.0, 1e-15);
}

TEST(Coincidence, RejectsSharedModes) {
    auto psi = fs::bell_state(Bell::psi_plus, "1", "2");
    EXPECT_THROW(fs::coincidence_table(psi, {{"A", {"1"}}, {"B", {"1"}}}, 1.0), std::invalid_argument);
}

// ---- properties ----

TEST(Properties, ClickPlusSilentIsOne) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> eta(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        ModeRegister r(fs::testing::mode_names(3), 1 + trial % 3);
        auto k = fs::testing::random_ket(rng, r, 6);
        const std::string mode = r.labels()[trial % 3];
        const double e = eta(rng);
        const double pc = fs::measure_pattern(k, fs::make_pattern({{mode, Outcome::click}}, e)).probability;
        const double ps = fs::measure_pattern(k, fs::make_pattern({{mode, Outcome::silent}}, e)).probability;
        EXPECT_NEAR(pc + ps, 1.0, 1e-12);
    }
}

TEST(Properties, AllPatternsSumToOne) {
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> eta(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        ModeRegister r(fs::testing::mode_names(4), 1 + trial % 3);
        auto k = fs::testing::random_ket(rng, r, 8);
        const double e = eta(rng);
        double total = 0.0;
        for (unsigned pat = 0; pat < 8; ++pat) {
            std::vector<std::pair<std::string, Outcome>> o;
            for (unsigned d = 0; d < 3; ++d) o.emplace_back(r.labels()[d], (pat >> d & 1u) ? Outcome::click : Outcome::silent);
            total += fs::measure_pattern(k, fs::make_pattern(o, e)).probability;
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
        auto t = fs::coincidence_table(k, {{"A", {"m0"}}, {"B", {"m1", "m2"}}, {"C", {"m3"}}}, e);
        double joint = 0.0;
        for (double p : t.joint()) joint += p;
        EXPECT_NEAR(joint, 1.0, 1e-12);
    }
}

TEST(Properties, ClickProbabilityGrowsWithEfficiency) {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 50; ++trial) {
        ModeRegister r(fs::testing::mode_names(2), 3);
        auto k = fs::testing::random_ket(rng, r, 6);
        double last = -1.0;
        for (double e = 0.0; e <= 1.0 + 1e-12; e += 0.1) {
            const double p = fs::measure_pattern(k, fs::make_pattern({{"m0", Outcome::click}}, std::min(e, 1.0))).probability;
            EXPECT_GE(p, last - 1e-15);
            last = p;
        }
    }
}

TEST(Properties, UnitEfficiencyIsProjective) {
    // With eta = 1, silent projects exactly onto vacuum of the measured mode.
    std::mt19937_64 rng(34);
    for (int trial = 0; trial < 50; ++trial) {
        ModeRegister r(fs::testing::mode_names(3), 2);
        auto k = fs::testing::random_ket(rng, r, 8);
        double expected = 0.0;
        for (const auto& [occ, amp] : k.terms())
            if (occ[0] == 0) expected += std::norm(amp);
        auto c = fs::measure_pattern(k, fs::make_pattern({{"m0", Outcome::silent}}, 1.0));
        EXPECT_NEAR(c.probability, expected, 1e-14);
        if (!c.impossible) EXPECT_EQ(c.ensemble.members().size(), 1u);
    }
}

TEST(Properties, ConditionalEnsemblesAreNormalized) {
    std::mt19937_64 rng(35);
    for (int trial = 0; trial < 100; ++trial) {
        ModeRegister r(fs::testing::mode_names(4), 2);
        auto k = fs::testing::random_ket(rng, r, 8);
        auto c = fs::measure_pattern(k, fs::make_pattern({{"m1", Outcome::click}, {"m3", Outcome::silent}}, 0.7), {"m2"});
        EXPECT_GE(c.probability, 0.0);
        EXPECT_LE(c.probability, 1.0 + 1e-12);
        double w = 0.0;
        for (const auto& m : c.ensemble.members()) {
            w += m.weight;
            EXPECT_NEAR(fs::norm(m.state), 1.0, 1e-12);
        }
        if (!c.impossible) EXPECT_NEAR(w, 1.0, 1e-12);
    }
}
