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

// Initial states: SPDC pairs, the double-pass products and the states of the
// earlier post-selected swapping experiments.

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "fockswap/fock.hpp"

namespace fockswap {

struct SpdcParams {
    Amplitude tau = 0.0;  ///< pair amplitude ratio, |tau| < 1
    unsigned order = 1;   ///< highest pair number kept
};

inline void validate(const SpdcParams& p) {
    if (!(std::abs(p.tau) < 1.0)) throw std::invalid_argument("SPDC: |tau| must be < 1");
    if (p.order < 1) throw std::invalid_argument("SPDC: order must be >= 1");
}

/// Normalized sum_{n=0}^{order} tau^n |n, n> on modes (a, b). A cutoff of 0
/// means "use the order".
inline FockKet spdc_pair(const SpdcParams& p, const std::string& a, const std::string& b, unsigned cutoff = 0) {
    validate(p);
    if (cutoff == 0) cutoff = p.order;
    if (p.order > cutoff) throw std::invalid_argument("SPDC: order exceeds register cutoff");
    ModeRegister reg({a, b}, cutoff);
    FockKet::TermMap t;
    Amplitude w = 1.0;
    for (unsigned n = 0; n <= p.order; ++n) {
        t[{n, n}] += w;
        w *= p.tau;
    }
    return normalize(FockKet(std::move(reg), std::move(t)));
}

/// Pair source pumped twice: pair (1,4) times pair (2,3), register order (1,4,2,3).
inline FockKet double_pass_source(const SpdcParams& p, unsigned cutoff = 0) {
    return tensor_product(spdc_pair(p, "1", "4", cutoff), spdc_pair(p, "2", "3", cutoff));
}

/// (cos t |00> + sin t |11>)_{12} (cos t |00> + sin t |11>)_{34}
inline FockKet theta_product(double theta) {
    ModeRegister pair12({"1", "2"}, 1), pair34({"3", "4"}, 1);
    const double c = std::cos(theta), s = std::sin(theta);
    FockKet a(pair12, {{{0, 0}, c}, {{1, 1}, s}});
    FockKet b(pair34, {{{0, 0}, c}, {{1, 1}, s}});
    return normalize(tensor_product(a, b));
}

/// (|00> + eps |11>) / sqrt(1 + eps^2) on modes (a, b).
inline FockKet chi_state(double epsilon, const std::string& a, const std::string& b) {
    ModeRegister reg({a, b}, 1);
    return normalize(FockKet(reg, {{{0, 0}, 1.0}, {{1, 1}, epsilon}}));
}

// ---------------------------------------------------------------------------
// Polarization encoding: beam b is the mode pair ("bH", "bV"); |HV>_b is
// occupation (1, 1) and |2H>_b is occupation (2, 0).

inline std::vector<std::string> polarization_labels(const std::vector<std::string>& beams) {
    std::vector<std::string> out;
    for (const auto& b : beams) {
        out.push_back(b + "H");
        out.push_back(b + "V");
    }
    return out;
}

/// Relative weights of the three addends of the double-pass polarization state.
struct PolarizationWeights {
    double x = 1.0;    ///< four-photon product of two singlets, beams (1,3) and (2,4)
    double y13 = 1.0;  ///< both pairs emitted into beams 1 and 3
    double y24 = 1.0;  ///< both pairs emitted into beams 2 and 4
};

/// Normalized  w_x |X>_{1324} + w_13 |Y>_{13} + w_24 |Y>_{24}  on modes 1H,1V,...,4H,4V, with
///   |X>_{1324} = (|H>_1|V>_3 - |V>_1|H>_3)(|H>_2|V>_4 - |V>_2|H>_4)
///   |Y>_{ij}   = |2H>_i|2V>_j + |2V>_i|2H>_j - |HV>_i|HV>_j
inline FockKet polarization_double_pass(const PolarizationWeights& w = {}, unsigned cutoff = 2) {
    if (cutoff < 2) throw std::invalid_argument("polarization_double_pass: cutoff must be >= 2");
    ModeRegister reg(polarization_labels({"1", "2", "3", "4"}), cutoff);
    enum : std::size_t { h1, v1, h2, v2, h3, v3, h4, v4 };
    FockKet::TermMap t;
    auto add = [&](std::initializer_list<std::pair<std::size_t, unsigned>> photons, double amp) {
        Occupation o(8, 0u);
        for (auto [mode, n] : photons) o[mode] = n;
        t[o] += amp;
    };
    add({{h1, 1}, {v3, 1}, {h2, 1}, {v4, 1}}, w.x);
    add({{h1, 1}, {v3, 1}, {v2, 1}, {h4, 1}}, -w.x);
    add({{v1, 1}, {h3, 1}, {h2, 1}, {v4, 1}}, -w.x);
    add({{v1, 1}, {h3, 1}, {v2, 1}, {h4, 1}}, w.x);
    auto add_y = [&](std::size_t hi, std::size_t vi, std::size_t hj, std::size_t vj, double amp) {
        add({{hi, 2}, {vj, 2}}, amp);
        add({{vi, 2}, {hj, 2}}, amp);
        add({{hi, 1}, {vi, 1}, {hj, 1}, {vj, 1}}, -amp);
    };
    add_y(h1, v1, h3, v3, w.y13);
    add_y(h2, v2, h4, v4, w.y24);
    return normalize(FockKet(std::move(reg), std::move(t)));
}

/// The state behind the beam splitter of the vacuum/one-photon experiment, with
/// the printed amplitudes
///   |00>|11> + 1/2 (|10>|psi+> + |01>|psi->) + 1/sqrt2 |20>|00> - 1/sqrt2 |02>|00>
/// on modes (2', 3', 1, 4), then normalized (overall factor sqrt(2/5)).
inline FockKet vacuum_one_photon_postbs(unsigned cutoff = 2) {
    if (cutoff < 2) throw std::invalid_argument("vacuum_one_photon_postbs: cutoff must be >= 2");
    ModeRegister reg({"2'", "3'", "1", "4"}, cutoff);
    const double q = 1.0 / (2.0 * std::sqrt(2.0));
    const double h = 1.0 / std::sqrt(2.0);
    FockKet::TermMap t{
        {{0, 0, 1, 1}, 1.0},
        {{1, 0, 0, 1}, q}, {{1, 0, 1, 0}, q},   // |10> psi+_{14}
        {{0, 1, 0, 1}, q}, {{0, 1, 1, 0}, -q},  // |01> psi-_{14}
        {{2, 0, 0, 0}, h},
        {{0, 2, 0, 0}, -h},
    };
    return normalize(FockKet(std::move(reg), std::move(t)));
}

}  // namespace fockswap
