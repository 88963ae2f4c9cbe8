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

// Brute-force reference engine over the full truncated Fock space.
//
// Everything here enumerates the (cutoff+1)^m basis explicitly and shares no
// arithmetic with the sparse engine: mode unitaries are lifted through matrix
// permanents, measurements are explicit sums over basis indices. It exists to
// cross-check the sparse code on small registers (m <= 8, cutoff <= 3).

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fockswap/detection.hpp"
#include "fockswap/fock.hpp"
#include "fockswap/optics.hpp"

namespace fockswap::oracle {

inline constexpr std::size_t kMaxModes = 8;
inline constexpr unsigned kMaxCutoff = 3;

/// Full amplitude array; index is mixed radix (cutoff+1) with the first mode
/// most significant.
struct DenseState {
    ModeRegister modes;
    std::vector<Amplitude> amplitudes;

    std::size_t base() const { return modes.cutoff() + 1; }

    Occupation occupation(std::size_t index) const {
        Occupation occ(modes.size());
        for (std::size_t i = modes.size(); i-- > 0;) {
            occ[i] = static_cast<unsigned>(index % base());
            index /= base();
        }
        return occ;
    }

    std::size_t index(const Occupation& occ) const {
        std::size_t idx = 0;
        for (auto n : occ) {
            if (n > modes.cutoff()) throw std::out_of_range("dense oracle: occupation above cutoff");
            idx = idx * base() + n;
        }
        return idx;
    }
};

inline void check_limits(const ModeRegister& reg) {
    if (reg.size() > kMaxModes || reg.cutoff() > kMaxCutoff)
        throw std::length_error("dense oracle: register exceeds 8 modes or cutoff 3");
}

inline DenseState zero_state(const ModeRegister& reg) {
    check_limits(reg);
    std::size_t dim = 1;
    for (std::size_t i = 0; i < reg.size(); ++i) dim *= reg.cutoff() + 1;
    return DenseState{reg, std::vector<Amplitude>(dim)};
}

/// Embeds a sparse ket; `cutoff` may enlarge the dense register.
inline DenseState to_dense(const FockKet& ket, unsigned cutoff = 0) {
    auto d = zero_state(ket.modes().with_cutoff(std::max(cutoff, ket.modes().cutoff())));
    for (const auto& [occ, amp] : ket.terms()) d.amplitudes[d.index(occ)] = amp;
    return d;
}

inline double dense_norm(const DenseState& s) {
    double t = 0.0;
    for (const auto& a : s.amplitudes) t += std::norm(a);
    return std::sqrt(t);
}

inline Amplitude dense_inner(const DenseState& a, const DenseState& b) {
    if (a.modes.labels() != b.modes.labels() || a.amplitudes.size() != b.amplitudes.size())
        throw std::invalid_argument("dense oracle: register mismatch");
    Amplitude s{};
    for (std::size_t i = 0; i < a.amplitudes.size(); ++i) s += std::conj(a.amplitudes[i]) * b.amplitudes[i];
    return s;
}

/// Permanent by summing over all permutations.
inline Amplitude permanent(const std::vector<std::vector<Amplitude>>& a) {
    const std::size_t n = a.size();
    if (n == 0) return 1.0;
    if (n > 10) throw std::length_error("dense oracle: permanent too large");
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Amplitude total{};
    do {
        Amplitude p = 1.0;
        for (std::size_t i = 0; i < n; ++i) p *= a[i][perm[i]];
        total += p;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

/// <out|U|in> on the acted modes: Perm(U[out rows, in columns]) / sqrt(prod out! prod in!).
inline Amplitude transition_amplitude(const ModeUnitary& u, const Occupation& in, const Occupation& out) {
    std::vector<std::size_t> rows, cols;
    double fact = 1.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        rows.insert(rows.end(), out[i], i);
        fact *= std::tgamma(out[i] + 1.0);
    }
    for (std::size_t i = 0; i < in.size(); ++i) {
        cols.insert(cols.end(), in[i], i);
        fact *= std::tgamma(in[i] + 1.0);
    }
    if (rows.size() != cols.size()) return 0.0;
    std::vector<std::vector<Amplitude>> sub(rows.size(), std::vector<Amplitude>(cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c) sub[r][c] = u(rows[r], cols[c]);
    return permanent(sub) / std::sqrt(fact);
}

/// Matrix-vector product with the photon-number-blocked lift of `u`.
/// Throws if amplitude would leak above the cutoff.
inline DenseState dense_apply(const DenseState& state, const ModeUnitary& u, const std::vector<std::string>& modes) {
    check_limits(state.modes);
    if (modes.size() != u.size()) throw std::invalid_argument("dense_apply: mode count does not match unitary size");
    const auto acted = state.modes.indices_of(modes);
    const std::size_t k = acted.size();
    const unsigned cut = state.modes.cutoff();

    // All occupations of the acted modes within the cutoff.
    std::vector<Occupation> local;
    {
        std::size_t count = 1;
        for (std::size_t i = 0; i < k; ++i) count *= cut + 1;
        for (std::size_t c = 0; c < count; ++c) {
            Occupation o(k);
            std::size_t x = c;
            for (std::size_t i = k; i-- > 0;) {
                o[i] = static_cast<unsigned>(x % (cut + 1));
                x /= cut + 1;
            }
            local.push_back(o);
        }
    }
    // Lifted matrix on the acted subspace.
    std::vector<std::vector<Amplitude>> lift(local.size(), std::vector<Amplitude>(local.size()));
    std::vector<double> column_weight(local.size(), 0.0);
    for (std::size_t c = 0; c < local.size(); ++c) {
        const unsigned nc = std::accumulate(local[c].begin(), local[c].end(), 0u);
        for (std::size_t r = 0; r < local.size(); ++r) {
            if (std::accumulate(local[r].begin(), local[r].end(), 0u) != nc) continue;
            lift[r][c] = transition_amplitude(u, local[c], local[r]);
            column_weight[c] += std::norm(lift[r][c]);
        }
    }

    DenseState out = zero_state(state.modes);
    for (std::size_t i = 0; i < state.amplitudes.size(); ++i) {
        const Amplitude a = state.amplitudes[i];
        if (a == Amplitude{}) continue;
        Occupation occ = state.occupation(i);
        Occupation in(k);
        for (std::size_t j = 0; j < k; ++j) in[j] = occ[acted[j]];
        const std::size_t c = std::find(local.begin(), local.end(), in) - local.begin();
        if (std::abs(column_weight[c] - 1.0) > 1e-12)
            throw std::out_of_range("dense_apply: output exceeds the dense cutoff");
        for (std::size_t r = 0; r < local.size(); ++r) {
            if (lift[r][c] == Amplitude{}) continue;
            Occupation o = occ;
            for (std::size_t j = 0; j < k; ++j) o[acted[j]] = local[r][j];
            out.amplitudes[out.index(o)] += lift[r][c] * a;
        }
    }
    return out;
}

inline DenseState dense_relabel(DenseState s, const std::vector<std::pair<std::string, std::string>>& renames) {
    auto labels = s.modes.labels();
    for (const auto& [from, to] : renames) labels[s.modes.index_of(from)] = to;
    s.modes = ModeRegister(std::move(labels), s.modes.cutoff());
    return s;
}

/// Mixture produced by conditioning a dense state.
struct DenseOutcome {
    double probability = 0.0;
    std::vector<std::pair<double, DenseState>> members;  ///< (weight, normalized state)
    bool impossible = false;
};

namespace detail {

/// Groups amplitudes by the occupation of `keyed` modes, each group weighted by
/// `weight(occupation)`, and returns the normalized mixture on the other modes.
template <class Weight>
DenseOutcome condition(const DenseState& state, const std::vector<std::size_t>& keyed, Weight&& weight) {
    std::vector<std::string> kept_labels;
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < state.modes.size(); ++i) {
        if (std::find(keyed.begin(), keyed.end(), i) == keyed.end()) {
            kept.push_back(i);
            kept_labels.push_back(state.modes.labels()[i]);
        }
    }
    const ModeRegister kept_reg(kept_labels, state.modes.cutoff());
    std::vector<std::pair<Occupation, DenseState>> groups;
    std::vector<double> group_weight;
    for (std::size_t i = 0; i < state.amplitudes.size(); ++i) {
        if (state.amplitudes[i] == Amplitude{}) continue;
        const Occupation occ = state.occupation(i);
        Occupation key, rest;
        for (auto j : keyed) key.push_back(occ[j]);
        for (auto j : kept) rest.push_back(occ[j]);
        auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == key; });
        if (it == groups.end()) {
            groups.emplace_back(key, zero_state(kept_reg));
            group_weight.push_back(weight(key));
            it = groups.end() - 1;
        }
        it->second.amplitudes[it->second.index(rest)] += state.amplitudes[i];
    }
    DenseOutcome out;
    std::vector<double> probs;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const double n = dense_norm(groups[g].second);
        probs.push_back(group_weight[g] * n * n);
        out.probability += probs.back();
    }
    if (out.probability <= kImpossibleProbability) {
        out.impossible = true;
        return out;
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (probs[g] <= 0.0) continue;
        DenseState s = groups[g].second;
        const double n = dense_norm(s);
        for (auto& a : s.amplitudes) a /= n;
        out.members.emplace_back(probs[g] / out.probability, std::move(s));
    }
    return out;
}

}  // namespace detail

/// Threshold POVM by explicit summation; modes in `discard` are traced out.
inline DenseOutcome dense_measure(const DenseState& state, const ClickPattern& pattern,
                                  const std::vector<std::string>& discard = {}) {
    check_limits(state.modes);
    std::vector<std::size_t> keyed;
    std::vector<std::size_t> sizes;
    for (const auto& a : pattern.assignments) {
        for (const auto& m : a.modes) keyed.push_back(state.modes.index_of(m));
        sizes.push_back(a.modes.size());
    }
    for (const auto& m : discard) keyed.push_back(state.modes.index_of(m));
    auto weight = [&](const Occupation& key) {
        double w = 1.0;
        std::size_t pos = 0;
        for (std::size_t d = 0; d < sizes.size(); ++d) {
            unsigned n = 0;
            for (std::size_t j = 0; j < sizes[d]; ++j) n += key[pos + j];
            pos += sizes[d];
            double miss = 1.0;
            for (unsigned p = 0; p < n; ++p) miss *= 1.0 - pattern.assignments[d].detector.eta;
            w *= pattern.assignments[d].outcome == Outcome::click ? 1.0 - miss : miss;
        }
        return w;
    };
    return detail::condition(state, keyed, weight);
}

/// Projects `mode` onto exactly `photons` photons (a number-resolving detector).
inline DenseOutcome number_resolving_measure(const DenseState& state, const std::string& mode, unsigned photons,
                                             const std::vector<std::string>& discard = {}) {
    check_limits(state.modes);
    std::vector<std::size_t> keyed{state.modes.index_of(mode)};
    for (const auto& m : discard) keyed.push_back(state.modes.index_of(m));
    return detail::condition(state, keyed, [&](const Occupation& key) { return key[0] == photons ? 1.0 : 0.0; });
}

/// Ideal projection of the modes of `bra` onto `bra`; normalized result and its probability.
inline DenseOutcome dense_project(const DenseState& state, const DenseState& bra) {
    std::vector<std::size_t> keyed;
    for (const auto& l : bra.modes.labels()) keyed.push_back(state.modes.index_of(l));
    // Treat the projector as a rank-one POVM: contract explicitly.
    std::vector<std::string> kept_labels;
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < state.modes.size(); ++i) {
        if (std::find(keyed.begin(), keyed.end(), i) == keyed.end()) {
            kept.push_back(i);
            kept_labels.push_back(state.modes.labels()[i]);
        }
    }
    DenseState rest = zero_state(ModeRegister(kept_labels, state.modes.cutoff()));
    for (std::size_t i = 0; i < state.amplitudes.size(); ++i) {
        if (state.amplitudes[i] == Amplitude{}) continue;
        const Occupation occ = state.occupation(i);
        Occupation sub, r;
        for (auto j : keyed) sub.push_back(occ[j]);
        for (auto j : kept) r.push_back(occ[j]);
        bool inside = std::all_of(sub.begin(), sub.end(), [&](unsigned n) { return n <= bra.modes.cutoff(); });
        if (!inside) continue;
        rest.amplitudes[rest.index(r)] += std::conj(bra.amplitudes[bra.index(sub)]) * state.amplitudes[i];
    }
    DenseOutcome out;
    const double n = dense_norm(rest);
    out.probability = n * n;
    if (out.probability <= kImpossibleProbability) {
        out.impossible = true;
        return out;
    }
    for (auto& a : rest.amplitudes) a /= n;
    out.members.emplace_back(1.0, std::move(rest));
    return out;
}

/// sum_i w_i |<target|psi_i>|^2, with the target embedded at the members' cutoff.
inline double dense_fidelity(const DenseOutcome& outcome, const FockKet& target) {
    double f = 0.0;
    for (const auto& [w, s] : outcome.members) {
        if (s.modes.labels() != target.modes().labels()) throw std::invalid_argument("dense_fidelity: register mismatch");
        DenseState t = to_dense(target, s.modes.cutoff());
        f += w * std::norm(dense_inner(t, s));
    }
    return f;
}

/// Largest |sparse - dense| over the dense basis; sparse terms outside the
/// dense space count in full.
inline double max_amplitude_difference(const FockKet& sparse, const DenseState& dense) {
    if (sparse.modes().labels() != dense.modes.labels()) throw std::invalid_argument("register mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < dense.amplitudes.size(); ++i)
        worst = std::max(worst, std::abs(sparse.amplitude(dense.occupation(i)) - dense.amplitudes[i]));
    for (const auto& [occ, amp] : sparse.terms()) {
        if (std::any_of(occ.begin(), occ.end(), [&](unsigned n) { return n > dense.modes.cutoff(); }))
            worst = std::max(worst, std::abs(amp));
    }
    return worst;
}

/// Converts to the library's outcome type.
inline ConditionalOutcome to_conditional_outcome(const DenseOutcome& d, const ModeRegister& kept) {
    ConditionalOutcome out;
    out.probability = d.probability;
    out.impossible = d.impossible;
    std::vector<EnsembleMember> members;
    for (const auto& [w, s] : d.members) {
        FockKet::TermMap t;
        for (std::size_t i = 0; i < s.amplitudes.size(); ++i)
            if (s.amplitudes[i] != Amplitude{}) t[s.occupation(i)] = s.amplitudes[i];
        members.push_back({w, FockKet(s.modes, std::move(t), 0.0)});
    }
    out.ensemble = WeightedEnsemble(d.members.empty() ? kept : d.members.front().second.modes, std::move(members));
    return out;
}

}  // namespace fockswap::oracle
