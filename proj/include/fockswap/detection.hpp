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

// Threshold (on/off) photodetection with per-photon efficiency.
//
// A detector covering modes S sees n = sum_{m in S} n_m photons. Each photon is
// registered independently with probability eta, so
//
//     P(silent | n) = (1 - eta)^n,    P(click | n) = 1 - (1 - eta)^n.
//
// Both POVM elements are diagonal in the Fock basis of the measured modes,
// which makes conditioning exact: the unmeasured modes are left in the mixture
// sum_k f(k) |psi_k><psi_k|, where k runs over measured-mode occupations,
// psi_k = <k|psi> and f(k) is the POVM weight of the observed pattern.
// Amplitudes sharing a k stay coherent, different k are incoherent.

#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fockswap/fock.hpp"

namespace fockswap {

/// Outcome probabilities at or below this are reported as impossible.
inline constexpr double kImpossibleProbability = 1e-20;

struct ThresholdDetector {
    double eta = 1.0;  ///< efficiency in [0, 1]
};

inline void validate(const ThresholdDetector& d) {
    if (!(d.eta >= 0.0 && d.eta <= 1.0)) throw std::invalid_argument("detector efficiency must lie in [0, 1]");
}

enum class Outcome { silent, click };

inline double povm_weight(unsigned photons, double eta, Outcome outcome) {
    const double silent = std::pow(1.0 - eta, static_cast<double>(photons));
    return outcome == Outcome::silent ? silent : 1.0 - silent;
}

/// One detector: the modes it covers and the outcome being conditioned on.
struct DetectorAssignment {
    std::string name;
    std::vector<std::string> modes;
    ThresholdDetector detector;
    Outcome outcome = Outcome::click;
};

struct ClickPattern {
    std::vector<DetectorAssignment> assignments;
};

/// Convenience: one single-mode detector per entry, all with efficiency `eta`.
inline ClickPattern make_pattern(const std::vector<std::pair<std::string, Outcome>>& outcomes, double eta) {
    ClickPattern p;
    for (const auto& [mode, outcome] : outcomes) p.assignments.push_back({"D" + mode, {mode}, {eta}, outcome});
    return p;
}

struct ConditionalOutcome {
    double probability = 0.0;
    WeightedEnsemble ensemble;  ///< on the modes neither measured nor discarded
    bool impossible = false;
};

namespace detail {

struct MeasurementLayout {
    std::vector<std::vector<std::size_t>> detector_modes;
    std::vector<std::size_t> keyed;  ///< measured then discarded mode indices
    std::vector<std::size_t> kept;
    std::vector<std::string> kept_labels;
};

inline MeasurementLayout layout_for(const ModeRegister& reg, const ClickPattern& pattern,
                                    const std::vector<std::string>& discard) {
    MeasurementLayout l;
    std::vector<std::string> all;
    for (const auto& a : pattern.assignments) {
        validate(a.detector);
        if (a.modes.empty()) throw std::invalid_argument("detector '" + a.name + "' covers no modes");
        l.detector_modes.push_back(reg.indices_of(a.modes));
        all.insert(all.end(), a.modes.begin(), a.modes.end());
    }
    all.insert(all.end(), discard.begin(), discard.end());
    l.keyed = reg.indices_of(all);  // rejects overlaps
    for (std::size_t i = 0; i < reg.size(); ++i) {
        if (std::find(l.keyed.begin(), l.keyed.end(), i) == l.keyed.end()) {
            l.kept.push_back(i);
            l.kept_labels.push_back(reg.labels()[i]);
        }
    }
    return l;
}

}  // namespace detail

/// Conditions `state` on `pattern`. Modes in `discard` are traced out without
/// being detected. The returned ensemble lives on the remaining modes, in
/// register order.
inline ConditionalOutcome measure_pattern(const FockKet& state, const ClickPattern& pattern,
                                          const std::vector<std::string>& discard = {}) {
    if (!is_normalized(state)) throw std::invalid_argument("measure_pattern: state is not normalized");
    const auto l = detail::layout_for(state.modes(), pattern, discard);

    std::map<Occupation, FockKet::TermMap> branches;
    for (const auto& [occ, amp] : state.terms()) {
        Occupation key(l.keyed.size()), rest(l.kept.size());
        for (std::size_t i = 0; i < l.keyed.size(); ++i) key[i] = occ[l.keyed[i]];
        for (std::size_t i = 0; i < l.kept.size(); ++i) rest[i] = occ[l.kept[i]];
        branches[std::move(key)][std::move(rest)] += amp;
    }

    const ModeRegister kept_reg(l.kept_labels, state.modes().cutoff());
    struct Branch {
        double prob;
        FockKet ket;
    };
    std::vector<Branch> weighted;
    double total = 0.0;
    for (auto& [key, terms] : branches) {
        double f = 1.0;
        std::size_t offset = 0;
        for (std::size_t d = 0; d < l.detector_modes.size(); ++d) {
            unsigned n = 0;
            for (std::size_t j = 0; j < l.detector_modes[d].size(); ++j) n += key[offset + j];
            offset += l.detector_modes[d].size();
            const auto& a = pattern.assignments[d];
            f *= povm_weight(n, a.detector.eta, a.outcome);
        }
        if (f == 0.0) continue;
        FockKet ket(kept_reg, std::move(terms), state.prune_tolerance());
        const double nk = norm(ket);
        if (nk == 0.0) continue;
        const double p = f * nk * nk;
        total += p;
        weighted.push_back({p, ket.scaled(1.0 / nk)});
    }

    ConditionalOutcome out;
    out.probability = total;
    if (total <= kImpossibleProbability) {
        out.impossible = true;
        out.ensemble = WeightedEnsemble(kept_reg, {});
        return out;
    }
    std::vector<EnsembleMember> members;
    for (auto& b : weighted) members.push_back({b.prob / total, std::move(b.ket)});
    out.ensemble = WeightedEnsemble(kept_reg, std::move(members));
    return out;
}

/// Measures every member of a mixture; the result mixes the member outcomes.
inline ConditionalOutcome measure_pattern(const WeightedEnsemble& ensemble, const ClickPattern& pattern,
                                          const std::vector<std::string>& discard = {}) {
    ConditionalOutcome out;
    std::vector<std::pair<double, ConditionalOutcome>> parts;
    ModeRegister kept_reg;
    bool have_reg = false;
    for (const auto& m : ensemble.members()) {
        auto c = measure_pattern(m.state, pattern, discard);
        if (!have_reg) {
            kept_reg = c.ensemble.modes();
            have_reg = true;
        }
        out.probability += m.weight * c.probability;
        parts.emplace_back(m.weight, std::move(c));
    }
    if (out.probability <= kImpossibleProbability) {
        out.impossible = true;
        out.ensemble = WeightedEnsemble(kept_reg, {});
        return out;
    }
    std::vector<EnsembleMember> members;
    for (auto& [w, c] : parts) {
        if (c.impossible) continue;
        for (auto& m : c.ensemble.members()) {
            const double weight = w * c.probability * m.weight / out.probability;
            if (weight > 0.0) members.push_back({weight, m.state});
        }
    }
    out.ensemble = WeightedEnsemble(kept_reg, std::move(members));
    return out;
}

// ---------------------------------------------------------------------------
// Joint click statistics

struct DetectorSpec {
    std::string name;
    std::vector<std::string> modes;
};

/// Joint probabilities of all 2^k click/silent patterns of k detectors.
/// Pattern index bit (k-1-i) is detector i, so index order equals the
/// lexicographic order of the pattern strings ("00", "01", "10", "11").
class CoincidenceTable {
  public:
    CoincidenceTable() = default;
    CoincidenceTable(std::vector<std::string> detectors, std::vector<double> joint)
        : detectors_(std::move(detectors)), joint_(std::move(joint)) {
        if (joint_.size() != (std::size_t{1} << detectors_.size()))
            throw std::invalid_argument("coincidence table size mismatch");
    }

    const std::vector<std::string>& detectors() const { return detectors_; }
    const std::vector<double>& joint() const { return joint_; }

    /// "1" = click, "0" = silent, detector order as constructed.
    std::string label(std::size_t index) const {
        std::string s(detectors_.size(), '0');
        for (std::size_t i = 0; i < detectors_.size(); ++i)
            if (index >> (detectors_.size() - 1 - i) & 1u) s[i] = '1';
        return s;
    }

    /// Marginal probability that every listed detector shows the listed outcome.
    double probability(const std::vector<std::pair<std::string, Outcome>>& constraints) const {
        std::vector<std::pair<std::size_t, Outcome>> c;
        for (const auto& [name, o] : constraints) c.emplace_back(detector_index(name), o);
        double p = 0.0;
        for (std::size_t idx = 0; idx < joint_.size(); ++idx) {
            bool ok = true;
            for (const auto& [d, o] : c) {
                bool clicked = idx >> (detectors_.size() - 1 - d) & 1u;
                if (clicked != (o == Outcome::click)) ok = false;
            }
            if (ok) p += joint_[idx];
        }
        return p;
    }

    /// P(event | given); empty when P(given) is zero.
    std::optional<double> conditional(const std::vector<std::pair<std::string, Outcome>>& event,
                                      const std::vector<std::pair<std::string, Outcome>>& given) const {
        const double pg = probability(given);
        if (pg <= kImpossibleProbability) return std::nullopt;
        auto both = given;
        both.insert(both.end(), event.begin(), event.end());
        return probability(both) / pg;
    }

  private:
    std::size_t detector_index(const std::string& name) const {
        auto it = std::find(detectors_.begin(), detectors_.end(), name);
        if (it == detectors_.end()) throw std::invalid_argument("unknown detector '" + name + "'");
        return static_cast<std::size_t>(it - detectors_.begin());
    }

    std::vector<std::string> detectors_;
    std::vector<double> joint_;
};

inline CoincidenceTable coincidence_table(const WeightedEnsemble& ensemble, const std::vector<DetectorSpec>& detectors,
                                          double eta) {
    validate(ThresholdDetector{eta});
    const auto& reg = ensemble.modes();
    std::vector<std::vector<std::size_t>> idx;
    std::vector<std::string> names, all;
    for (const auto& d : detectors) {
        idx.push_back(reg.indices_of(d.modes));
        names.push_back(d.name);
        all.insert(all.end(), d.modes.begin(), d.modes.end());
    }
    (void)reg.indices_of(all);  // detectors must not share modes
    const std::size_t k = detectors.size();
    std::vector<double> joint(std::size_t{1} << k, 0.0);
    for (const auto& m : ensemble.members()) {
        for (const auto& [occ, amp] : m.state.terms()) {
            const double w = m.weight * std::norm(amp);
            std::vector<double> click(k);
            for (std::size_t d = 0; d < k; ++d) {
                unsigned n = 0;
                for (auto i : idx[d]) n += occ[i];
                click[d] = povm_weight(n, eta, Outcome::click);
            }
            for (std::size_t pat = 0; pat < joint.size(); ++pat) {
                double p = w;
                for (std::size_t d = 0; d < k; ++d) {
                    bool c = pat >> (k - 1 - d) & 1u;
                    p *= c ? click[d] : 1.0 - click[d];
                }
                joint[pat] += p;
            }
        }
    }
    return CoincidenceTable(std::move(names), std::move(joint));
}

inline CoincidenceTable coincidence_table(const FockKet& state, const std::vector<DetectorSpec>& detectors, double eta) {
    return coincidence_table(WeightedEnsemble::pure(state), detectors, eta);
}

}  // namespace fockswap
