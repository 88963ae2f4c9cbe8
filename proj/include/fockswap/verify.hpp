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

// Re-evaluates a pipeline with the dense oracle and compares against the
// sparse engine.

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fockswap/oracle.hpp"
#include "fockswap/protocols.hpp"

namespace fockswap {

struct VerificationResult {
    double max_amplitude_diff = 0.0;
    double max_probability_diff = 0.0;
    double max_fidelity_diff = 0.0;
    std::size_t checks = 0;

    double worst() const { return std::max({max_amplitude_diff, max_probability_diff, max_fidelity_diff}); }
    bool passed(double tol = 1e-12) const { return worst() <= tol; }
};

namespace detail {

inline oracle::DenseState dense_step(const oracle::DenseState& s, const OpticalStep& step) {
    if (const auto* u = std::get_if<UnitaryStep>(&step)) return oracle::dense_apply(s, u->unitary, u->modes);
    return oracle::dense_relabel(s, std::get<RoutingStep>(step).routing.moves);
}

}  // namespace detail

/// Throws std::length_error when the pipeline is too large for the oracle.
inline VerificationResult verify_pipeline(const Pipeline& p, const RunOptions& opt = {}) {
    VerificationResult v;
    const ProtocolReport sparse = evaluate(p, opt);
    const FockKet sparse_state = propagate(p, opt);

    // Size the dense space from the largest occupation anywhere along the way.
    unsigned cutoff = std::max(p.source.modes().cutoff(), sparse_state.max_occupation());
    {
        FockKet analyzed = sparse_state;
        for (const auto& s : p.analyzer_steps) analyzed = apply_step(analyzed, s, opt);
        cutoff = std::max(cutoff, analyzed.max_occupation());
    }
    oracle::DenseState dense = oracle::to_dense(p.source, cutoff);
    for (const auto& s : p.steps) dense = detail::dense_step(dense, s);
    v.max_amplitude_diff = oracle::max_amplitude_difference(sparse_state, dense);
    ++v.checks;

    for (std::size_t i = 0; i < p.events.size(); ++i) {
        const auto& ev = p.events[i];
        oracle::DenseOutcome d;
        if (const auto* det = std::get_if<DetectorEvent>(&ev.condition)) {
            d = oracle::dense_measure(dense, det->pattern, det->discard);
        } else {
            d = oracle::dense_project(dense, oracle::to_dense(std::get<ProjectorEvent>(ev.condition).bra));
        }
        const auto& e = sparse.events[i];
        v.max_probability_diff = std::max(v.max_probability_diff, std::abs(d.probability - e.probability));
        ++v.checks;
        if (d.impossible != e.impossible) {
            v.max_probability_diff = std::max(v.max_probability_diff, 1.0);
            continue;
        }
        if (d.impossible) continue;
        const auto kept = d.members.front().second.modes.labels();
        for (const auto& [name, target] : p.targets) {
            const double fd = oracle::dense_fidelity(d, reorder(target, kept));
            const double fs = fidelity(e.outcome.ensemble, target);
            v.max_fidelity_diff = std::max(v.max_fidelity_diff, std::abs(fd - fs));
            ++v.checks;
        }
    }

    if (!p.detectors.empty()) {
        oracle::DenseState analyzed = dense;
        for (const auto& s : p.analyzer_steps) analyzed = detail::dense_step(analyzed, s);
        const std::size_t k = p.detectors.size();
        for (std::size_t pat = 0; pat < (std::size_t{1} << k); ++pat) {
            ClickPattern cp;
            for (std::size_t d = 0; d < k; ++d) {
                const bool click = pat >> (k - 1 - d) & 1u;
                cp.assignments.push_back({p.detectors[d].name, p.detectors[d].modes, {p.eta},
                                          click ? Outcome::click : Outcome::silent});
            }
            const double pd = oracle::dense_measure(analyzed, cp).probability;
            v.max_probability_diff = std::max(v.max_probability_diff, std::abs(pd - sparse.distribution.probabilities[pat]));
            ++v.checks;
        }
    }
    return v;
}

}  // namespace fockswap
