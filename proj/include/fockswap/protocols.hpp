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

// End-to-end swapping experiments: each scheme is a Pipeline (source, optical
// steps, heralding events) evaluated exactly, summarized as a ProtocolReport.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "fockswap/detection.hpp"
#include "fockswap/fock.hpp"
#include "fockswap/optics.hpp"
#include "fockswap/oracle.hpp"
#include "fockswap/sources.hpp"

namespace fockswap {

/// Ensemble members whose absolute probability falls below this are left out
/// of report summaries (their mass is reported as dropped).
inline constexpr double kReportBranchThreshold = 1e-12;

struct RunOptions {
    double prune_tolerance = kPruneTolerance;  ///< 0 disables pruning
    CutoffPolicy cutoff_policy = CutoffPolicy::grow;
};

// ---------------------------------------------------------------------------
// Pipelines

struct UnitaryStep {
    std::string name;
    ModeUnitary unitary;
    std::vector<std::string> modes;
};

struct RoutingStep {
    std::string name;
    ModeRouting routing;
};

using OpticalStep = std::variant<UnitaryStep, RoutingStep>;

/// Heralding by threshold detectors; `discard` modes are traced out.
struct DetectorEvent {
    ClickPattern pattern;
    std::vector<std::string> discard;
};

/// Ideal projection of the modes of `bra` onto `bra`.
struct ProjectorEvent {
    FockKet bra;
};

struct EventSpec {
    std::string name;
    std::variant<DetectorEvent, ProjectorEvent> condition;
    std::vector<std::string> keep_order;  ///< mode order of the conditional ensemble
    std::string target;                   ///< expected state name; empty = pick the better of psi_plus/psi_minus
};

struct Pipeline {
    std::string scheme;
    FockKet source;
    std::vector<OpticalStep> steps;
    std::vector<EventSpec> events;
    /// Reference states on the kept modes; always contains "psi_plus" and "psi_minus".
    std::vector<std::pair<std::string, FockKet>> targets;
    /// Extra optics applied after the heralding point, before the joint click statistics.
    std::vector<OpticalStep> analyzer_steps;
    std::vector<DetectorSpec> detectors;  ///< all detectors of the setup; may be empty
    double eta = 1.0;

    const FockKet& target(std::string_view name) const {
        for (const auto& [n, k] : targets)
            if (n == name) return k;
        throw std::invalid_argument("pipeline has no target '" + std::string(name) + "'");
    }
};

inline FockKet with_prune_tolerance(const FockKet& k, double tol) { return FockKet(k.modes(), k.terms(), tol); }

inline FockKet apply_step(const FockKet& state, const OpticalStep& step, const RunOptions& opt) {
    if (const auto* u = std::get_if<UnitaryStep>(&step))
        return apply_mode_unitary(state, u->unitary, u->modes, opt.cutoff_policy);
    return apply_routing(state, std::get<RoutingStep>(step).routing);
}

/// Source through every optical step, up to the heralding point.
inline FockKet propagate(const Pipeline& p, const RunOptions& opt = {}) {
    FockKet state = with_prune_tolerance(p.source, opt.prune_tolerance);
    for (const auto& s : p.steps) state = apply_step(state, s, opt);
    return state;
}

/// Conditions `state` on one event. For projector events the second member is
/// the unnormalized conditional ket.
inline std::pair<ConditionalOutcome, std::optional<FockKet>> condition_on(const FockKet& state, const EventSpec& ev) {
    if (const auto* d = std::get_if<DetectorEvent>(&ev.condition)) {
        auto out = measure_pattern(state, d->pattern, d->discard);
        if (!out.impossible) out.ensemble = reorder(out.ensemble, ev.keep_order);
        else out.ensemble = WeightedEnsemble(ModeRegister(ev.keep_order, state.modes().cutoff()), {});
        return {std::move(out), std::nullopt};
    }
    const auto& bra = std::get<ProjectorEvent>(ev.condition).bra;
    FockKet rest = reorder(contract(bra, state), ev.keep_order);
    ConditionalOutcome out;
    const double n = norm(rest);
    out.probability = n * n;
    if (out.probability <= kImpossibleProbability) {
        out.impossible = true;
        out.ensemble = WeightedEnsemble(rest.modes(), {});
    } else {
        out.ensemble = WeightedEnsemble::pure(rest);
    }
    return {std::move(out), rest};
}

// ---------------------------------------------------------------------------
// Reports

struct MemberSummary {
    double weight = 0.0;  ///< within the event
    std::string ket;
};

struct EventReport {
    std::string name;
    double probability = 0.0;
    double fidelity_psi_plus = 0.0;
    double fidelity_psi_minus = 0.0;
    std::string target;                       ///< reference state the event heralds
    std::optional<double> fidelity_target;
    std::optional<Amplitude> target_coefficient;  ///< <target|unnormalized conditional>, projector events only
    bool impossible = false;
    std::vector<MemberSummary> members;
    ConditionalOutcome outcome;  ///< exact, unsummarized
};

/// Labelled probability distribution over the mutually exclusive results of one shot.
struct OutcomeDistribution {
    std::vector<std::string> labels;
    std::vector<double> probabilities;
};

struct CoincidenceReport {
    CoincidenceTable table;
    /// Empty when the conditioning event has probability zero.
    std::vector<std::pair<std::string, std::optional<double>>> conditionals;
};

struct ProtocolReport {
    std::string scheme;
    std::vector<std::pair<std::string, double>> params;
    std::vector<EventReport> events;
    std::optional<CoincidenceReport> coincidences;
    std::vector<std::pair<std::string, double>> metrics;
    std::vector<std::string> notes;
    double dropped_mass = 0.0;
    OutcomeDistribution distribution;

    const EventReport& event(std::string_view name) const {
        for (const auto& e : events)
            if (e.name == name) return e;
        throw std::invalid_argument("report has no event '" + std::string(name) + "'");
    }

    std::optional<double> metric(std::string_view name) const {
        for (const auto& [n, v] : metrics)
            if (n == name) return v;
        return std::nullopt;
    }

    std::optional<double> conditional(std::string_view name) const {
        if (!coincidences) return std::nullopt;
        for (const auto& [n, v] : coincidences->conditionals)
            if (n == name) return v;
        return std::nullopt;
    }
};

inline OutcomeDistribution distribution_from(const CoincidenceTable& t) {
    OutcomeDistribution d;
    for (std::size_t i = 0; i < t.joint().size(); ++i) {
        std::string label;
        const auto bits = t.label(i);
        for (std::size_t k = 0; k < bits.size(); ++k) {
            if (k) label += ";";
            label += t.detectors()[k] + "=" + bits[k];
        }
        d.labels.push_back(std::move(label));
        d.probabilities.push_back(t.joint()[i]);
    }
    return d;
}

/// Evaluates the pipeline and fills the event part of a report.
inline ProtocolReport evaluate(const Pipeline& p, const RunOptions& opt = {}) {
    ProtocolReport r;
    r.scheme = p.scheme;
    const FockKet state = propagate(p, opt);
    for (const auto& ev : p.events) {
        auto [outcome, raw] = condition_on(state, ev);
        EventReport e;
        e.name = ev.name;
        e.probability = outcome.probability;
        e.impossible = outcome.impossible;
        if (!outcome.impossible) {
            e.fidelity_psi_plus = fidelity(outcome.ensemble, p.target("psi_plus"));
            e.fidelity_psi_minus = fidelity(outcome.ensemble, p.target("psi_minus"));
            e.target = ev.target;
            if (e.target.empty()) e.target = e.fidelity_psi_plus >= e.fidelity_psi_minus ? "psi_plus" : "psi_minus";
            e.fidelity_target = fidelity(outcome.ensemble, p.target(e.target));
            if (raw) e.target_coefficient = inner_product(p.target(e.target), *raw);
            for (const auto& m : outcome.ensemble.members()) {
                const double absolute = m.weight * outcome.probability;
                if (absolute < kReportBranchThreshold) {
                    r.dropped_mass += absolute;
                    continue;
                }
                e.members.push_back({m.weight, to_string(m.state)});
            }
        }
        e.outcome = std::move(outcome);
        r.events.push_back(std::move(e));
    }
    if (!p.detectors.empty()) {
        FockKet analyzed = state;
        for (const auto& s : p.analyzer_steps) analyzed = apply_step(analyzed, s, opt);
        r.distribution = distribution_from(coincidence_table(analyzed, p.detectors, p.eta));
    } else {
        for (const auto& e : r.events) {
            r.distribution.labels.push_back(e.name);
            r.distribution.probabilities.push_back(e.probability);
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Helpers shared by the schemes

namespace detail {

inline void add_bell_targets(Pipeline& p, const std::string& a, const std::string& b, bool with_phi = false) {
    ModeRegister reg({a, b}, 1);
    p.targets.emplace_back("psi_plus", bell_state(Bell::psi_plus, reg, a, b));
    p.targets.emplace_back("psi_minus", bell_state(Bell::psi_minus, reg, a, b));
    if (with_phi) {
        p.targets.emplace_back("phi_plus", bell_state(Bell::phi_plus, reg, a, b));
        p.targets.emplace_back("phi_minus", bell_state(Bell::phi_minus, reg, a, b));
    }
}

inline EventSpec herald(std::string name, std::vector<std::pair<std::string, Outcome>> outcomes, double eta,
                        std::vector<std::string> keep, std::vector<std::string> discard = {}) {
    return EventSpec{std::move(name), DetectorEvent{make_pattern(outcomes, eta), std::move(discard)}, std::move(keep), ""};
}

inline void check_eta(double eta) { validate(ThresholdDetector{eta}); }

inline std::string mapping_note(const ProtocolReport& r, const std::string& modes) {
    std::string note = "heralded states on " + modes + ":";
    for (const auto& e : r.events) {
        note += " " + e.name + " -> ";
        note += e.impossible ? std::string("impossible") : e.target + " (F=" + format_number(*e.fidelity_target) + ")";
        if (&e != &r.events.back()) note += ",";
    }
    return note;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Ideal Bell-basis swapping

inline Pipeline bell_check_pipeline() {
    Pipeline p;
    p.scheme = "bell-check";
    p.source = tensor_product(bell_state(Bell::psi_minus, "1", "2"), bell_state(Bell::psi_minus, "3", "4"));
    for (auto b : kAllBell)
        p.events.push_back({std::string(bell_name(b)), ProjectorEvent{bell_state(b, "2", "3")}, {"1", "4"},
                            std::string(bell_name(b))});
    detail::add_bell_targets(p, "1", "4", true);
    return p;
}

/// Projects modes (2,3) of psi-_{12} psi-_{34} onto each Bell state.
inline ProtocolReport bell_decomposition_check(const RunOptions& opt = {}) {
    auto r = evaluate(bell_check_pipeline(), opt);
    r.notes.push_back("ideal Bell projection on modes (2,3); conditional states on (1,4)");
    return r;
}

inline Pipeline theta_pipeline(double theta) {
    Pipeline p = bell_check_pipeline();
    p.scheme = "theta";
    p.source = theta_product(theta);
    return p;
}

/// Bell projection on (2,3) of (cos t|00> + sin t|11>)^{x2}. The psi outcomes
/// occur with probability sin^2 t cos^2 t each and herald maximal entanglement.
inline ProtocolReport run_theta_swapping(double theta, const RunOptions& opt = {}) {
    if (!std::isfinite(theta)) throw std::invalid_argument("theta must be finite");
    auto r = evaluate(theta_pipeline(theta), opt);
    r.params = {{"theta", theta}};
    r.notes.push_back("ideal Bell projection on modes (2,3); probabilities come from the normalized input state");
    return r;
}

// ---------------------------------------------------------------------------
// Double-pass scheme

struct SchemeAParams {
    Amplitude tau = std::sqrt(1e-3);
    double eta = 1.0;
    unsigned order = 1;
};

inline void validate(const SchemeAParams& a) {
    validate(SpdcParams{a.tau, a.order});
    detail::check_eta(a.eta);
}

/// Pairs on (1,4) and (2,3); beams 1 and 2 meet on a balanced beam splitter
/// watched by D1 (mode 1) and D2 (mode 2). Bell targets live on (3,4).
inline Pipeline scheme_a_pipeline(const SchemeAParams& a) {
    validate(a);
    Pipeline p;
    p.scheme = "scheme-a";
    p.source = double_pass_source({a.tau, a.order});
    p.steps.push_back(UnitaryStep{"balanced BS on (1,2)", balanced_bs(), {"1", "2"}});
    p.events.push_back(detail::herald("event1", {{"1", Outcome::click}, {"2", Outcome::silent}}, a.eta, {"3", "4"}));
    p.events.push_back(detail::herald("event2", {{"1", Outcome::silent}, {"2", Outcome::click}}, a.eta, {"3", "4"}));
    detail::add_bell_targets(p, "3", "4");
    p.detectors = {{"D1", {"1"}}, {"D2", {"2"}}};
    p.eta = a.eta;
    return p;
}

inline ProtocolReport run_scheme_a(const SchemeAParams& a, const RunOptions& opt = {}) {
    auto r = evaluate(scheme_a_pipeline(a), opt);
    const double t2 = std::norm(a.tau);
    r.params = {{"tau", std::abs(a.tau)}, {"tau2", t2}, {"eta", a.eta}, {"order", static_cast<double>(a.order)}};
    r.notes.push_back(detail::mapping_note(r, "(3,4)"));
    r.notes.push_back("source renormalized after truncation at order " + std::to_string(a.order));
    return r;
}

/// Where the heralded (3,4) state of the phase check comes from.
enum class PhaseSource {
    scheme_a,  ///< the double-pass source at the given tau and order
    ideal,     ///< the single-pair limit (|10>_{12} psi+_{34} + |01>_{12} psi-_{34}) / sqrt2
};

struct PhaseParams {
    SchemeAParams scheme;
    PhaseSource source = PhaseSource::scheme_a;
};

inline Pipeline phase_pipeline(const PhaseParams& pp) {
    Pipeline p;
    if (pp.source == PhaseSource::scheme_a) {
        p = scheme_a_pipeline(pp.scheme);
    } else {
        detail::check_eta(pp.scheme.eta);
        ModeRegister reg({"1", "2", "3", "4"}, 1);
        const double h = 0.5;
        // |10>(|10>+|01>)/sqrt2 + |01>(|10>-|01>)/sqrt2, overall 1/sqrt2
        p.source = FockKet(reg, {{{1, 0, 1, 0}, h}, {{1, 0, 0, 1}, h}, {{0, 1, 1, 0}, h}, {{0, 1, 0, 1}, -h}});
        p.events.push_back(detail::herald("event1", {{"1", Outcome::click}, {"2", Outcome::silent}}, pp.scheme.eta, {"3", "4"}));
        p.events.push_back(detail::herald("event2", {{"1", Outcome::silent}, {"2", Outcome::click}}, pp.scheme.eta, {"3", "4"}));
        detail::add_bell_targets(p, "3", "4");
        p.eta = pp.scheme.eta;
    }
    p.scheme = "verify-phase";
    p.analyzer_steps.push_back(UnitaryStep{"balanced BS on (3,4)", balanced_bs(), {"3", "4"}});
    p.detectors = {{"D1", {"1"}}, {"D2", {"2"}}, {"D3", {"3"}}, {"D4", {"4"}}};
    return p;
}

/// Sends the heralded beams 3 and 4 through a second balanced beam splitter
/// onto D3 and D4 and tabulates the joint statistics of D1..D4.
inline ProtocolReport run_phase_verification(const PhaseParams& pp, const RunOptions& opt = {}) {
    const Pipeline p = phase_pipeline(pp);
    auto r = evaluate(p, opt);
    const double t2 = std::norm(pp.scheme.tau);
    if (pp.source == PhaseSource::scheme_a) {
        r.params = {{"tau", std::abs(pp.scheme.tau)}, {"tau2", t2}, {"eta", pp.scheme.eta},
                    {"order", static_cast<double>(pp.scheme.order)}};
    } else {
        r.params = {{"eta", pp.scheme.eta}};
    }

    FockKet analyzed = propagate(p, opt);
    for (const auto& s : p.analyzer_steps) analyzed = apply_step(analyzed, s, opt);
    CoincidenceReport c{coincidence_table(analyzed, p.detectors, pp.scheme.eta), {}};
    const std::vector<std::pair<std::string, std::vector<std::pair<std::string, Outcome>>>> events{
        {"event1", {{"D1", Outcome::click}, {"D2", Outcome::silent}}},
        {"event2", {{"D1", Outcome::silent}, {"D2", Outcome::click}}},
    };
    for (const auto& [name, given] : events) {
        for (const std::string d : {"D3", "D4"}) {
            c.conditionals.emplace_back("P(" + d + "|" + name + ")", c.table.conditional({{d, Outcome::click}}, given));
        }
    }
    r.coincidences = std::move(c);

    // Where the single heralded photon sits before the second beam splitter.
    for (const auto& e : r.events) {
        if (e.impossible) continue;
        double in3 = 0.0, in4 = 0.0;
        for (const auto& m : e.outcome.ensemble.members()) {
            in3 += m.weight * std::norm(m.state.amplitude({1, 0}));
            in4 += m.weight * std::norm(m.state.amplitude({0, 1}));
        }
        r.metrics.emplace_back(e.name + "_one_photon_beam3", in3);
        r.metrics.emplace_back(e.name + "_one_photon_beam4", in4);
    }
    if (pp.source == PhaseSource::scheme_a) {
        r.metrics.emplace_back("tau2_bound", t2);
        if (auto d4 = r.conditional("P(D4|event1)")) r.metrics.emplace_back("d4_given_event1_within_tau2", *d4 <= t2 ? 1.0 : 0.0);
    }
    r.notes.push_back(detail::mapping_note(r, "(3,4)"));
    r.notes.push_back("analyzer: balanced BS on (3,4), D3 on mode 3, D4 on mode 4");
    return r;
}

// ---------------------------------------------------------------------------
// Single-pass scheme

enum class SchemeBVariant { ubs, pbs };

struct SchemeBParams {
    double epsilon = 0.1;
    double eta = 1.0;
    unsigned order = 1;
    SchemeBVariant variant = SchemeBVariant::ubs;
    Amplitude tau = 0.1;  ///< relative weight of each further pair; only used when order > 1
};

inline void validate(const SchemeBParams& b) {
    if (!(b.epsilon > 0.0 && b.epsilon < 1.0)) throw std::invalid_argument("scheme-b: epsilon must lie in (0, 1)");
    detail::check_eta(b.eta);
    if (b.order < 1) throw std::invalid_argument("scheme-b: order must be >= 1");
    if (b.order > 1 && !(std::abs(b.tau) < 1.0)) throw std::invalid_argument("scheme-b: |tau| must be < 1");
}

/// Emitted pairs on (a, b): |1,1> for order 1, otherwise the normalized
/// sum_{n=1}^{order} tau^{n-1} |n,n> (emission of at least one pair).
inline FockKet emitted_pairs(const SchemeBParams& b, std::vector<std::string> labels, std::size_t ia, std::size_t ic) {
    ModeRegister reg(std::move(labels), b.order);
    FockKet::TermMap t;
    Amplitude w = 1.0;
    for (unsigned n = 1; n <= b.order; ++n) {
        Occupation o(reg.size(), 0u);
        o[ia] = o[ic] = n;
        t[o] += w;
        w *= b.tau;
    }
    return normalize(FockKet(std::move(reg), std::move(t)));
}

/// Steps that turn the emitted pair into the four-beam state on (1,2,3,4).
/// ubs: photons start in modes 1 (beam u) and 4 (beam l); the unbalanced
///      splitters act on (1,2) and (4,3), vacuum entering at 2 and 3.
/// pbs: beams carry (H,V) modes uH,uV,lV,lH; both beams are rotated, then a
///      PBS on each beam sends H to 1 / 4 and V to 2 / 3.
inline std::pair<FockKet, std::vector<OpticalStep>> scheme_b_preparation(const SchemeBParams& b) {
    validate(b);
    std::vector<OpticalStep> steps;
    if (b.variant == SchemeBVariant::ubs) {
        FockKet src = emitted_pairs(b, {"1", "2", "3", "4"}, 0, 3);
        steps.push_back(UnitaryStep{"unbalanced BS on (1,2)", unbalanced_bs(b.epsilon), {"1", "2"}});
        steps.push_back(UnitaryStep{"unbalanced BS on (4,3)", unbalanced_bs(b.epsilon), {"4", "3"}});
        return {std::move(src), std::move(steps)};
    }
    FockKet src = emitted_pairs(b, {"uH", "uV", "lV", "lH"}, 0, 3);
    steps.push_back(UnitaryStep{"rotation on beam u", polarization_rotation(b.epsilon), {"uH", "uV"}});
    steps.push_back(UnitaryStep{"rotation on beam l", polarization_rotation(b.epsilon), {"lH", "lV"}});
    steps.push_back(RoutingStep{"PBS on beam u", pbs({"uH", "uV"}, {"1", "2"})});
    steps.push_back(RoutingStep{"PBS on beam l", pbs({"lH", "lV"}, {"4", "3"})});
    return {std::move(src), std::move(steps)};
}

/// The four-beam state before the balanced beam splitter, modes (1,2,3,4).
inline FockKet scheme_b_four_mode_state(const SchemeBParams& b, const RunOptions& opt = {}) {
    auto [src, steps] = scheme_b_preparation(b);
    FockKet s = with_prune_tolerance(src, opt.prune_tolerance);
    for (const auto& st : steps) s = apply_step(s, st, opt);
    return s;
}

/// Beams 2 and 3 meet on a balanced splitter watched by D2 (mode 2) and D3
/// (mode 3); Bell targets on (1,4).
inline Pipeline scheme_b_pipeline(const SchemeBParams& b) {
    auto [src, steps] = scheme_b_preparation(b);
    Pipeline p;
    p.scheme = "scheme-b";
    p.source = std::move(src);
    p.steps = std::move(steps);
    p.steps.push_back(UnitaryStep{"balanced BS on (2,3)", balanced_bs(), {"2", "3"}});
    p.events.push_back(detail::herald("d2_click", {{"2", Outcome::click}, {"3", Outcome::silent}}, b.eta, {"1", "4"}));
    p.events.push_back(detail::herald("d3_click", {{"2", Outcome::silent}, {"3", Outcome::click}}, b.eta, {"1", "4"}));
    detail::add_bell_targets(p, "1", "4");
    p.detectors = {{"D2", {"2"}}, {"D3", {"3"}}};
    p.eta = b.eta;
    return p;
}

inline ProtocolReport run_scheme_b(const SchemeBParams& b, const RunOptions& opt = {}) {
    auto r = evaluate(scheme_b_pipeline(b), opt);
    r.params = {{"epsilon", b.epsilon}, {"eta", b.eta}, {"order", static_cast<double>(b.order)}};
    if (b.order > 1) r.params.emplace_back("tau", std::abs(b.tau));
    r.notes.push_back(std::string("variant: ") + (b.variant == SchemeBVariant::ubs ? "ubs" : "pbs"));
    r.notes.push_back(detail::mapping_note(r, "(1,4)"));
    return r;
}

// ---------------------------------------------------------------------------
// Post-selection analysis of the earlier experiments

struct PolarizationParams {
    double eta = 1.0;
    PolarizationWeights weights;
};

inline Pipeline polarization_pipeline(const PolarizationParams& pp) {
    detail::check_eta(pp.eta);  // eta = 0 is allowed and reports the coincidence as impossible
    Pipeline p;
    p.scheme = "postselect-pol";
    p.source = polarization_double_pass(pp.weights);
    p.steps.push_back(UnitaryStep{"balanced BS on (2H,3H)", balanced_bs(), {"2H", "3H"}});
    p.steps.push_back(UnitaryStep{"balanced BS on (2V,3V)", balanced_bs(), {"2V", "3V"}});
    ClickPattern both;
    both.assignments.push_back({"D2", {"2H", "2V"}, {pp.eta}, Outcome::click});
    both.assignments.push_back({"D3", {"3H", "3V"}, {pp.eta}, Outcome::click});
    p.events.push_back(EventSpec{"coincidence", DetectorEvent{both, {}}, {"1H", "1V", "4H", "4V"}, "psi_minus"});
    // Polarization Bell states on beams (1,4): (|H>_1|V>_4 +- |V>_1|H>_4)/sqrt2.
    ModeRegister reg({"1H", "1V", "4H", "4V"}, 1);
    const double h = 1.0 / std::sqrt(2.0);
    p.targets.emplace_back("psi_plus", FockKet(reg, {{{1, 0, 0, 1}, h}, {{0, 1, 1, 0}, h}}));
    p.targets.emplace_back("psi_minus", FockKet(reg, {{{1, 0, 0, 1}, h}, {{0, 1, 1, 0}, -h}}));
    p.detectors = {{"D2", {"2H", "2V"}}, {"D3", {"3H", "3V"}}};
    p.eta = pp.eta;
    return p;
}

/// Conditions the double-pass polarization state on a D2-D3 coincidence and
/// measures how much of the heralded (1,4) state has an empty beam.
inline ProtocolReport analyze_polarization_postselection(const PolarizationParams& pp, const RunOptions& opt = {}) {
    auto r = evaluate(polarization_pipeline(pp), opt);
    r.params = {{"eta", pp.eta}, {"x_weight", pp.weights.x}, {"y13_weight", pp.weights.y13}, {"y24_weight", pp.weights.y24}};
    const auto& e = r.events.front();
    double empty = 0.0;
    for (const auto& m : e.outcome.ensemble.members()) {
        for (const auto& [occ, amp] : m.state.terms()) {
            // modes 1H,1V,4H,4V
            if (occ[0] + occ[1] == 0 || occ[2] + occ[3] == 0) empty += m.weight * std::norm(amp);
        }
    }
    r.metrics.emplace_back("empty_beam_weight", empty);
    r.metrics.emplace_back("empty_beam_probability", empty * e.probability);
    r.notes.push_back("optics: balanced BS on (2H,3H) and (2V,3V); D2 watches beam 2, D3 watches beam 3, both polarization-blind");
    r.notes.push_back("heralding: D2 and D3 click together; target is the (1,4) polarization singlet");
    return r;
}

inline Pipeline vacuum_one_photon_pipeline(double eta) {
    detail::check_eta(eta);
    Pipeline p;
    p.scheme = "postselect-vac";
    p.source = vacuum_one_photon_postbs();
    p.events.push_back(detail::herald("click_2'", {{"2'", Outcome::click}}, eta, {"1", "4"}, {"3'"}));
    p.events.back().target = "psi_plus";
    detail::add_bell_targets(p, "1", "4");
    p.detectors = {{"D2'", {"2'"}}};
    p.eta = eta;
    return p;
}

/// Conditions the post-beam-splitter state of the vacuum/one-photon experiment
/// on a threshold click at 2'. A number-resolving detector (oracle only) that
/// selects exactly one photon is evaluated alongside for comparison.
inline ProtocolReport analyze_vacuum_one_photon(double eta, const RunOptions& opt = {}) {
    const Pipeline p = vacuum_one_photon_pipeline(eta);
    auto r = evaluate(p, opt);
    r.params = {{"eta", eta}};
    const auto& e = r.events.front();
    const FockKet vac = FockKet::vacuum(ModeRegister({"1", "4"}, 1));
    r.metrics.emplace_back("vacuum_weight", e.impossible ? 0.0 : fidelity(e.outcome.ensemble, vac));

    const auto dense = oracle::to_dense(p.source);
    const auto exact_one = oracle::number_resolving_measure(dense, "2'", 1, {"3'"});
    r.metrics.emplace_back("number_resolving_probability", exact_one.probability);
    r.metrics.emplace_back("number_resolving_fidelity", oracle::dense_fidelity(exact_one, p.target("psi_plus")));
    r.notes.push_back("threshold detector on 2'; mode 3' traced out; number-resolving figures come from the dense oracle");
    return r;
}

// ---------------------------------------------------------------------------
// Synthetic data

/// Multinomial sample of `shots` draws from `d`, one count per label.
inline std::vector<std::uint64_t> sample_run(const OutcomeDistribution& d, std::uint64_t shots, std::uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("sample_run: shots must be >= 1");
    if (d.probabilities.empty()) throw std::invalid_argument("sample_run: empty distribution");
    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> counts(d.probabilities.size(), 0);
    // Sequential binomials: count_i ~ Bin(remaining, p_i / remaining mass).
    std::uint64_t remaining = shots;
    double mass = 0.0;
    for (auto p : d.probabilities) mass += std::max(p, 0.0);
    for (std::size_t i = 0; i + 1 < counts.size() && remaining > 0; ++i) {
        const double p = std::max(d.probabilities[i], 0.0);
        const double q = mass > 0.0 ? std::clamp(p / mass, 0.0, 1.0) : 0.0;
        std::binomial_distribution<std::uint64_t> bin(remaining, q);
        counts[i] = bin(rng);
        remaining -= counts[i];
        mass -= p;
    }
    counts.back() += remaining;
    return counts;
}

}  // namespace fockswap
