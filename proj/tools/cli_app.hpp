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

// Command-line front end. Kept in a header so the test suite can drive it
// in-process; tools/fockswap_main.cpp is the executable.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fockswap/fockswap.hpp"

namespace fockswap::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kVerifyFailed = 3 };

struct RunConfig {
    std::string scheme;
    std::optional<double> tau;
    std::optional<double> tau2;
    double epsilon = 0.1;
    double eta = 1.0;
    double theta = std::numbers::pi / 4;
    double y_weight = 1.0;
    unsigned order = 1;
    std::string variant = "ubs";
    bool ideal = false;
    std::string format = "table";
    bool verify = false;
    std::optional<std::uint64_t> shots;
    std::uint64_t seed = 1;

    std::optional<std::string> sweep_param;
    std::optional<double> sweep_from;
    std::optional<double> sweep_to;
    unsigned sweep_steps = 0;
    std::vector<double> sweep_values;
};

/// Parameters each scheme accepts for --param.
inline std::vector<std::string> sweepable(const std::string& scheme) {
    if (scheme == "scheme-a" || scheme == "verify-phase") return {"tau", "tau2", "eta"};
    if (scheme == "scheme-b") return {"epsilon", "eta"};
    if (scheme == "theta") return {"theta"};
    if (scheme == "postselect-pol") return {"eta", "y_weight"};
    if (scheme == "postselect-vac") return {"eta"};
    return {};
}

inline SchemeAParams scheme_a_params(const RunConfig& c) {
    SchemeAParams a;
    if (c.tau && c.tau2) throw std::invalid_argument("--tau and --tau2 are mutually exclusive");
    if (c.tau) a.tau = *c.tau;
    else if (c.tau2) {
        if (*c.tau2 < 0.0) throw std::invalid_argument("--tau2 must be >= 0");
        a.tau = std::sqrt(*c.tau2);
    }
    a.eta = c.eta;
    a.order = c.order;
    return a;
}

inline SchemeBParams scheme_b_params(const RunConfig& c) {
    SchemeBParams b;
    b.epsilon = c.epsilon;
    b.eta = c.eta;
    b.order = c.order;
    if (c.variant == "ubs") b.variant = SchemeBVariant::ubs;
    else if (c.variant == "pbs") b.variant = SchemeBVariant::pbs;
    else throw std::invalid_argument("--variant must be ubs or pbs");
    if (c.tau) b.tau = *c.tau;
    return b;
}

inline PolarizationParams polarization_params(const RunConfig& c) {
    if (!(c.y_weight >= 0.0)) throw std::invalid_argument("--y-weight must be >= 0");
    PolarizationParams p;
    p.eta = c.eta;
    p.weights.y13 = p.weights.y24 = c.y_weight;
    return p;
}

inline Pipeline pipeline_for(const RunConfig& c) {
    if (c.scheme == "scheme-a") return scheme_a_pipeline(scheme_a_params(c));
    if (c.scheme == "verify-phase")
        return phase_pipeline({scheme_a_params(c), c.ideal ? PhaseSource::ideal : PhaseSource::scheme_a});
    if (c.scheme == "scheme-b") return scheme_b_pipeline(scheme_b_params(c));
    if (c.scheme == "theta") return theta_pipeline(c.theta);
    if (c.scheme == "bell-check") return bell_check_pipeline();
    if (c.scheme == "postselect-pol") return polarization_pipeline(polarization_params(c));
    if (c.scheme == "postselect-vac") return vacuum_one_photon_pipeline(c.eta);
    throw std::invalid_argument("unknown scheme '" + c.scheme + "'");
}

inline ProtocolReport report_for(const RunConfig& c) {
    if (c.scheme == "scheme-a") return run_scheme_a(scheme_a_params(c));
    if (c.scheme == "verify-phase")
        return run_phase_verification({scheme_a_params(c), c.ideal ? PhaseSource::ideal : PhaseSource::scheme_a});
    if (c.scheme == "scheme-b") return run_scheme_b(scheme_b_params(c));
    if (c.scheme == "theta") return run_theta_swapping(c.theta);
    if (c.scheme == "bell-check") return bell_decomposition_check();
    if (c.scheme == "postselect-pol") return analyze_polarization_postselection(polarization_params(c));
    if (c.scheme == "postselect-vac") return analyze_vacuum_one_photon(c.eta);
    throw std::invalid_argument("unknown scheme '" + c.scheme + "'");
}

inline RunConfig with_param(RunConfig c, const std::string& name, double value) {
    if (name == "tau") {
        c.tau = value;
        c.tau2.reset();
    } else if (name == "tau2") {
        c.tau2 = value;
        c.tau.reset();
    } else if (name == "eta") c.eta = value;
    else if (name == "epsilon") c.epsilon = value;
    else if (name == "theta") c.theta = value;
    else if (name == "y_weight") c.y_weight = value;
    else throw std::invalid_argument("cannot sweep '" + name + "'");
    return c;
}

/// Grid of the sweep: explicit --values, or --steps points from --from to --to inclusive.
inline std::vector<double> sweep_grid(const RunConfig& c) {
    if (!c.sweep_values.empty()) return c.sweep_values;
    if (!c.sweep_from || !c.sweep_to) throw std::invalid_argument("sweep needs --from and --to (or --values)");
    if (c.sweep_steps < 1) throw std::invalid_argument("sweep range is empty (--steps must be >= 1)");
    std::vector<double> grid;
    for (unsigned i = 0; i < c.sweep_steps; ++i) {
        const double t = c.sweep_steps == 1 ? 0.0 : static_cast<double>(i) / (c.sweep_steps - 1);
        grid.push_back(i + 1 == c.sweep_steps && c.sweep_steps > 1 ? *c.sweep_to
                                                                     : *c.sweep_from + t * (*c.sweep_to - *c.sweep_from));
    }
    return grid;
}

/// Returns an error message when the oracle disagrees with the sparse engine.
inline std::optional<std::string> verify_config(const RunConfig& c) {
    VerificationResult v;
    try {
        v = verify_pipeline(pipeline_for(c));
    } catch (const std::length_error& e) {
        throw std::invalid_argument(std::string("--verify unavailable: ") + e.what());
    } catch (const std::out_of_range& e) {
        throw std::invalid_argument(std::string("--verify unavailable: ") + e.what());
    }
    if (v.passed()) return std::nullopt;
    return "oracle mismatch: amplitude " + format_number(v.max_amplitude_diff) + ", probability " +
           format_number(v.max_probability_diff) + ", fidelity " + format_number(v.max_fidelity_diff);
}

inline void write_samples(std::ostream& os, const RunConfig& c, const ProtocolReport& r, ordered_json* json) {
    const auto counts = sample_run(r.distribution, *c.shots, c.seed);
    if (json) {
        ordered_json s;
        s["shots"] = *c.shots;
        s["seed"] = c.seed;
        auto arr = ordered_json::array();
        for (std::size_t i = 0; i < counts.size(); ++i)
            arr.push_back({{"outcome", r.distribution.labels[i]}, {"count", counts[i]}});
        s["counts"] = std::move(arr);
        (*json)["samples"] = std::move(s);
        return;
    }
    os << "\nsamples (shots=" << *c.shots << ", seed=" << c.seed << "):\n";
    for (std::size_t i = 0; i < counts.size(); ++i) {
        os << "  " << detail::pad(r.distribution.labels[i], 28) << counts[i] << "  (exact "
           << format_number(r.distribution.probabilities[i] * static_cast<double>(*c.shots)) << ")\n";
    }
}

/// Executes a parsed configuration. Throws std::invalid_argument on bad parameters.
inline int execute(const RunConfig& c, std::ostream& out, std::ostream& err) {
    if (c.shots && *c.shots < 1) throw std::invalid_argument("--shots must be >= 1");

    if (c.sweep_param) {
        const auto allowed = sweepable(c.scheme);
        if (std::find(allowed.begin(), allowed.end(), *c.sweep_param) == allowed.end())
            throw std::invalid_argument("--param " + *c.sweep_param + " cannot be swept for " + c.scheme);
        const auto grid = sweep_grid(c);
        std::vector<RunConfig> configs;
        for (double v : grid) configs.push_back(with_param(c, *c.sweep_param, v));
        for (const auto& cfg : configs) (void)pipeline_for(cfg);  // validate every point before running any

        std::vector<std::future<ProtocolReport>> jobs;
        for (const auto& cfg : configs) jobs.push_back(std::async(std::launch::async, [cfg] { return report_for(cfg); }));
        std::vector<ProtocolReport> reports;
        for (auto& j : jobs) reports.push_back(j.get());

        if (c.verify) {
            for (const auto& cfg : configs) {
                if (auto msg = verify_config(cfg)) {
                    err << "fockswap: " << *msg << '\n';
                    return kVerifyFailed;
                }
            }
        }
        if (c.format == "json") {
            auto arr = ordered_json::array();
            for (std::size_t i = 0; i < reports.size(); ++i) {
                auto j = to_json(reports[i]);
                j["sweep"] = {{"param", *c.sweep_param}, {"value", round_significant(grid[i])}};
                arr.push_back(std::move(j));
            }
            out << arr.dump(2) << '\n';
        } else {
            out << kCsvHeader << '\n';
            for (std::size_t i = 0; i < reports.size(); ++i)
                for (const auto& row : csv_rows(reports[i], *c.sweep_param, grid[i])) out << row << '\n';
        }
        return kOk;
    }

    const ProtocolReport r = report_for(c);
    if (c.verify) {
        if (auto msg = verify_config(c)) {
            err << "fockswap: " << *msg << '\n';
            return kVerifyFailed;
        }
    }
    if (c.format == "json") {
        auto j = to_json(r);
        if (c.verify) j["verified"] = true;
        if (c.shots) write_samples(out, c, r, &j);
        out << j.dump(2) << '\n';
    } else if (c.format == "csv") {
        write_csv(out, r);
    } else {
        write_table(out, r);
        if (c.verify) out << "oracle verification: passed\n";
        if (c.shots) write_samples(out, c, r, nullptr);
    }
    return kOk;
}

/// Full command line entry point; never throws.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Entanglement-swapping simulator over truncated Fock space", "fockswap"};
    app.require_subcommand(1);
    RunConfig c;

    auto common = [&](CLI::App* sub, bool with_eta) {
        if (with_eta) sub->add_option("--eta", c.eta, "detector efficiency");
        sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "csv", "table"}));
        sub->add_flag("--verify", c.verify, "cross-check against the dense oracle");
        sub->add_option("--shots", c.shots, "draw synthetic click counts");
        sub->add_option("--seed", c.seed, "seed for --shots");
        sub->add_option("--param", c.sweep_param, "parameter to sweep");
        sub->add_option("--from", c.sweep_from, "sweep start");
        sub->add_option("--to", c.sweep_to, "sweep end (inclusive)");
        sub->add_option("--steps", c.sweep_steps, "number of sweep points");
        sub->add_option("--values", c.sweep_values, "explicit sweep values")->delimiter(',');
    };
    auto tau_opts = [&](CLI::App* sub) {
        auto* t = sub->add_option("--tau", c.tau, "pair amplitude |tau|");
        auto* t2 = sub->add_option("--tau2", c.tau2, "pair probability |tau|^2");
        t->excludes(t2);
        sub->add_option("--order", c.order, "highest pair number kept");
    };

    auto* a = app.add_subcommand("scheme-a", "double-pass scheme, heralding on D1/D2");
    tau_opts(a);
    common(a, true);
    auto* ph = app.add_subcommand("verify-phase", "phase check of the double-pass scheme with D3/D4");
    tau_opts(ph);
    ph->add_flag("--ideal", c.ideal, "use the ideal single-pair heralded state");
    common(ph, true);
    auto* b = app.add_subcommand("scheme-b", "single-pass scheme with unbalanced or polarizing beam splitters");
    b->add_option("--epsilon", c.epsilon, "splitter imbalance / polarization tilt");
    b->add_option("--order", c.order, "highest pair number kept");
    b->add_option("--tau", c.tau, "relative amplitude of further pairs (order > 1)");
    b->add_option("--variant", c.variant, "ubs or pbs")->check(CLI::IsMember({"ubs", "pbs"}));
    common(b, true);
    auto* th = app.add_subcommand("theta", "Bell projection of two non-maximally entangled pairs");
    th->add_option("--theta", c.theta, "pair angle in radians");
    common(th, false);
    auto* bc = app.add_subcommand("bell-check", "Bell projection of two singlets");
    common(bc, false);
    auto* pol = app.add_subcommand("postselect-pol", "post-selection analysis, polarization encoding");
    pol->add_option("--y-weight", c.y_weight, "weight of the two-pairs-in-one-beam terms (0 removes them)");
    common(pol, true);
    auto* vac = app.add_subcommand("postselect-vac", "post-selection analysis, vacuum/one-photon encoding");
    common(vac, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }
    for (auto* sub : app.get_subcommands()) c.scheme = sub->get_name();

    try {
        return execute(c, out, err);
    } catch (const std::exception& e) {
        err << "fockswap: " << e.what() << '\n';
        return kUsage;
    }
}

}  // namespace fockswap::cli
