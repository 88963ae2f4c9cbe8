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

// Report output: JSON, CSV and a plain-text table. Every float is written with
// 12 significant digits so output is byte-stable for a fixed configuration.

#pragma once

#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fockswap/format.hpp"
#include "fockswap/protocols.hpp"
#include "json.hpp"

namespace fockswap {

using ordered_json = nlohmann::ordered_json;

inline ordered_json to_json(const ProtocolReport& r) {
    auto num = [](double v) { return round_significant(v); };
    ordered_json j;
    j["scheme"] = r.scheme;
    ordered_json params = ordered_json::object();
    for (const auto& [k, v] : r.params) params[k] = num(v);
    j["params"] = std::move(params);

    auto events = ordered_json::array();
    for (const auto& e : r.events) {
        ordered_json ev;
        ev["name"] = e.name;
        ev["probability"] = num(e.probability);
        ev["fidelity_psi_plus"] = num(e.fidelity_psi_plus);
        ev["fidelity_psi_minus"] = num(e.fidelity_psi_minus);
        ev["impossible"] = e.impossible;
        if (!e.target.empty()) ev["target"] = e.target;
        if (e.fidelity_target) ev["fidelity_target"] = num(*e.fidelity_target);
        if (e.target_coefficient) {
            ev["coefficient_re"] = num(e.target_coefficient->real());
            ev["coefficient_im"] = num(e.target_coefficient->imag());
        }
        auto members = ordered_json::array();
        for (const auto& m : e.members) members.push_back({{"weight", num(m.weight)}, {"ket", m.ket}});
        ev["members"] = std::move(members);
        events.push_back(std::move(ev));
    }
    j["events"] = std::move(events);

    if (r.coincidences) {
        ordered_json c;
        c["detectors"] = r.coincidences->table.detectors();
        auto joint = ordered_json::array();
        for (std::size_t i = 0; i < r.coincidences->table.joint().size(); ++i)
            joint.push_back({{"pattern", r.coincidences->table.label(i)}, {"probability", num(r.coincidences->table.joint()[i])}});
        c["joint"] = std::move(joint);
        ordered_json cond = ordered_json::object();
        for (const auto& [k, v] : r.coincidences->conditionals) cond[k] = v ? ordered_json(num(*v)) : ordered_json(nullptr);
        c["conditional"] = std::move(cond);
        j["coincidences"] = std::move(c);
    }
    if (!r.metrics.empty()) {
        ordered_json m = ordered_json::object();
        for (const auto& [k, v] : r.metrics) m[k] = num(v);
        j["metrics"] = std::move(m);
    }
    auto dist = ordered_json::array();
    for (std::size_t i = 0; i < r.distribution.labels.size(); ++i)
        dist.push_back({{"outcome", r.distribution.labels[i]}, {"probability", num(r.distribution.probabilities[i])}});
    j["distribution"] = std::move(dist);
    j["notes"] = r.notes;
    j["dropped_mass"] = num(r.dropped_mass);
    return j;
}

inline constexpr const char* kCsvHeader = "param,value,event,probability,fidelity_psi_plus,fidelity_psi_minus";

/// CSV rows (no header) for one report. `param`/`value` are empty for a single run.
/// Conditional coincidence probabilities appear as extra rows with empty fidelity cells.
inline std::vector<std::string> csv_rows(const ProtocolReport& r, const std::string& param = "",
                                         std::optional<double> value = std::nullopt) {
    const std::string prefix = param + "," + (value ? format_number(*value) : std::string()) + ",";
    std::vector<std::string> rows;
    for (const auto& e : r.events) {
        rows.push_back(prefix + e.name + "," + format_number(e.probability) + "," + format_number(e.fidelity_psi_plus) +
                       "," + format_number(e.fidelity_psi_minus));
    }
    if (r.coincidences)
        for (const auto& [k, v] : r.coincidences->conditionals)
            rows.push_back(prefix + k + "," + (v ? format_number(*v) : std::string()) + ",,");
    return rows;
}

inline void write_csv(std::ostream& os, const ProtocolReport& r) {
    os << kCsvHeader << '\n';
    for (const auto& row : csv_rows(r)) os << row << '\n';
}

namespace detail {
inline std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}
}  // namespace detail

inline void write_table(std::ostream& os, const ProtocolReport& r) {
    os << "scheme: " << r.scheme << '\n';
    if (!r.params.empty()) {
        os << "params:";
        for (const auto& [k, v] : r.params) os << ' ' << k << '=' << format_number(v);
        os << '\n';
    }
    os << '\n'
       << detail::pad("event", 14) << detail::pad("probability", 20) << detail::pad("F(psi+)", 20)
       << detail::pad("F(psi-)", 20) << "target\n";
    for (const auto& e : r.events) {
        os << detail::pad(e.name, 14) << detail::pad(format_number(e.probability), 20)
           << detail::pad(format_number(e.fidelity_psi_plus), 20) << detail::pad(format_number(e.fidelity_psi_minus), 20);
        if (e.impossible) os << "impossible";
        else if (e.fidelity_target) os << e.target << " F=" << format_number(*e.fidelity_target);
        os << '\n';
    }
    for (const auto& e : r.events) {
        if (e.members.empty()) continue;
        os << '\n' << e.name << " conditional ensemble:\n";
        for (const auto& m : e.members) os << "  " << detail::pad(format_number(m.weight), 20) << m.ket << '\n';
    }
    if (r.coincidences) {
        os << "\ncoincidences (" ;
        for (std::size_t i = 0; i < r.coincidences->table.detectors().size(); ++i)
            os << (i ? "," : "") << r.coincidences->table.detectors()[i];
        os << "):\n";
        for (std::size_t i = 0; i < r.coincidences->table.joint().size(); ++i)
            os << "  " << r.coincidences->table.label(i) << "  " << format_number(r.coincidences->table.joint()[i]) << '\n';
        for (const auto& [k, v] : r.coincidences->conditionals)
            os << "  " << detail::pad(k, 16) << (v ? format_number(*v) : std::string("undefined")) << '\n';
    }
    if (!r.metrics.empty()) {
        os << "\nmetrics:\n";
        for (const auto& [k, v] : r.metrics) os << "  " << detail::pad(k, 32) << format_number(v) << '\n';
    }
    if (!r.notes.empty()) {
        os << "\nnotes:\n";
        for (const auto& n : r.notes) os << "  " << n << '\n';
    }
    os << "dropped mass: " << format_number(r.dropped_mass) << '\n';
}

}  // namespace fockswap
