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

// Sparse multimode Fock states over a fixed, ordered mode register.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "fockswap/format.hpp"
#include "json.hpp"

namespace fockswap {

using Amplitude = std::complex<double>;

/// Photon count per mode, in register order.
using Occupation = std::vector<unsigned>;

/// Amplitudes with magnitude below this are not stored.
inline constexpr double kPruneTolerance = 1e-14;

/// Tolerance for "normalized" and for ensemble weight sums.
inline constexpr double kNormTolerance = 1e-12;

inline unsigned total_photons(const Occupation& occ) {
    return std::accumulate(occ.begin(), occ.end(), 0u);
}

/// Ordered list of uniquely named optical modes sharing one photon-number cutoff.
class ModeRegister {
  public:
    ModeRegister() = default;

    ModeRegister(std::vector<std::string> labels, unsigned cutoff)
        : labels_(std::move(labels)), cutoff_(cutoff) {
        if (cutoff_ < 1) throw std::invalid_argument("mode register cutoff must be >= 1");
        std::unordered_set<std::string> seen;
        for (const auto& l : labels_) {
            if (l.empty()) throw std::invalid_argument("empty mode label");
            if (!seen.insert(l).second) throw std::invalid_argument("duplicate mode label '" + l + "'");
        }
    }

    const std::vector<std::string>& labels() const { return labels_; }
    std::size_t size() const { return labels_.size(); }
    unsigned cutoff() const { return cutoff_; }

    std::optional<std::size_t> find(std::string_view label) const {
        auto it = std::find(labels_.begin(), labels_.end(), label);
        if (it == labels_.end()) return std::nullopt;
        return static_cast<std::size_t>(it - labels_.begin());
    }

    bool contains(std::string_view label) const { return find(label).has_value(); }

    std::size_t index_of(std::string_view label) const {
        auto i = find(label);
        if (!i) throw std::invalid_argument("unknown mode '" + std::string(label) + "'");
        return *i;
    }

    std::vector<std::size_t> indices_of(const std::vector<std::string>& labels) const {
        std::vector<std::size_t> out;
        out.reserve(labels.size());
        for (const auto& l : labels) {
            auto i = index_of(l);
            if (std::find(out.begin(), out.end(), i) != out.end())
                throw std::invalid_argument("mode '" + l + "' listed twice");
            out.push_back(i);
        }
        return out;
    }

    ModeRegister with_cutoff(unsigned cutoff) const { return ModeRegister(labels_, cutoff); }

    /// Same labels in the same order; cutoffs may differ.
    bool same_modes(const ModeRegister& other) const { return labels_ == other.labels_; }

    friend bool operator==(const ModeRegister&, const ModeRegister&) = default;

  private:
    std::vector<std::string> labels_;
    unsigned cutoff_ = 1;
};

/// Sparse ket: occupation vector -> complex amplitude.
///
/// Terms are kept in lexicographic occupation order, so iteration, printing and
/// serialization are deterministic. Every stored amplitude has magnitude at
/// least `prune_tolerance()`; a tolerance of 0 disables pruning (exact zeros
/// are still dropped).
class FockKet {
  public:
    using TermMap = std::map<Occupation, Amplitude>;

    FockKet() = default;

    explicit FockKet(ModeRegister reg, double prune_tolerance = kPruneTolerance)
        : reg_(std::move(reg)), prune_tol_(prune_tolerance) {}

    FockKet(ModeRegister reg, TermMap terms, double prune_tolerance = kPruneTolerance)
        : reg_(std::move(reg)), terms_(std::move(terms)), prune_tol_(prune_tolerance) {
        for (const auto& [occ, amp] : terms_) check_occupation(occ);
        prune();
    }

    static FockKet vacuum(ModeRegister reg, double prune_tolerance = kPruneTolerance) {
        Occupation zeros(reg.size(), 0u);
        return basis(std::move(reg), std::move(zeros), 1.0, prune_tolerance);
    }

    static FockKet basis(ModeRegister reg, Occupation occ, Amplitude amp = 1.0,
                         double prune_tolerance = kPruneTolerance) {
        TermMap t;
        t.emplace(std::move(occ), amp);
        return FockKet(std::move(reg), std::move(t), prune_tolerance);
    }

    const ModeRegister& modes() const { return reg_; }
    const TermMap& terms() const { return terms_; }
    double prune_tolerance() const { return prune_tol_; }
    std::size_t term_count() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    Amplitude amplitude(const Occupation& occ) const {
        auto it = terms_.find(occ);
        return it == terms_.end() ? Amplitude{} : it->second;
    }

    unsigned max_occupation() const {
        unsigned m = 0;
        for (const auto& [occ, amp] : terms_)
            for (auto n : occ) m = std::max(m, n);
        return m;
    }

    FockKet scaled(Amplitude factor) const {
        TermMap t;
        for (const auto& [occ, amp] : terms_) t.emplace(occ, amp * factor);
        return FockKet(reg_, std::move(t), prune_tol_);
    }

    /// Superposition; both kets must live on the same modes.
    FockKet plus(const FockKet& other, Amplitude factor = 1.0) const {
        if (!reg_.same_modes(other.reg_)) throw std::invalid_argument("cannot add kets on different registers");
        TermMap t = terms_;
        for (const auto& [occ, amp] : other.terms_) t[occ] += factor * amp;
        ModeRegister reg = reg_.with_cutoff(std::max(reg_.cutoff(), other.reg_.cutoff()));
        return FockKet(std::move(reg), std::move(t), std::min(prune_tol_, other.prune_tol_));
    }

  private:
    void check_occupation(const Occupation& occ) const {
        if (occ.size() != reg_.size())
            throw std::invalid_argument("occupation length does not match register size");
        for (auto n : occ)
            if (n > reg_.cutoff())
                throw std::out_of_range("occupation " + std::to_string(n) + " exceeds cutoff " +
                                        std::to_string(reg_.cutoff()));
    }

    void prune() {
        std::erase_if(terms_, [&](const auto& kv) {
            double mag = std::abs(kv.second);
            return mag == 0.0 || mag < prune_tol_;
        });
    }

    ModeRegister reg_;
    TermMap terms_;
    double prune_tol_ = kPruneTolerance;
};

inline double norm(const FockKet& a) {
    double s = 0.0;
    for (const auto& [occ, amp] : a.terms()) s += std::norm(amp);
    return std::sqrt(s);
}

inline FockKet normalize(const FockKet& a) {
    double n = norm(a);
    if (!(n > 0.0)) throw std::domain_error("cannot normalize the zero ket");
    return a.scaled(1.0 / n);
}

inline bool is_normalized(const FockKet& a, double tol = kNormTolerance) {
    return std::abs(norm(a) - 1.0) <= tol;
}

/// <a|b>, conjugate-linear in `a`. Registers must list the same modes in the same order.
inline Amplitude inner_product(const FockKet& a, const FockKet& b) {
    if (!a.modes().same_modes(b.modes())) throw std::invalid_argument("inner product of kets on different registers");
    const auto& small = a.term_count() <= b.term_count() ? a : b;
    const auto& large = a.term_count() <= b.term_count() ? b : a;
    Amplitude s{};
    for (const auto& [occ, amp] : small.terms()) {
        auto other = large.amplitude(occ);
        s += (&small == &a) ? std::conj(amp) * other : std::conj(other) * amp;
    }
    return s;
}

/// Kronecker product; the result register is a's modes followed by b's.
inline FockKet tensor_product(const FockKet& a, const FockKet& b) {
    std::vector<std::string> labels = a.modes().labels();
    for (const auto& l : b.modes().labels()) {
        if (a.modes().contains(l)) throw std::invalid_argument("tensor product: mode '" + l + "' in both factors");
        labels.push_back(l);
    }
    ModeRegister reg(std::move(labels), std::max(a.modes().cutoff(), b.modes().cutoff()));
    FockKet::TermMap t;
    for (const auto& [ua, xa] : a.terms()) {
        for (const auto& [ub, xb] : b.terms()) {
            Occupation occ = ua;
            occ.insert(occ.end(), ub.begin(), ub.end());
            t.emplace(std::move(occ), xa * xb);
        }
    }
    return FockKet(std::move(reg), std::move(t), std::min(a.prune_tolerance(), b.prune_tolerance()));
}

/// Same state with modes listed in `order` (a permutation of the current labels).
inline FockKet reorder(const FockKet& a, const std::vector<std::string>& order) {
    if (order.size() != a.modes().size()) throw std::invalid_argument("reorder: label count mismatch");
    auto idx = a.modes().indices_of(order);
    ModeRegister reg(order, a.modes().cutoff());
    FockKet::TermMap t;
    for (const auto& [occ, amp] : a.terms()) {
        Occupation o(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) o[i] = occ[idx[i]];
        t.emplace(std::move(o), amp);
    }
    return FockKet(std::move(reg), std::move(t), a.prune_tolerance());
}

/// Renames modes in place; labels absent from `renames` keep their name.
inline FockKet relabel(const FockKet& a, const std::vector<std::pair<std::string, std::string>>& renames) {
    std::vector<std::string> labels = a.modes().labels();
    for (const auto& [from, to] : renames) labels[a.modes().index_of(from)] = to;
    ModeRegister reg(std::move(labels), a.modes().cutoff());
    return FockKet(std::move(reg), a.terms(), a.prune_tolerance());
}

/// Partial inner product <bra|_S |a> over the modes S of `bra`. The result lives
/// on the remaining modes of `a`, in a's order, and is not renormalized.
inline FockKet contract(const FockKet& bra, const FockKet& a) {
    const auto& sub = bra.modes().labels();
    auto sub_idx = a.modes().indices_of(sub);
    std::vector<std::size_t> rest_idx;
    std::vector<std::string> rest_labels;
    for (std::size_t i = 0; i < a.modes().size(); ++i) {
        if (std::find(sub_idx.begin(), sub_idx.end(), i) == sub_idx.end()) {
            rest_idx.push_back(i);
            rest_labels.push_back(a.modes().labels()[i]);
        }
    }
    if (rest_labels.empty()) throw std::invalid_argument("contract: no modes left");
    FockKet::TermMap t;
    for (const auto& [occ, amp] : a.terms()) {
        Occupation s(sub_idx.size());
        for (std::size_t i = 0; i < sub_idx.size(); ++i) s[i] = occ[sub_idx[i]];
        Amplitude b = bra.amplitude(s);
        if (b == Amplitude{}) continue;
        Occupation r(rest_idx.size());
        for (std::size_t i = 0; i < rest_idx.size(); ++i) r[i] = occ[rest_idx[i]];
        t[r] += std::conj(b) * amp;
    }
    return FockKet(ModeRegister(std::move(rest_labels), a.modes().cutoff()), std::move(t), a.prune_tolerance());
}

// ---------------------------------------------------------------------------
// Mixed states

struct EnsembleMember {
    double weight = 0.0;
    FockKet state;
};

/// Mixture of normalized pure kets on one register.
class WeightedEnsemble {
  public:
    WeightedEnsemble() = default;

    WeightedEnsemble(ModeRegister reg, std::vector<EnsembleMember> members)
        : reg_(std::move(reg)), members_(std::move(members)) {
        double total = 0.0;
        for (const auto& m : members_) {
            if (!(m.weight > 0.0)) throw std::invalid_argument("ensemble weights must be strictly positive");
            if (!m.state.modes().same_modes(reg_)) throw std::invalid_argument("ensemble member on a different register");
            if (!is_normalized(m.state)) throw std::invalid_argument("ensemble member is not normalized");
            total += m.weight;
        }
        if (!members_.empty() && std::abs(total - 1.0) > kNormTolerance)
            throw std::invalid_argument("ensemble weights sum to " + format_number(total));
    }

    static WeightedEnsemble pure(const FockKet& state) {
        return WeightedEnsemble(state.modes(), {{1.0, normalize(state)}});
    }

    const ModeRegister& modes() const { return reg_; }
    const std::vector<EnsembleMember>& members() const { return members_; }
    bool empty() const { return members_.empty(); }

  private:
    ModeRegister reg_;
    std::vector<EnsembleMember> members_;
};

/// sum_i w_i |<target|psi_i>|^2.
inline double fidelity(const WeightedEnsemble& e, const FockKet& target) {
    if (!e.modes().same_modes(target.modes())) throw std::invalid_argument("fidelity: register mismatch");
    if (!is_normalized(target)) throw std::invalid_argument("fidelity: target is not normalized");
    double f = 0.0;
    for (const auto& m : e.members()) f += m.weight * std::norm(inner_product(target, m.state));
    return std::clamp(f, 0.0, 1.0);
}

inline WeightedEnsemble reorder(const WeightedEnsemble& e, const std::vector<std::string>& order) {
    std::vector<EnsembleMember> members;
    for (const auto& m : e.members()) members.push_back({m.weight, reorder(m.state, order)});
    return WeightedEnsemble(ModeRegister(order, e.modes().cutoff()), std::move(members));
}

// ---------------------------------------------------------------------------
// Bell states in the vacuum/one-photon encoding

enum class Bell { psi_plus, psi_minus, phi_plus, phi_minus };

inline constexpr Bell kAllBell[] = {Bell::psi_plus, Bell::psi_minus, Bell::phi_plus, Bell::phi_minus};

inline std::string_view bell_name(Bell b) {
    switch (b) {
        case Bell::psi_plus: return "psi_plus";
        case Bell::psi_minus: return "psi_minus";
        case Bell::phi_plus: return "phi_plus";
        case Bell::phi_minus: return "phi_minus";
    }
    return "?";
}

/// Bell state on modes (i, j) of `reg`, other modes in vacuum.
///   phi_pm = (|0>_i|0>_j +- |1>_i|1>_j) / sqrt2
///   psi_pm = (|0>_i|1>_j +- |1>_i|0>_j) / sqrt2
inline FockKet bell_state(Bell kind, const ModeRegister& reg, std::string_view i, std::string_view j) {
    auto a = reg.index_of(i);
    auto b = reg.index_of(j);
    if (a == b) throw std::invalid_argument("bell_state needs two distinct modes");
    const double h = 1.0 / std::sqrt(2.0);
    const double sign = (kind == Bell::psi_plus || kind == Bell::phi_plus) ? 1.0 : -1.0;
    Occupation first(reg.size(), 0u), second(reg.size(), 0u);
    if (kind == Bell::phi_plus || kind == Bell::phi_minus) {
        second[a] = second[b] = 1;
    } else {
        first[b] = 1;
        second[a] = 1;
    }
    FockKet::TermMap t{{first, h}, {second, sign * h}};
    return FockKet(reg, std::move(t));
}

inline FockKet bell_state(Bell kind, std::string i, std::string j) {
    ModeRegister reg({i, j}, 1);
    return bell_state(kind, reg, i, j);
}

// ---------------------------------------------------------------------------
// Printing and debug serialization

inline std::string format_amplitude(Amplitude a, int digits = 12) {
    if (a.imag() == 0.0) return format_number(a.real(), digits);
    if (a.real() == 0.0) return format_number(a.imag(), digits) + "i";
    std::string im = format_number(a.imag(), digits);
    if (im.front() != '-') im.insert(0, "+");
    return "(" + format_number(a.real(), digits) + im + "i)";
}

/// e.g. "0.5|0101> - 0.5|0110>"; modes left to right in register order.
inline std::string to_string(const FockKet& a, int digits = 12) {
    if (a.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [occ, amp] : a.terms()) {
        std::string coeff = format_amplitude(amp, digits);
        if (!first) {
            if (coeff.front() == '-') {
                out += " - ";
                coeff.erase(0, 1);
            } else {
                out += " + ";
            }
        }
        first = false;
        out += coeff + "|";
        bool wide = a.modes().cutoff() > 9;
        for (std::size_t i = 0; i < occ.size(); ++i) {
            if (wide && i > 0) out += ",";
            out += std::to_string(occ[i]);
        }
        out += ">";
    }
    return out;
}

inline nlohmann::ordered_json to_json(const FockKet& a) {
    nlohmann::ordered_json j;
    j["modes"] = a.modes().labels();
    auto terms = nlohmann::ordered_json::array();
    for (const auto& [occ, amp] : a.terms()) {
        nlohmann::ordered_json t;
        t["occ"] = occ;
        t["re"] = amp.real();
        t["im"] = amp.imag();
        terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);
    return j;
}

/// Inverse of to_json. The cutoff is the largest occupation present (at least 1)
/// unless a larger one is given.
template <class Json>
FockKet ket_from_json(const Json& j, unsigned cutoff = 1) {
    auto labels = j.at("modes").template get<std::vector<std::string>>();
    FockKet::TermMap t;
    for (const auto& term : j.at("terms")) {
        auto occ = term.at("occ").template get<Occupation>();
        for (auto n : occ) cutoff = std::max(cutoff, n);
        t[occ] += Amplitude(term.at("re").template get<double>(), term.at("im").template get<double>());
    }
    return FockKet(ModeRegister(std::move(labels), cutoff), std::move(t));
}

}  // namespace fockswap
