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

// Passive linear-optical elements acting on Fock kets.
//
// A ModeUnitary M on modes (m_0, ..., m_{k-1}) transforms creation operators as
//
//     a_{m_c}^dagger  ->  sum_r M(r, c) a_{m_r}^dagger,
//
// i.e. the input port c feeds column c of M. Each Fock term is rewritten by
// substituting every creation operator, expanding the powers multinomially and
// restoring the sqrt(n!) normalization of the output occupations.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fockswap/fock.hpp"

namespace fockswap {

/// Dense square complex matrix, row-major, unitary up to 1e-12.
class ModeUnitary {
  public:
    ModeUnitary() = default;

    ModeUnitary(std::size_t size, std::vector<Amplitude> row_major)
        : size_(size), m_(std::move(row_major)) {
        if (size_ == 0 || m_.size() != size_ * size_) throw std::invalid_argument("ModeUnitary: bad shape");
        if (unitarity_defect() > 1e-12) throw std::invalid_argument("ModeUnitary: matrix is not unitary");
    }

    static ModeUnitary identity(std::size_t size) {
        std::vector<Amplitude> m(size * size);
        for (std::size_t i = 0; i < size; ++i) m[i * size + i] = 1.0;
        return ModeUnitary(size, std::move(m));
    }

    std::size_t size() const { return size_; }
    Amplitude operator()(std::size_t r, std::size_t c) const { return m_[r * size_ + c]; }

    ModeUnitary adjoint() const {
        std::vector<Amplitude> m(size_ * size_);
        for (std::size_t r = 0; r < size_; ++r)
            for (std::size_t c = 0; c < size_; ++c) m[c * size_ + r] = std::conj((*this)(r, c));
        return ModeUnitary(size_, std::move(m));
    }

    friend ModeUnitary operator*(const ModeUnitary& a, const ModeUnitary& b) {
        if (a.size_ != b.size_) throw std::invalid_argument("ModeUnitary: size mismatch");
        std::vector<Amplitude> m(a.size_ * a.size_);
        for (std::size_t r = 0; r < a.size_; ++r)
            for (std::size_t c = 0; c < a.size_; ++c)
                for (std::size_t k = 0; k < a.size_; ++k) m[r * a.size_ + c] += a(r, k) * b(k, c);
        return ModeUnitary(a.size_, std::move(m));
    }

    /// max |(M^dagger M - I)_{rc}|
    double unitarity_defect() const {
        double worst = 0.0;
        for (std::size_t r = 0; r < size_; ++r) {
            for (std::size_t c = 0; c < size_; ++c) {
                Amplitude s{};
                for (std::size_t k = 0; k < size_; ++k) s += std::conj((*this)(k, r)) * (*this)(k, c);
                if (r == c) s -= 1.0;
                worst = std::max(worst, std::abs(s));
            }
        }
        return worst;
    }

  private:
    std::size_t size_ = 0;
    std::vector<Amplitude> m_;
};

/// (1/sqrt2) [[1, 1], [1, -1]]
inline ModeUnitary balanced_bs() {
    const double h = 1.0 / std::sqrt(2.0);
    return ModeUnitary(2, {h, h, h, -h});
}

/// (1/sqrt(1+eps^2)) [[1, eps], [eps, -1]]. At eps = 1 this is balanced_bs().
inline ModeUnitary unbalanced_bs(double epsilon) {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("unbalanced_bs: epsilon must lie in (0, 1]");
    const double s = 1.0 / std::sqrt(1.0 + epsilon * epsilon);
    return ModeUnitary(2, {s, s * epsilon, s * epsilon, -s});
}

/// Rotation on a beam's (H, V) pair taking H to (H + eps V)/sqrt(1+eps^2) and
/// V to (-eps H + V)/sqrt(1+eps^2).
inline ModeUnitary polarization_rotation(double epsilon) {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("polarization_rotation: epsilon must be >= 0");
    const double s = 1.0 / std::sqrt(1.0 + epsilon * epsilon);
    return ModeUnitary(2, {s, -s * epsilon, s * epsilon, s});
}

enum class CutoffPolicy {
    strict,  ///< reject results with an occupation above the register cutoff
    grow,    ///< raise the register cutoff to fit the result
};

namespace detail {

inline constexpr unsigned kMaxFactorialArg = 20;

inline std::uint64_t factorial(unsigned n) {
    if (n > kMaxFactorialArg) throw std::out_of_range("photon number above 20 is not supported");
    std::uint64_t f = 1;
    for (unsigned i = 2; i <= n; ++i) f *= i;
    return f;
}

/// (j_0 + j_1 + ...)! / (j_0! j_1! ...), exact.
inline std::uint64_t multinomial(const std::vector<unsigned>& parts) {
    // Built as a product of binomials so intermediate values stay small.
    std::uint64_t result = 1;
    unsigned placed = 0;
    for (auto j : parts) {
        for (unsigned i = 1; i <= j; ++i) {
            result = result * (placed + i) / i;
        }
        placed += j;
    }
    return result;
}

/// Calls f(parts) for every way of writing n as an ordered sum of k non-negative parts.
template <class F>
void for_each_composition(unsigned n, std::size_t k, F&& f) {
    std::vector<unsigned> parts(k, 0u);
    auto rec = [&](auto&& self, std::size_t pos, unsigned left) -> void {
        if (pos + 1 == k) {
            parts[pos] = left;
            f(parts);
            return;
        }
        for (unsigned j = 0; j <= left; ++j) {
            parts[pos] = j;
            self(self, pos + 1, left - j);
        }
    };
    if (k == 0) return;
    rec(rec, 0, n);
}

}  // namespace detail

/// Applies `u` to the listed modes of `state` (modes[c] is port c of `u`).
/// Photon number is conserved term by term and the norm is preserved.
inline FockKet apply_mode_unitary(const FockKet& state, const ModeUnitary& u, const std::vector<std::string>& modes,
                                  CutoffPolicy policy = CutoffPolicy::grow) {
    if (modes.size() != u.size()) throw std::invalid_argument("apply_mode_unitary: mode count does not match unitary size");
    const auto idx = state.modes().indices_of(modes);
    const std::size_t k = idx.size();

    FockKet::TermMap out;
    for (const auto& [occ, amp] : state.terms()) {
        // Expansion of prod_c (sum_r u(r,c) a_r^dagger)^{n_c} as monomial -> coefficient.
        std::map<std::vector<unsigned>, Amplitude> poly{{std::vector<unsigned>(k, 0u), 1.0}};
        double in_norm = 1.0;
        for (std::size_t c = 0; c < k; ++c) {
            const unsigned n = occ[idx[c]];
            in_norm *= static_cast<double>(detail::factorial(n));
            if (n == 0) continue;
            std::map<std::vector<unsigned>, Amplitude> next;
            detail::for_each_composition(n, k, [&](const std::vector<unsigned>& parts) {
                Amplitude w = static_cast<double>(detail::multinomial(parts));
                for (std::size_t r = 0; r < k; ++r)
                    if (parts[r] > 0) w *= std::pow(u(r, c), static_cast<int>(parts[r]));
                if (w == Amplitude{}) return;
                for (const auto& [mono, coeff] : poly) {
                    auto e = mono;
                    for (std::size_t r = 0; r < k; ++r) e[r] += parts[r];
                    next[e] += coeff * w;
                }
            });
            poly = std::move(next);
        }
        for (const auto& [mono, coeff] : poly) {
            double out_norm = 1.0;
            for (auto m : mono) out_norm *= static_cast<double>(detail::factorial(m));
            Occupation o = occ;
            for (std::size_t r = 0; r < k; ++r) o[idx[r]] = mono[r];
            out[o] += amp * coeff * std::sqrt(out_norm / in_norm);
        }
    }

    unsigned needed = state.modes().cutoff();
    for (const auto& [occ, amp] : out)
        for (auto n : occ) needed = std::max(needed, n);
    if (needed > state.modes().cutoff() && policy == CutoffPolicy::strict) {
        // Only complain about terms that survive pruning.
        for (const auto& [occ, amp] : out) {
            if (std::abs(amp) < state.prune_tolerance() || amp == Amplitude{}) continue;
            for (auto n : occ)
                if (n > state.modes().cutoff())
                    throw std::out_of_range("apply_mode_unitary: result exceeds cutoff " +
                                            std::to_string(state.modes().cutoff()));
        }
        std::erase_if(out, [&](const auto& kv) {
            return std::any_of(kv.first.begin(), kv.first.end(), [&](unsigned n) { return n > state.modes().cutoff(); });
        });
        needed = state.modes().cutoff();
    }
    return FockKet(state.modes().with_cutoff(needed), std::move(out), state.prune_tolerance());
}

/// A pure relabeling of modes, used for polarizing beam splitters.
struct ModeRouting {
    std::vector<std::pair<std::string, std::string>> moves;  ///< input label -> output label
};

/// Polarizing beam splitter on one beam: H is transmitted into `out_h`, V is
/// reflected into `out_v`. Both routes carry phase +1; any other fixed phase
/// choice only rephases the V branch and leaves all probabilities unchanged.
inline ModeRouting pbs(const std::pair<std::string, std::string>& beam_in,
                       const std::pair<std::string, std::string>& beam_out) {
    const std::array<std::string, 4> all{beam_in.first, beam_in.second, beam_out.first, beam_out.second};
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j)
            if (all[i] == all[j]) throw std::invalid_argument("pbs: label collision on '" + all[i] + "'");
    return ModeRouting{{{beam_in.first, beam_out.first}, {beam_in.second, beam_out.second}}};
}

inline FockKet apply_routing(const FockKet& state, const ModeRouting& routing) {
    return relabel(state, routing.moves);
}

}  // namespace fockswap
