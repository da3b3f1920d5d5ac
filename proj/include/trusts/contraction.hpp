// Copyright 2026 The trusts Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "trusts/errors.hpp"
#include "trusts/gates.hpp"
#include "trusts/sparse_state.hpp"

namespace trusts {

/// Bit pattern selecting the two qubits a gate couples. Its complement
/// selects the "free" bits that define computationally independent groups.
inline BasisIndex gate_mask(int g1, int g2) {
    if (g1 == g2) {
        throw std::invalid_argument("gate_mask: targets must be distinct");
    }
    if (g1 < 0 || g2 < 0 || g1 >= kMaxQubits || g2 >= kMaxQubits) {
        throw std::invalid_argument("gate_mask: target outside 0..63");
    }
    return (BasisIndex{1} << g1) | (BasisIndex{1} << g2);
}

/// Splits a coordinate into (free bits, coupled bits): x_f = x & ~mask,
/// x_c = x & mask. Always x_f | x_c == x and x_f & x_c == 0.
constexpr std::pair<BasisIndex, BasisIndex> split_index(BasisIndex x, BasisIndex mask) {
    return {x & ~mask, x & mask};
}

namespace detail {

struct Term {
    BasisIndex coord;
    Amplitude amp;
};

// Joint sort of (coords, amps) by (x_f, x_c). The secondary x_c key is not
// required for grouping but makes the kernel output order canonical.
inline void sort_terms_by_free_index(std::span<BasisIndex> coords, std::span<Amplitude> amps,
                                     BasisIndex mask, std::vector<Term> &buf) {
    const std::size_t n = coords.size();
    buf.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        buf[i] = Term{coords[i], amps[i]};
    }
    std::sort(buf.begin(), buf.end(), [mask](const Term &a, const Term &b) {
        const BasisIndex af = a.coord & ~mask;
        const BasisIndex bf = b.coord & ~mask;
        if (af != bf) {
            return af < bf;
        }
        return (a.coord & mask) < (b.coord & mask);
    });
    for (std::size_t i = 0; i < n; ++i) {
        coords[i] = buf[i].coord;
        amps[i] = buf[i].amp;
    }
}

} // namespace detail

/// Permutes the live region of `state` so entries sharing the same free bits
/// x_f are contiguous (ascending x_f, then ascending x_c within a group).
inline void sort_by_free_index(SparseState &state, BasisIndex mask) {
    std::vector<detail::Term> buf;
    detail::sort_terms_by_free_index(state.mutable_coords(), state.mutable_amps(), mask, buf);
}

/// Post-gate overflow buffer: a two-qubit gate grows the term count by at
/// most a factor of four, so output arrays hold 4x the state capacity. Also
/// owns the reusable sort/selection scratch for one simulation.
struct ContractionWorkspace {
    explicit ContractionWorkspace(std::size_t state_capacity)
        : coords(4 * state_capacity), amps(4 * state_capacity) {}

    std::vector<BasisIndex> coords;
    std::vector<Amplitude> amps;
    std::size_t n_out = 0;

    std::size_t capacity() const { return coords.size(); }

    // scratch reused across gates to avoid per-gate allocation
    std::vector<detail::Term> sort_buf;
    std::vector<std::uint32_t> pick;
    std::vector<double> probs;
};

/// Applies a two-qubit gate to the state, writing the (pre-truncation) result
/// into the workspace. The state is sorted in place by free index, then each
/// x_f group is contracted independently with the 4x4 matrix in one pass:
/// amplitudes landing on the same output coordinate are combined as they are
/// produced, and exact-zero outputs (or |amp| <= drop_epsilon when set) are
/// never emitted. The state's own terms are left permuted but unchanged.
inline void apply_gate(SparseState &state, const TwoQubitGate &gate, ContractionWorkspace &ws,
                       double drop_epsilon = 0.0) {
    const int g1 = gate.target_low;
    const int g2 = gate.target_high;
    if (g1 == g2) {
        throw std::invalid_argument("apply_gate: duplicate gate targets");
    }
    if (g1 < 0 || g2 < 0 || g1 >= state.num_qubits() || g2 >= state.num_qubits()) {
        throw std::invalid_argument("apply_gate: gate target out of range");
    }
    if (ws.capacity() < 4 * state.capacity()) {
        throw std::invalid_argument("apply_gate: workspace smaller than 4x state capacity");
    }

    const BasisIndex mask = gate_mask(g1, g2);
    detail::sort_terms_by_free_index(state.mutable_coords(), state.mutable_amps(), mask,
                                     ws.sort_buf);

    const std::span<const BasisIndex> coords = state.coords();
    const std::span<const Amplitude> amps = state.amps();
    const std::array<Amplitude, 16> &u = gate.matrix;
    const double eps_sq = drop_epsilon * drop_epsilon;
    const std::size_t n = coords.size();
    std::size_t out = 0;
    std::size_t i = 0;
    while (i < n) {
        const BasisIndex x_f = coords[i] & ~mask;
        Amplitude acc[4] = {};
        std::size_t j = i;
        for (; j < n && (coords[j] & ~mask) == x_f; ++j) {
            // coordinate uniqueness makes duplicate x_c within a group
            // impossible; after the (x_f, x_c) sort that means strict ascent
            assert(j == i || coords[j] != coords[j - 1]);
            const BasisIndex x_c = coords[j] & mask;
            const int col = static_cast<int>(((x_c >> g1) & 1) | (((x_c >> g2) & 1) << 1));
            const Amplitude a = amps[j];
            acc[0] += u[0 * 4 + col] * a;
            acc[1] += u[1 * 4 + col] * a;
            acc[2] += u[2 * 4 + col] * a;
            acc[3] += u[3 * 4 + col] * a;
        }
        for (int row = 0; row < 4; ++row) {
            if (std::norm(acc[row]) <= eps_sq) {
                continue;
            }
            if (out == ws.capacity()) {
                // unreachable when the 4x precondition holds
                throw ResourceLimitError("apply_gate: workspace overflow");
            }
            ws.coords[out] =
                x_f | (BasisIndex{static_cast<unsigned>(row) & 1} << g1) |
                (BasisIndex{(static_cast<unsigned>(row) >> 1) & 1} << g2);
            ws.amps[out] = acc[row];
            ++out;
        }
        i = j;
    }
    ws.n_out = out;
}

} // namespace trusts
