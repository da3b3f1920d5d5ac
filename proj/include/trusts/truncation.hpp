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
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

#include "trusts/contraction.hpp"
#include "trusts/errors.hpp"
#include "trusts/rng.hpp"
#include "trusts/sparse_state.hpp"

namespace trusts {

enum class TruncationKind {
    kTopK,    // keep the k terms of largest probability
    kRandomK, // keep a uniformly random k-subset
    kNone,    // keep everything; capacity must cover the full basis
};

struct TruncationPolicy {
    TruncationKind kind = TruncationKind::kTopK;
    std::uint64_t seed = 0; // consumed only by random-k
    // Reference selection path (full sort instead of partial selection),
    // kept for differential testing of the quickselect route.
    bool full_sort_selection = false;
};

inline const char *to_string(TruncationKind kind) {
    switch (kind) {
    case TruncationKind::kTopK:
        return "topk";
    case TruncationKind::kRandomK:
        return "randomk";
    case TruncationKind::kNone:
        return "none";
    }
    return "?";
}

inline TruncationKind truncation_kind_from_string(std::string_view name) {
    if (name == "topk") {
        return TruncationKind::kTopK;
    }
    if (name == "randomk") {
        return TruncationKind::kRandomK;
    }
    if (name == "none") {
        return TruncationKind::kNone;
    }
    throw std::invalid_argument("unknown truncation policy '" + std::string(name) +
                                "' (expected topk, randomk or none)");
}

/// Reduces the workspace to at most k terms under the policy, loads the kept
/// terms into `out`, renormalizes, and folds the kept fraction into
/// out.gamma_sq. Returns gamma_step_sq = kept / total probability.
///
/// Exact-zero amplitudes are always dropped; they carry no information and
/// do not count against the kept fraction. Top-k boundary ties are broken by
/// ascending coordinate. Selection uses expected-linear nth_element unless
/// the policy requests the full-sort reference path. For random-k a caller
/// may pass a persistent engine; otherwise a one-shot engine is seeded from
/// policy.seed.
inline double truncate(ContractionWorkspace &ws, std::size_t k, const TruncationPolicy &policy,
                       SparseState &out, std::mt19937_64 *randomk_rng = nullptr) {
    if (k == 0) {
        throw std::invalid_argument("truncate: k must be at least 1");
    }
    if (k > out.capacity()) {
        throw std::invalid_argument("truncate: k exceeds the output state capacity");
    }
    const std::size_t n = ws.n_out;
    if (n == 0) {
        throw ZeroStateError("truncate: workspace is empty (state collapsed)");
    }

    ws.probs.resize(n);
    ws.pick.clear();
    detail::CompensatedSum total;
    for (std::size_t i = 0; i < n; ++i) {
        const double p = std::norm(ws.amps[i]);
        ws.probs[i] = p;
        total.add(p);
        if (p > 0.0) {
            ws.pick.push_back(static_cast<std::uint32_t>(i));
        }
    }
    if (ws.pick.empty()) {
        throw ZeroStateError("truncate: all amplitudes are zero");
    }

    std::size_t kept_count = ws.pick.size();
    double gamma_step = 1.0;
    if (kept_count > k) {
        const auto better = [&ws](std::uint32_t a, std::uint32_t b) {
            if (ws.probs[a] != ws.probs[b]) {
                return ws.probs[a] > ws.probs[b];
            }
            return ws.coords[a] < ws.coords[b];
        };
        switch (policy.kind) {
        case TruncationKind::kNone:
            throw ResourceLimitError(
                "truncate: " + std::to_string(kept_count) + " terms exceed capacity " +
                std::to_string(k) + " under policy 'none'");
        case TruncationKind::kTopK:
            if (policy.full_sort_selection) {
                std::sort(ws.pick.begin(), ws.pick.end(), better);
            } else {
                std::nth_element(ws.pick.begin(), ws.pick.begin() + k, ws.pick.end(), better);
            }
            break;
        case TruncationKind::kRandomK: {
            std::mt19937_64 one_shot(policy.seed);
            std::mt19937_64 &rng = randomk_rng != nullptr ? *randomk_rng : one_shot;
            // partial Fisher-Yates: the first k slots become a uniform subset
            for (std::size_t i = 0; i < k; ++i) {
                const std::size_t j = i + uniform_below(rng, kept_count - i);
                std::swap(ws.pick[i], ws.pick[j]);
            }
            break;
        }
        }
        kept_count = k;
        detail::CompensatedSum kept;
        for (std::size_t i = 0; i < kept_count; ++i) {
            kept.add(ws.probs[ws.pick[i]]);
        }
        gamma_step = std::min(kept.value() / total.value(), 1.0);
    }

    ws.sort_buf.resize(kept_count);
    for (std::size_t i = 0; i < kept_count; ++i) {
        const std::uint32_t src = ws.pick[i];
        ws.sort_buf[i] = detail::Term{ws.coords[src], ws.amps[src]};
    }
    for (std::size_t i = 0; i < kept_count; ++i) {
        ws.coords[i] = ws.sort_buf[i].coord;
        ws.amps[i] = ws.sort_buf[i].amp;
    }
    out.load_terms({ws.coords.data(), kept_count}, {ws.amps.data(), kept_count});
    out.renormalize();
    out.apply_gamma_step(gamma_step);
    return gamma_step;
}

} // namespace trusts
