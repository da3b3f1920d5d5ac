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
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "trusts/errors.hpp"

namespace trusts {

/// Integer encoding of a computational basis state: bit b is qubit b, so the
/// least significant bit is qubit 0. This convention is used everywhere,
/// including circuit and snapshot files.
using BasisIndex = std::uint64_t;
using Amplitude = std::complex<double>;

inline constexpr int kMaxQubits = 64;
inline constexpr int kDefaultDenseLimit = 26; // 2^26 complex doubles = 1 GiB

/// True when x addresses a valid basis state of an N-qubit register.
constexpr bool coord_in_range(BasisIndex x, int num_qubits) {
    return num_qubits >= kMaxQubits || (x >> num_qubits) == 0;
}

namespace detail {

/// Neumaier compensated summation. Plain left-to-right accumulation loses
/// ~n*eps which is visible against 1e-10 norm checks at 2^26 terms.
class CompensatedSum {
  public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace detail

/// Fixed-capacity sparse N-qubit state: parallel arrays of basis coordinates
/// and complex amplitudes with a fill pointer, plus the cumulative kept
/// probability gamma_sq across all truncations applied so far. Not safe for
/// concurrent mutation; safely transferable between threads.
class SparseState {
  public:
    /// Constructs the basis state |initial> with amplitude 1.
    SparseState(int num_qubits, BasisIndex initial, std::size_t capacity)
        : num_qubits_(num_qubits) {
        if (num_qubits < 1 || num_qubits > kMaxQubits) {
            throw std::invalid_argument("SparseState: qubit count must be in 1.." +
                                        std::to_string(kMaxQubits));
        }
        if (capacity == 0) {
            throw std::invalid_argument("SparseState: capacity must be at least 1");
        }
        if (num_qubits < kMaxQubits && capacity > (BasisIndex{1} << num_qubits)) {
            throw std::invalid_argument("SparseState: capacity exceeds basis size 2^N");
        }
        if (!coord_in_range(initial, num_qubits)) {
            throw std::invalid_argument("SparseState: initial coordinate out of range");
        }
        coords_.resize(capacity);
        amps_.resize(capacity);
        coords_[0] = initial;
        amps_[0] = Amplitude{1.0, 0.0};
        n_nz_ = 1;
    }

    int num_qubits() const { return num_qubits_; }
    std::size_t capacity() const { return coords_.size(); }
    std::size_t size() const { return n_nz_; }
    double gamma_sq() const { return gamma_sq_; }

    std::span<const BasisIndex> coords() const { return {coords_.data(), n_nz_}; }
    std::span<const Amplitude> amps() const { return {amps_.data(), n_nz_}; }

    // Mutable views over the live region for the contraction kernel. Callers
    // must keep coordinates pairwise distinct.
    std::span<BasisIndex> mutable_coords() { return {coords_.data(), n_nz_}; }
    std::span<Amplitude> mutable_amps() { return {amps_.data(), n_nz_}; }

    double norm_sq() const {
        detail::CompensatedSum s;
        for (std::size_t i = 0; i < n_nz_; ++i) {
            s.add(std::norm(amps_[i]));
        }
        return s.value();
    }

    /// Replaces the live terms wholesale (used by truncation and loaders).
    void load_terms(std::span<const BasisIndex> coords, std::span<const Amplitude> amps) {
        if (coords.size() != amps.size()) {
            throw std::invalid_argument("SparseState: coordinate/amplitude length mismatch");
        }
        if (coords.size() > capacity()) {
            throw std::invalid_argument("SparseState: term count exceeds capacity");
        }
        for (const BasisIndex x : coords) {
            if (!coord_in_range(x, num_qubits_)) {
                throw std::invalid_argument("SparseState: coordinate out of range");
            }
        }
        std::copy(coords.begin(), coords.end(), coords_.begin());
        std::copy(amps.begin(), amps.end(), amps_.begin());
        n_nz_ = coords.size();
    }

    /// Scales amplitudes back to unit norm. Returns the squared norm that was
    /// removed so callers can fold it into their own bookkeeping.
    double renormalize() {
        const double removed = norm_sq();
        if (removed <= 0.0) {
            throw ZeroStateError("renormalize: state has collapsed to zero");
        }
        const double inv = 1.0 / std::sqrt(removed);
        for (std::size_t i = 0; i < n_nz_; ++i) {
            amps_[i] *= inv;
        }
        return removed;
    }

    /// Folds one truncation step's kept fraction into gamma_sq.
    void apply_gamma_step(double gamma_step_sq) {
        if (!(gamma_step_sq > 0.0) || gamma_step_sq > 1.0) {
            throw std::invalid_argument("apply_gamma_step: step must lie in (0, 1]");
        }
        gamma_sq_ *= gamma_step_sq;
    }

    /// Structural checks used by tests: coordinate uniqueness (sort-scan),
    /// coordinate range, fill pointer and gamma bounds.
    void check_invariants() const {
        if (n_nz_ > capacity()) {
            throw std::logic_error("SparseState: fill pointer exceeds capacity");
        }
        if (!(gamma_sq_ > 0.0) || gamma_sq_ > 1.0) {
            throw std::logic_error("SparseState: gamma_sq outside (0, 1]");
        }
        std::vector<BasisIndex> sorted(coords_.begin(), coords_.begin() + n_nz_);
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            if (!coord_in_range(sorted[i], num_qubits_)) {
                throw std::logic_error("SparseState: coordinate out of range");
            }
            if (i > 0 && sorted[i] == sorted[i - 1]) {
                throw std::logic_error("SparseState: duplicate coordinate");
            }
        }
    }

  private:
    int num_qubits_;
    std::vector<BasisIndex> coords_;
    std::vector<Amplitude> amps_;
    std::size_t n_nz_ = 0;
    double gamma_sq_ = 1.0;
};

/// <a|b> over the shared coordinate support, via a coordinate sort-merge join.
/// Neither state is materialized densely.
inline Amplitude inner_product(const SparseState &a, const SparseState &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw std::invalid_argument("inner_product: qubit count mismatch");
    }
    using Term = std::pair<BasisIndex, Amplitude>;
    auto collect = [](const SparseState &s) {
        std::vector<Term> terms(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            terms[i] = {s.coords()[i], s.amps()[i]};
        }
        std::sort(terms.begin(), terms.end(),
                  [](const Term &x, const Term &y) { return x.first < y.first; });
        return terms;
    };
    const std::vector<Term> ta = collect(a);
    const std::vector<Term> tb = collect(b);
    Amplitude acc{0.0, 0.0};
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < ta.size() && j < tb.size()) {
        if (ta[i].first < tb[j].first) {
            ++i;
        } else if (tb[j].first < ta[i].first) {
            ++j;
        } else {
            acc += std::conj(ta[i].second) * tb[j].second;
            ++i;
            ++j;
        }
    }
    return acc;
}

/// Expands the state into a full 2^N vector. Refuses registers larger than
/// `dense_limit` qubits.
inline std::vector<Amplitude> to_dense(const SparseState &state,
                                       int dense_limit = kDefaultDenseLimit) {
    if (state.num_qubits() > dense_limit) {
        throw ResourceLimitError("to_dense: " + std::to_string(state.num_qubits()) +
                                 " qubits exceeds the dense limit of " +
                                 std::to_string(dense_limit));
    }
    std::vector<Amplitude> out(std::size_t{1} << state.num_qubits());
    for (std::size_t i = 0; i < state.size(); ++i) {
        out[state.coords()[i]] = state.amps()[i];
    }
    return out;
}

/// Best k-term sparse approximation of a dense vector: keeps the k entries of
/// largest probability (ties at the boundary broken by ascending coordinate),
/// renormalizes, and records gamma_sq = kept probability / total probability.
inline SparseState from_dense(std::span<const Amplitude> vec, int num_qubits,
                              std::size_t capacity) {
    if (num_qubits < 1 || num_qubits >= kMaxQubits) {
        throw std::invalid_argument("from_dense: qubit count must be in 1..63");
    }
    if (vec.size() != (std::size_t{1} << num_qubits)) {
        throw std::invalid_argument("from_dense: vector length does not equal 2^N");
    }
    std::vector<BasisIndex> nonzero;
    detail::CompensatedSum total;
    for (std::size_t x = 0; x < vec.size(); ++x) {
        const double p = std::norm(vec[x]);
        if (p > 0.0) {
            nonzero.push_back(x);
            total.add(p);
        }
    }
    if (nonzero.empty()) {
        throw ZeroStateError("from_dense: input vector is identically zero");
    }
    const auto better = [&vec](BasisIndex x, BasisIndex y) {
        const double px = std::norm(vec[x]);
        const double py = std::norm(vec[y]);
        if (px != py) {
            return px > py;
        }
        return x < y;
    };
    std::size_t kept_count = nonzero.size();
    if (kept_count > capacity) {
        std::nth_element(nonzero.begin(), nonzero.begin() + capacity, nonzero.end(), better);
        kept_count = capacity;
    }
    std::sort(nonzero.begin(), nonzero.begin() + kept_count);

    SparseState state(num_qubits, 0, capacity);
    std::vector<Amplitude> amps(kept_count);
    detail::CompensatedSum kept;
    for (std::size_t i = 0; i < kept_count; ++i) {
        amps[i] = vec[nonzero[i]];
        kept.add(std::norm(amps[i]));
    }
    state.load_terms({nonzero.data(), kept_count}, amps);
    state.renormalize();
    const double gamma_step =
        (kept_count == nonzero.size() || kept.value() >= total.value())
            ? 1.0
            : kept.value() / total.value();
    state.apply_gamma_step(gamma_step);
    return state;
}

} // namespace trusts
