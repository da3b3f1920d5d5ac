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
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "trusts/sparse_state.hpp"

namespace trusts {

inline constexpr double kNormalizationTol = 1e-6;

namespace detail {

inline double dense_norm_sq(std::span<const Amplitude> psi) {
    CompensatedSum s;
    for (const Amplitude &a : psi) {
        s.add(std::norm(a));
    }
    return s.value();
}

inline void require_normalized(double norm_sq, const char *who) {
    if (std::abs(norm_sq - 1.0) > kNormalizationTol) {
        throw std::invalid_argument(std::string(who) + ": input state is not normalized");
    }
}

} // namespace detail

/// Quantum fidelity |<psi|phi>|^2 of a sparse state against a dense reference.
/// Both inputs must be normalized to within 1e-6.
inline double fidelity(const SparseState &phi, std::span<const Amplitude> psi) {
    const int n = phi.num_qubits();
    if (n >= kMaxQubits || psi.size() != (std::size_t{1} << n)) {
        throw std::invalid_argument("fidelity: dense vector length does not match 2^N");
    }
    detail::require_normalized(phi.norm_sq(), "fidelity");
    detail::require_normalized(detail::dense_norm_sq(psi), "fidelity");
    Amplitude overlap{0.0, 0.0};
    for (std::size_t i = 0; i < phi.size(); ++i) {
        overlap += std::conj(psi[phi.coords()[i]]) * phi.amps()[i];
    }
    return std::norm(overlap);
}

/// Average fidelity of a random basis-state guess: 2^-N. The soft lower limit
/// any simulation should beat on average.
inline double f_min(int num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("f_min: qubit count must be in 1..64");
    }
    return std::ldexp(1.0, -num_qubits);
}

/// Upper fidelity bound d*(1 - ln d) for truncating a Porter-Thomas
/// distributed state to a fraction d of its terms.
inline double porter_thomas_fmax(double d) {
    if (!(d > 0.0) || d > 1.0) {
        throw std::invalid_argument("porter_thomas_fmax: fraction must lie in (0, 1]");
    }
    return std::min(d * (1.0 - std::log(d)), 1.0);
}

/// Smallest probability retained when keeping the top fraction d of a
/// Porter-Thomas distributed output: -ln(d)/2^N.
inline double porter_thomas_pmin(double d, int num_qubits) {
    if (!(d > 0.0) || d > 1.0) {
        throw std::invalid_argument("porter_thomas_pmin: fraction must lie in (0, 1]");
    }
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("porter_thomas_pmin: qubit count must be in 1..64");
    }
    return -std::log(d) * std::ldexp(1.0, -num_qubits);
}

/// Best achievable fidelity of any k-term truncation of psi: the sum of the
/// k largest probabilities (the optimal k-term state is the renormalized
/// top-k restriction). Exact order statistics via partial selection.
inline double numeric_fmax(std::span<const Amplitude> psi, std::size_t k) {
    if (k == 0) {
        throw std::invalid_argument("numeric_fmax: k must be at least 1");
    }
    detail::require_normalized(detail::dense_norm_sq(psi), "numeric_fmax");
    std::vector<double> probs(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) {
        probs[i] = std::norm(psi[i]);
    }
    if (k < probs.size()) {
        std::nth_element(probs.begin(), probs.begin() + k, probs.end(),
                         [](double a, double b) { return a > b; });
        probs.resize(k);
    }
    detail::CompensatedSum top;
    for (const double p : probs) {
        top.add(p);
    }
    return top.value();
}

/// Summary of fidelity-vs-gamma^2 agreement over an ensemble of runs.
struct GapStats {
    double mean_gap = 0.0;                    // mean(f - gamma^2)
    double std_error = 0.0;                   // standard error of the mean gap
    double frac_fidelity_at_least_gamma = 0.0; // fraction of runs with f >= gamma^2
    std::size_t count = 0;
};

/// Gap statistics over (fidelity, gamma_sq) pairs. Needs at least two runs.
inline GapStats gamma_fidelity_gap(std::span<const std::pair<double, double>> runs) {
    if (runs.size() < 2) {
        throw std::invalid_argument("gamma_fidelity_gap: need at least two runs");
    }
    GapStats stats;
    stats.count = runs.size();
    detail::CompensatedSum sum;
    std::size_t at_least = 0;
    for (const auto &[f, gamma_sq] : runs) {
        sum.add(f - gamma_sq);
        if (f >= gamma_sq) {
            ++at_least;
        }
    }
    const double n = static_cast<double>(runs.size());
    stats.mean_gap = sum.value() / n;
    detail::CompensatedSum sq_dev;
    for (const auto &[f, gamma_sq] : runs) {
        const double dev = (f - gamma_sq) - stats.mean_gap;
        sq_dev.add(dev * dev);
    }
    stats.std_error = std::sqrt(sq_dev.value() / (n - 1.0) / n);
    stats.frac_fidelity_at_least_gamma = static_cast<double>(at_least) / n;
    return stats;
}

} // namespace trusts
