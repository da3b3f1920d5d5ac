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

#include <chrono>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "trusts/contraction.hpp"
#include "trusts/errors.hpp"
#include "trusts/gates.hpp"
#include "trusts/rng.hpp"
#include "trusts/sparse_state.hpp"
#include "trusts/truncation.hpp"

namespace trusts {

/// Ordered gate list over a fixed register. layer_starts holds the gate index
/// opening each layer for layered circuits and is empty for sequential ones.
struct Circuit {
    int num_qubits = 0;
    std::vector<TwoQubitGate> gates;
    std::vector<std::size_t> layer_starts;
    std::uint64_t seed = 0;

    std::size_t gate_count() const { return gates.size(); }
    std::size_t layer_count() const { return layer_starts.size(); }
};

/// Qubit cap for dense vectors. The TRUSTS_DENSE_LIMIT environment variable
/// overrides the default of 26 (2^26 complex doubles = 1 GiB).
inline int dense_qubit_limit() {
    static const int limit = [] {
        if (const char *env = std::getenv("TRUSTS_DENSE_LIMIT")) {
            const int v = std::atoi(env);
            if (v >= 1 && v <= kMaxQubits) {
                return v;
            }
        }
        return kDefaultDenseLimit;
    }();
    return limit;
}

/// L layers of floor(N/2) gates each. Every layer is a fresh uniformly random
/// pairing: qubit labels are shuffled and adjacent labels paired, leaving one
/// qubit idle when N is odd. Matrices are freshly Haar-sampled per gate.
inline Circuit random_layered_circuit(int num_qubits, int layers,
                                      std::mt19937_64 &structure_rng,
                                      std::mt19937_64 &matrix_rng) {
    if (num_qubits < 2 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("random_layered_circuit: qubit count must be in 2..64");
    }
    if (layers < 1) {
        throw std::invalid_argument("random_layered_circuit: layer count must be >= 1");
    }
    Circuit circuit;
    circuit.num_qubits = num_qubits;
    const std::size_t per_layer = static_cast<std::size_t>(num_qubits) / 2;
    circuit.gates.reserve(per_layer * static_cast<std::size_t>(layers));
    std::vector<int> order(num_qubits);
    std::iota(order.begin(), order.end(), 0);
    for (int l = 0; l < layers; ++l) {
        circuit.layer_starts.push_back(circuit.gates.size());
        for (std::size_t i = order.size() - 1; i > 0; --i) {
            const std::size_t j = uniform_below(structure_rng, i + 1);
            std::swap(order[i], order[j]);
        }
        for (std::size_t p = 0; p < per_layer; ++p) {
            circuit.gates.push_back(haar_random_gate(order[2 * p], order[2 * p + 1], matrix_rng));
        }
    }
    return circuit;
}

inline Circuit random_layered_circuit(int num_qubits, int layers, std::uint64_t seed) {
    std::mt19937_64 structure_rng = make_rng(derive_seed(seed, kStreamCircuitStructure));
    std::mt19937_64 matrix_rng = make_rng(derive_seed(seed, kStreamGateMatrices));
    Circuit circuit = random_layered_circuit(num_qubits, layers, structure_rng, matrix_rng);
    circuit.seed = seed;
    return circuit;
}

/// M Haar-random gates, each over a uniformly random unordered pair of
/// distinct qubits.
inline Circuit random_sequential_circuit(int num_qubits, int num_gates,
                                         std::mt19937_64 &structure_rng,
                                         std::mt19937_64 &matrix_rng) {
    if (num_qubits < 2 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("random_sequential_circuit: qubit count must be in 2..64");
    }
    if (num_gates < 1) {
        throw std::invalid_argument("random_sequential_circuit: gate count must be >= 1");
    }
    Circuit circuit;
    circuit.num_qubits = num_qubits;
    circuit.gates.reserve(static_cast<std::size_t>(num_gates));
    for (int m = 0; m < num_gates; ++m) {
        const int a = static_cast<int>(uniform_below(structure_rng, num_qubits));
        int b = static_cast<int>(uniform_below(structure_rng, num_qubits - 1));
        if (b >= a) {
            ++b;
        }
        circuit.gates.push_back(haar_random_gate(a, b, matrix_rng));
    }
    return circuit;
}

inline Circuit random_sequential_circuit(int num_qubits, int num_gates, std::uint64_t seed) {
    std::mt19937_64 structure_rng = make_rng(derive_seed(seed, kStreamCircuitStructure));
    std::mt19937_64 matrix_rng = make_rng(derive_seed(seed, kStreamGateMatrices));
    Circuit circuit = random_sequential_circuit(num_qubits, num_gates, structure_rng, matrix_rng);
    circuit.seed = seed;
    return circuit;
}

/// Per-run record. wall_seconds covers all gate application and truncation
/// steps (monotonic clock); the trace vectors are filled only when tracing
/// was requested.
struct RunReport {
    double gamma_sq = 1.0;
    double wall_seconds = 0.0;
    std::size_t gate_count = 0;
    double per_gate_seconds = 0.0;
    std::optional<double> fidelity;
    std::vector<std::size_t> n_nz_trace;
    std::vector<double> gamma_step_trace;
    // squared norm of the full workspace before each truncation; equals the
    // per-gate norm drift when nothing is dropped
    std::vector<double> step_norm_sq_trace;
};

/// Runs the truncated sparse simulation: for each gate, bitwise contraction
/// into the 4k workspace followed by truncation back to at most k terms.
/// Policy 'none' requires k = 2^N so overflow is impossible.
inline std::pair<SparseState, RunReport> run_sparse(const Circuit &circuit, std::size_t k,
                                                    const TruncationPolicy &policy,
                                                    BasisIndex initial = 0,
                                                    bool trace = false) {
    const int n = circuit.num_qubits;
    if (policy.kind == TruncationKind::kNone) {
        if (n >= kMaxQubits || k != (std::size_t{1} << n)) {
            throw std::invalid_argument("run_sparse: policy 'none' requires k = 2^N");
        }
    }
    std::vector<TwoQubitGate> checked;
    checked.reserve(circuit.gates.size());
    for (const TwoQubitGate &gate : circuit.gates) {
        checked.push_back(embed_check(gate, n));
    }

    SparseState state(n, initial, k);
    ContractionWorkspace ws(k);
    std::mt19937_64 truncation_rng = make_rng(policy.seed);
    RunReport report;
    report.gate_count = circuit.gates.size();
    if (trace) {
        report.n_nz_trace.reserve(checked.size());
        report.gamma_step_trace.reserve(checked.size());
        report.step_norm_sq_trace.reserve(checked.size());
    }

    const auto t0 = std::chrono::steady_clock::now();
    for (const TwoQubitGate &gate : checked) {
        apply_gate(state, gate, ws);
        if (trace) {
            detail::CompensatedSum s;
            for (std::size_t i = 0; i < ws.n_out; ++i) {
                s.add(std::norm(ws.amps[i]));
            }
            report.step_norm_sq_trace.push_back(s.value());
        }
        const double gamma_step = truncate(ws, k, policy, state, &truncation_rng);
        if (trace) {
            report.gamma_step_trace.push_back(gamma_step);
            report.n_nz_trace.push_back(state.size());
        }
    }
    const auto t1 = std::chrono::steady_clock::now();

    report.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    report.per_gate_seconds =
        report.gate_count > 0 ? report.wall_seconds / static_cast<double>(report.gate_count)
                              : 0.0;
    report.gamma_sq = state.gamma_sq();
    return {std::move(state), report};
}

namespace detail {

// Inserts a zero bit at `pos`, shifting higher bits up.
constexpr BasisIndex insert_zero_bit(BasisIndex x, int pos) {
    const BasisIndex low = x & ((BasisIndex{1} << pos) - 1);
    return ((x >> pos) << (pos + 1)) | low;
}

} // namespace detail

/// In-place two-qubit gate application on a full statevector.
inline void apply_gate_dense(std::vector<Amplitude> &psi, const TwoQubitGate &gate,
                             int num_qubits) {
    const TwoQubitGate g = embed_check(gate, num_qubits);
    const int g1 = g.target_low;
    const int g2 = g.target_high;
    const BasisIndex b1 = BasisIndex{1} << g1;
    const BasisIndex b2 = BasisIndex{1} << g2;
    const std::array<Amplitude, 16> &u = g.matrix;
    const BasisIndex groups = BasisIndex{1} << (num_qubits - 2);
    for (BasisIndex j = 0; j < groups; ++j) {
        const BasisIndex i0 = detail::insert_zero_bit(detail::insert_zero_bit(j, g1), g2);
        const Amplitude a0 = psi[i0];
        const Amplitude a1 = psi[i0 | b1];
        const Amplitude a2 = psi[i0 | b2];
        const Amplitude a3 = psi[i0 | b1 | b2];
        psi[i0] = u[0] * a0 + u[1] * a1 + u[2] * a2 + u[3] * a3;
        psi[i0 | b1] = u[4] * a0 + u[5] * a1 + u[6] * a2 + u[7] * a3;
        psi[i0 | b2] = u[8] * a0 + u[9] * a1 + u[10] * a2 + u[11] * a3;
        psi[i0 | b1 | b2] = u[12] * a0 + u[13] * a1 + u[14] * a2 + u[15] * a3;
    }
}

/// Exact Schroedinger evolution over the full 2^N vector; the ground-truth
/// oracle for small N.
inline std::vector<Amplitude> run_dense(const Circuit &circuit, BasisIndex initial = 0,
                                        int limit = dense_qubit_limit()) {
    const int n = circuit.num_qubits;
    if (n < 1) {
        throw std::invalid_argument("run_dense: circuit has no qubits");
    }
    if (n > limit) {
        throw ResourceLimitError("run_dense: " + std::to_string(n) +
                                 " qubits exceeds the dense limit of " + std::to_string(limit));
    }
    if (!coord_in_range(initial, n)) {
        throw std::invalid_argument("run_dense: initial coordinate out of range");
    }
    std::vector<Amplitude> psi(std::size_t{1} << n);
    psi[initial] = Amplitude{1.0, 0.0};
    for (const TwoQubitGate &gate : circuit.gates) {
        apply_gate_dense(psi, gate, n);
    }
    return psi;
}

} // namespace trusts
