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
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "trusts/circuit.hpp"
#include "trusts/sparse_state.hpp"

namespace trusts {

inline constexpr int kCircuitFormatVersion = 1;
inline constexpr int kStateFormatVersion = 1;

// Doubles are written with 17 significant digits, which round-trips IEEE754
// binary64 exactly; "write -> read -> identical simulation" relies on it.

/// Circuit file layout (whitespace-separated text):
///   trusts-circuit <version>
///   qubits <N>
///   layers <L>          (0 for sequential circuits)
///   seed <generation seed>
///   gates <M>
///   gate <g1> <g2> followed by 16 row-major complex entries as 32 decimal
///   floats, re/im interleaved.
inline void write_circuit(std::ostream &os, const Circuit &circuit) {
    os << "trusts-circuit " << kCircuitFormatVersion << "\n";
    os << "qubits " << circuit.num_qubits << "\n";
    os << "layers " << circuit.layer_count() << "\n";
    os << "seed " << circuit.seed << "\n";
    os << "gates " << circuit.gate_count() << "\n";
    os << std::setprecision(17);
    for (const TwoQubitGate &gate : circuit.gates) {
        os << "gate " << gate.target_low << " " << gate.target_high << "\n";
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) {
                const Amplitude v = gate.matrix[r * 4 + c];
                os << v.real() << " " << v.imag();
                os << (c == 3 ? "\n" : " ");
            }
        }
    }
}

namespace detail {

inline void expect_token(std::istream &is, const std::string &expected) {
    std::string token;
    if (!(is >> token) || token != expected) {
        throw std::invalid_argument("circuit file: expected '" + expected + "', got '" + token +
                                    "'");
    }
}

template <typename T> T read_value(std::istream &is, const char *what) {
    T value{};
    if (!(is >> value)) {
        throw std::invalid_argument(std::string("circuit file: failed to read ") + what);
    }
    return value;
}

} // namespace detail

/// Parses a circuit file, validating every gate (range, distinct targets,
/// unitarity) before it is accepted.
inline Circuit read_circuit(std::istream &is) {
    detail::expect_token(is, "trusts-circuit");
    const int version = detail::read_value<int>(is, "format version");
    if (version != kCircuitFormatVersion) {
        throw std::invalid_argument("circuit file: unsupported format version " +
                                    std::to_string(version));
    }
    detail::expect_token(is, "qubits");
    Circuit circuit;
    circuit.num_qubits = detail::read_value<int>(is, "qubit count");
    detail::expect_token(is, "layers");
    const std::size_t layers = detail::read_value<std::size_t>(is, "layer count");
    detail::expect_token(is, "seed");
    circuit.seed = detail::read_value<std::uint64_t>(is, "seed");
    detail::expect_token(is, "gates");
    const std::size_t num_gates = detail::read_value<std::size_t>(is, "gate count");
    if (circuit.num_qubits < 2 || circuit.num_qubits > kMaxQubits) {
        throw std::invalid_argument("circuit file: qubit count out of range");
    }
    circuit.gates.reserve(num_gates);
    for (std::size_t g = 0; g < num_gates; ++g) {
        detail::expect_token(is, "gate");
        TwoQubitGate gate;
        gate.target_low = detail::read_value<int>(is, "gate target");
        gate.target_high = detail::read_value<int>(is, "gate target");
        for (int e = 0; e < 16; ++e) {
            const double re = detail::read_value<double>(is, "matrix entry");
            const double im = detail::read_value<double>(is, "matrix entry");
            gate.matrix[e] = Amplitude{re, im};
        }
        circuit.gates.push_back(embed_check(gate, circuit.num_qubits));
    }
    if (layers > 0) {
        if (num_gates % layers != 0) {
            throw std::invalid_argument("circuit file: gate count not divisible by layer count");
        }
        const std::size_t per_layer = num_gates / layers;
        for (std::size_t l = 0; l < layers; ++l) {
            circuit.layer_starts.push_back(l * per_layer);
        }
    }
    return circuit;
}

inline void write_circuit_file(const std::string &path, const Circuit &circuit) {
    std::ofstream os(path);
    if (!os) {
        throw std::invalid_argument("cannot open '" + path + "' for writing");
    }
    write_circuit(os, circuit);
    if (!os.flush()) {
        throw std::runtime_error("failed writing circuit file '" + path + "'");
    }
}

inline Circuit read_circuit_file(const std::string &path) {
    std::ifstream is(path);
    if (!is) {
        throw std::invalid_argument("cannot open circuit file '" + path + "'");
    }
    return read_circuit(is);
}

/// State snapshot layout, coordinate-ascending:
///   trusts-state <version>
///   qubits <N>
///   capacity <k>
///   gamma_sq <value>
///   terms <n_nz>
///   <coordinate> <re> <im>   (one line per term)
inline void write_state_snapshot(std::ostream &os, const SparseState &state) {
    std::vector<std::size_t> order(state.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&state](std::size_t a, std::size_t b) {
        return state.coords()[a] < state.coords()[b];
    });
    os << "trusts-state " << kStateFormatVersion << "\n";
    os << "qubits " << state.num_qubits() << "\n";
    os << "capacity " << state.capacity() << "\n";
    os << std::setprecision(17);
    os << "gamma_sq " << state.gamma_sq() << "\n";
    os << "terms " << state.size() << "\n";
    for (const std::size_t i : order) {
        const Amplitude a = state.amps()[i];
        os << state.coords()[i] << " " << a.real() << " " << a.imag() << "\n";
    }
}

inline void write_state_snapshot_file(const std::string &path, const SparseState &state) {
    std::ofstream os(path);
    if (!os) {
        throw std::invalid_argument("cannot open '" + path + "' for writing");
    }
    write_state_snapshot(os, state);
    if (!os.flush()) {
        throw std::runtime_error("failed writing state snapshot '" + path + "'");
    }
}

} // namespace trusts
