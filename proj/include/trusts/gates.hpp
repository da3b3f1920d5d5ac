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

#include <array>
#include <complex>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/QR>

#include "trusts/rng.hpp"
#include "trusts/sparse_state.hpp"

namespace trusts {

inline constexpr double kUnitarityTol = 1e-12;

/// A 4x4 unitary bound to an ordered pair of target qubits. The matrix is
/// row-major over local two-bit indices where bit 0 is the LOWER target qubit
/// and bit 1 the higher one: local = bit(target_low) + 2*bit(target_high).
/// Gates are immutable after construction and freely shareable.
struct TwoQubitGate {
    std::array<Amplitude, 16> matrix{};
    int target_low = 0;
    int target_high = 1;
};

/// Max elementwise |U^dag U - I| for a row-major dim x dim matrix.
inline double unitarity_defect(const Amplitude *m, int dim) {
    double worst = 0.0;
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            Amplitude acc{0.0, 0.0};
            for (int k = 0; k < dim; ++k) {
                acc += std::conj(m[k * dim + r]) * m[k * dim + c];
            }
            if (r == c) {
                acc -= 1.0;
            }
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

inline bool is_unitary(const std::array<Amplitude, 16> &m, double tol = kUnitarityTol) {
    return unitarity_defect(m.data(), 4) <= tol;
}

namespace detail {

// Swaps the two local bits of a 4x4 matrix: index 1 (01) <-> index 2 (10).
inline std::array<Amplitude, 16> swap_local_bits(const std::array<Amplitude, 16> &m) {
    constexpr int perm[4] = {0, 2, 1, 3};
    std::array<Amplitude, 16> out{};
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            out[perm[r] * 4 + perm[c]] = m[r * 4 + c];
        }
    }
    return out;
}

} // namespace detail

/// Builds a gate from a row-major 4x4 matrix acting on qubits (qa, qb), with
/// local bit 0 bound to qa and local bit 1 to qb. When qa > qb the stored
/// targets are normalized to ascending order and the matrix permuted to match.
inline TwoQubitGate make_two_qubit_gate(const std::array<Amplitude, 16> &matrix, int qa,
                                        int qb) {
    if (qa == qb) {
        throw std::invalid_argument("two-qubit gate targets must be distinct");
    }
    if (qa < 0 || qb < 0 || qa >= kMaxQubits || qb >= kMaxQubits) {
        throw std::invalid_argument("two-qubit gate target outside 0..63");
    }
    if (qa < qb) {
        return TwoQubitGate{matrix, qa, qb};
    }
    return TwoQubitGate{detail::swap_local_bits(matrix), qb, qa};
}

/// Validates a gate against a register of `num_qubits` qubits: distinct
/// in-range targets, ascending target order (normalizing if needed), and
/// unitarity to 1e-12. Gates read from files go through here before use.
inline TwoQubitGate embed_check(const TwoQubitGate &gate, int num_qubits) {
    if (gate.target_low == gate.target_high) {
        throw std::invalid_argument("embed_check: duplicate gate targets");
    }
    if (gate.target_low < 0 || gate.target_high < 0 || gate.target_low >= num_qubits ||
        gate.target_high >= num_qubits) {
        throw std::invalid_argument("embed_check: gate target out of range for " +
                                    std::to_string(num_qubits) + " qubits");
    }
    TwoQubitGate checked = gate;
    if (checked.target_low > checked.target_high) {
        checked = make_two_qubit_gate(checked.matrix, checked.target_low, checked.target_high);
    }
    if (!is_unitary(checked.matrix)) {
        throw std::invalid_argument("embed_check: gate matrix is not unitary");
    }
    return checked;
}

/// Haar-distributed random unitary: complex Ginibre sample, QR factorization,
/// then each column of Q rephased by the sign of R's diagonal so the
/// distribution is exactly uniform over U(dim), not merely unitary.
inline Eigen::MatrixXcd haar_random_unitary(int dim, std::mt19937_64 &rng) {
    if (dim < 1) {
        throw std::invalid_argument("haar_random_unitary: dimension must be >= 1");
    }
    Eigen::MatrixXcd ginibre(dim, dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            ginibre(r, c) = complex_normal(rng);
        }
    }
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(ginibre);
    Eigen::MatrixXcd q = qr.householderQ();
    for (int c = 0; c < dim; ++c) {
        const Amplitude r = qr.matrixQR()(c, c);
        const double mag = std::abs(r);
        q.col(c) *= (mag > 0.0) ? r / mag : Amplitude{1.0, 0.0};
    }
    return q;
}

/// Fresh Haar-random gate over qubits (qa, qb).
inline TwoQubitGate haar_random_gate(int qa, int qb, std::mt19937_64 &rng) {
    const Eigen::MatrixXcd u = haar_random_unitary(4, rng);
    std::array<Amplitude, 16> m{};
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            m[r * 4 + c] = u(r, c);
        }
    }
    return make_two_qubit_gate(m, qa, qb);
}

} // namespace trusts
