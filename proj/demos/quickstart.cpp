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

// Minimal library walkthrough: build a random circuit, run it truncated at a
// few capacities, and compare fidelity against the dense oracle.

#include <cstdio>

#include "trusts/trusts.hpp"

int main() {
    const int num_qubits = 12;
    const int layers = 5;
    const trusts::Circuit circuit = trusts::random_layered_circuit(num_qubits, layers, 42);
    const std::vector<trusts::Amplitude> psi = trusts::run_dense(circuit);

    std::printf("N = %d, L = %d, gates = %zu\n", num_qubits, layers, circuit.gate_count());
    std::printf("%8s %12s %12s %12s %12s\n", "k", "gamma_sq", "fidelity", "f_max_num", "f_max_pt");
    for (std::size_t k = 4; k <= (std::size_t{1} << num_qubits); k *= 4) {
        trusts::TruncationPolicy policy; // top-k
        policy.seed = trusts::derive_seed(42, trusts::kStreamTruncation);
        const auto [state, report] = trusts::run_sparse(circuit, k, policy);
        const double d = static_cast<double>(k) / static_cast<double>(psi.size());
        std::printf("%8zu %12.4e %12.4e %12.4e %12.4e\n", k, report.gamma_sq,
                    trusts::fidelity(state, psi), trusts::numeric_fmax(psi, k),
                    trusts::porter_thomas_fmax(d));
    }
    return 0;
}
