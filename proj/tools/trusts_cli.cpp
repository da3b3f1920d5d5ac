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

// Command-line harness around the library: single runs, fidelity and runtime
// sweeps, and the sparse-vs-dense verification gate.
//
// Exit codes: 0 success, 1 usage/config error, 2 verification failure,
// 3 resource limit or runtime failure.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trusts/trusts.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerification = 2;
constexpr int kExitResource = 3;

struct RunFlags {
    int qubits = 0;
    int layers = 0;
    int gates = 0;
    std::size_t k = 0;
    std::string truncation = "topk";
    std::uint64_t seed = 0;
    std::string arch = "layered";
    std::string circuit_file;
    std::string save_circuit;
    std::string dump_state;
    std::string out;
    bool with_fidelity = false;
};

std::ostream &open_or_stdout(std::ofstream &file, const std::string &path) {
    if (path.empty()) {
        return std::cout;
    }
    file.open(path);
    if (!file) {
        throw std::invalid_argument("cannot open output file '" + path + "'");
    }
    return file;
}

trusts::Circuit build_circuit(const RunFlags &flags) {
    if (!flags.circuit_file.empty()) {
        return trusts::read_circuit_file(flags.circuit_file);
    }
    if (flags.qubits == 0) {
        throw std::invalid_argument("--qubits is required unless --circuit-file is given");
    }
    if (flags.arch == "layered") {
        if (flags.layers == 0) {
            throw std::invalid_argument("layered circuits need --layers");
        }
        return trusts::random_layered_circuit(flags.qubits, flags.layers, flags.seed);
    }
    if (flags.arch == "sequential") {
        if (flags.gates == 0) {
            throw std::invalid_argument("sequential circuits need --gates");
        }
        return trusts::random_sequential_circuit(flags.qubits, flags.gates, flags.seed);
    }
    throw std::invalid_argument("unknown --arch '" + flags.arch + "'");
}

int cmd_run(const RunFlags &flags) {
    const trusts::Circuit circuit = build_circuit(flags);
    if (!flags.save_circuit.empty()) {
        trusts::write_circuit_file(flags.save_circuit, circuit);
    }
    trusts::TruncationPolicy policy;
    policy.kind = trusts::truncation_kind_from_string(flags.truncation);
    policy.seed = trusts::derive_seed(flags.seed, trusts::kStreamTruncation);
    auto [state, report] = trusts::run_sparse(circuit, flags.k, policy);
    if (flags.with_fidelity) {
        const std::vector<trusts::Amplitude> psi = trusts::run_dense(circuit);
        report.fidelity = trusts::fidelity(state, psi);
    }
    if (!flags.dump_state.empty()) {
        trusts::write_state_snapshot_file(flags.dump_state, state);
    }

    std::ofstream file;
    std::ostream &os = open_or_stdout(file, flags.out);
    os << std::setprecision(17);
    os << "qubits " << circuit.num_qubits << "\n";
    os << "gates " << report.gate_count << "\n";
    os << "layers " << circuit.layer_count() << "\n";
    os << "capacity " << flags.k << "\n";
    os << "truncation " << trusts::to_string(policy.kind) << "\n";
    os << "seed " << flags.seed << "\n";
    os << "gamma_sq " << report.gamma_sq << "\n";
    os << "final_n_nz " << state.size() << "\n";
    os << "wall_seconds " << report.wall_seconds << "\n";
    os << "per_gate_seconds " << report.per_gate_seconds << "\n";
    if (report.fidelity) {
        os << "fidelity " << *report.fidelity << "\n";
    }
    return kExitOk;
}

// Applies explicitly-given flags on top of an optional --config file.
trusts::SweepConfig merge_sweep_config(const CLI::App *cmd, const std::string &config_path,
                                       const trusts::SweepConfig &flags,
                                       const std::string &truncation_name,
                                       bool fidelity_defaults) {
    trusts::SweepConfig config;
    if (!config_path.empty()) {
        config = trusts::load_sweep_config(config_path);
    }
    const auto given = [cmd](const std::string &name) { return cmd->count(name) > 0; };
    if (given("--qubits")) {
        config.qubits = flags.qubits;
    }
    if (given("--layers")) {
        config.layers = flags.layers;
    }
    if (given("--k")) {
        config.k_values = flags.k_values;
    }
    if (given("--d")) {
        config.d_values = flags.d_values;
    }
    if (given("--circuits")) {
        config.circuits_per_point = flags.circuits_per_point;
    }
    if (given("--truncation")) {
        config.policy = trusts::truncation_kind_from_string(truncation_name);
    }
    if (given("--seed")) {
        config.master_seed = flags.master_seed;
    }
    if (given("--out")) {
        config.out_path = flags.out_path;
    }
    if (given("--jobs")) {
        config.jobs = flags.jobs;
    }
    if (cmd->get_option_no_throw("--include-exact") != nullptr && given("--include-exact")) {
        config.include_exact = true;
    }
    config.dense_oracle = fidelity_defaults;
    return config;
}

int cmd_sweep_fidelity(const trusts::SweepConfig &config) {
    const std::vector<trusts::FidelityRow> rows = trusts::sweep_fidelity(config);
    std::ofstream file;
    std::ostream &os = open_or_stdout(file, config.out_path);
    trusts::write_fidelity_csv(os, rows);
    return kExitOk;
}

int cmd_sweep_runtime(const trusts::SweepConfig &config) {
    const std::vector<trusts::RuntimeRow> rows = trusts::sweep_runtime(config);
    std::ofstream file;
    std::ostream &os = open_or_stdout(file, config.out_path);
    trusts::write_runtime_csv(os, rows);
    return kExitOk;
}

struct VerifyFlags {
    int qubits = 8;
    int layers = 5;
    int gates = 0;
    std::string arch = "layered";
    int circuits = 20;
    std::uint64_t seed = 0;
    double tolerance = 1e-10;
};

int cmd_verify(const VerifyFlags &flags) {
    if (flags.qubits > trusts::dense_qubit_limit()) {
        throw trusts::ResourceLimitError("verify: qubit count exceeds the dense limit");
    }
    double max_amp_error = 0.0;
    double max_fidelity_error = 0.0;
    for (int c = 0; c < flags.circuits; ++c) {
        const std::uint64_t circuit_seed = trusts::derive_seed(flags.seed, c);
        const trusts::Circuit circuit =
            flags.arch == "sequential"
                ? trusts::random_sequential_circuit(flags.qubits, flags.gates > 0 ? flags.gates : 5 * flags.qubits, circuit_seed)
                : trusts::random_layered_circuit(flags.qubits, flags.layers, circuit_seed);
        const std::vector<trusts::Amplitude> psi = trusts::run_dense(circuit);
        trusts::TruncationPolicy none;
        none.kind = trusts::TruncationKind::kNone;
        const std::size_t k = std::size_t{1} << flags.qubits;
        const auto [state, report] = trusts::run_sparse(circuit, k, none);
        (void)report;
        const std::vector<trusts::Amplitude> phi = trusts::to_dense(state);
        for (std::size_t x = 0; x < psi.size(); ++x) {
            max_amp_error = std::max(max_amp_error, std::abs(phi[x] - psi[x]));
        }
        max_fidelity_error =
            std::max(max_fidelity_error, std::abs(trusts::fidelity(state, psi) - 1.0));
    }
    const bool ok = max_amp_error <= flags.tolerance && max_fidelity_error <= flags.tolerance;
    std::cout << std::setprecision(17);
    std::cout << "circuits " << flags.circuits << "\n";
    std::cout << "qubits " << flags.qubits << "\n";
    std::cout << "max_amplitude_error " << max_amp_error << "\n";
    std::cout << "max_fidelity_error " << max_fidelity_error << "\n";
    std::cout << "tolerance " << flags.tolerance << "\n";
    std::cout << "status " << (ok ? "ok" : "FAIL") << "\n";
    return ok ? kExitOk : kExitVerification;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"truncated sparse-tensor simulation of quantum circuits"};
    app.require_subcommand(1);

    RunFlags run_flags;
    CLI::App *run = app.add_subcommand("run", "simulate one circuit");
    run->add_option("--qubits", run_flags.qubits, "register size N");
    run->add_option("--layers", run_flags.layers, "layer count (layered architecture)");
    run->add_option("--gates", run_flags.gates, "gate count (sequential architecture)");
    run->add_option("--k", run_flags.k, "sparse-state capacity")->required();
    run->add_option("--truncation", run_flags.truncation, "topk|randomk|none");
    run->add_option("--seed", run_flags.seed, "generation seed");
    run->add_option("--arch", run_flags.arch, "layered|sequential");
    run->add_option("--circuit-file", run_flags.circuit_file, "load circuit instead of generating");
    run->add_option("--save-circuit", run_flags.save_circuit, "write the generated circuit");
    run->add_option("--dump-state", run_flags.dump_state, "write the final state snapshot");
    run->add_option("--out", run_flags.out, "write the report to a file instead of stdout");
    run->add_flag("--fidelity", run_flags.with_fidelity,
                  "also run the dense oracle and report fidelity");

    trusts::SweepConfig sweep_flags;
    std::string config_path;
    std::string truncation_name = "topk";
    auto add_sweep_options = [&](CLI::App *cmd) {
        cmd->add_option("--config", config_path, "JSON config file");
        cmd->add_option("--qubits", sweep_flags.qubits, "qubit counts");
        cmd->add_option("--layers", sweep_flags.layers, "layer counts");
        cmd->add_option("--k", sweep_flags.k_values, "capacities");
        cmd->add_option("--d", sweep_flags.d_values, "truncation fractions k/2^N");
        cmd->add_option("--circuits", sweep_flags.circuits_per_point, "circuits per point");
        cmd->add_option("--truncation", truncation_name, "topk|randomk|none");
        cmd->add_option("--seed", sweep_flags.master_seed, "master seed");
        cmd->add_option("--out", sweep_flags.out_path, "CSV output path");
        cmd->add_option("--jobs", sweep_flags.jobs, "max concurrent runs");
    };
    CLI::App *sweep_f = app.add_subcommand("sweep-fidelity", "fidelity vs truncation fraction");
    add_sweep_options(sweep_f);
    CLI::App *sweep_r = app.add_subcommand("sweep-runtime", "runtime per gate vs k and N");
    add_sweep_options(sweep_r);
    sweep_r->add_flag("--include-exact", sweep_flags.include_exact,
                      "add a k = 2^N series under policy none");

    VerifyFlags verify_flags;
    CLI::App *verify = app.add_subcommand("verify", "sparse vs dense oracle equivalence");
    verify->add_option("--qubits", verify_flags.qubits, "register size N");
    verify->add_option("--layers", verify_flags.layers, "layers (layered architecture)");
    verify->add_option("--gates", verify_flags.gates, "gates (sequential architecture)");
    verify->add_option("--arch", verify_flags.arch, "layered|sequential");
    verify->add_option("--circuits", verify_flags.circuits, "number of fresh circuits");
    verify->add_option("--seed", verify_flags.seed, "master seed");
    verify->add_option("--tolerance", verify_flags.tolerance, "max allowed deviation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run->parsed()) {
            return cmd_run(run_flags);
        }
        if (sweep_f->parsed()) {
            return cmd_sweep_fidelity(
                merge_sweep_config(sweep_f, config_path, sweep_flags, truncation_name, true));
        }
        if (sweep_r->parsed()) {
            return cmd_sweep_runtime(
                merge_sweep_config(sweep_r, config_path, sweep_flags, truncation_name, false));
        }
        if (verify->parsed()) {
            return cmd_verify(verify_flags);
        }
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const trusts::ResourceLimitError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitResource;
    } catch (const std::bad_alloc &) {
        std::cerr << "error: out of memory\n";
        return kExitResource;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitResource;
    }
    return kExitUsage;
}
