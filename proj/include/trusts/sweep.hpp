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

#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "trusts/analysis.hpp"
#include "trusts/circuit.hpp"
#include "trusts/circuit_io.hpp"

namespace trusts {

/// One experiment family: the cross product of qubit counts, layer counts and
/// capacities, with circuits_per_point fresh random circuits at each grid
/// point. Capacities come either from k_values directly or from d_values as
/// round(d * 2^N) per qubit count. The seed of circuit c at flattened grid
/// point index p is derive_seed(master_seed, p * circuits_per_point + c),
/// independent of the truncation policy, so matched-circuit policy
/// comparisons and single-point reruns need no global state.
struct SweepConfig {
    std::vector<int> qubits;
    std::vector<int> layers;
    std::vector<std::size_t> k_values;
    std::vector<double> d_values;
    int circuits_per_point = 10;
    TruncationKind policy = TruncationKind::kTopK;
    std::uint64_t master_seed = 0;
    std::string out_path;
    bool dense_oracle = true;
    bool include_exact = false; // runtime sweep: add k = 2^N series
    int jobs = 1;
};

namespace detail {

inline std::vector<std::size_t> capacities_for(const SweepConfig &config, int num_qubits) {
    if (!config.k_values.empty() && !config.d_values.empty()) {
        throw std::invalid_argument("sweep: specify k values or d values, not both");
    }
    if (!config.k_values.empty()) {
        return config.k_values;
    }
    if (config.d_values.empty()) {
        throw std::invalid_argument("sweep: no k or d values given");
    }
    if (num_qubits >= kMaxQubits) {
        throw std::invalid_argument("sweep: d values need 2^N to be representable");
    }
    const double dim = std::ldexp(1.0, num_qubits);
    std::vector<std::size_t> ks;
    ks.reserve(config.d_values.size());
    for (const double d : config.d_values) {
        if (!(d > 0.0) || d > 1.0) {
            throw std::invalid_argument("sweep: truncation fraction outside (0, 1]");
        }
        const double k = std::round(d * dim);
        ks.push_back(static_cast<std::size_t>(std::max(1.0, std::min(k, dim))));
    }
    return ks;
}

inline void validate_common(const SweepConfig &config) {
    if (config.qubits.empty() || config.layers.empty()) {
        throw std::invalid_argument("sweep: qubit and layer lists must be non-empty");
    }
    if (config.circuits_per_point < 1) {
        throw std::invalid_argument("sweep: circuits_per_point must be >= 1");
    }
    if (config.jobs < 1) {
        throw std::invalid_argument("sweep: jobs must be >= 1");
    }
}

// Runs fn(i) for i in [0, count) on `jobs` threads. Exceptions are rethrown
// on the calling thread.
inline void parallel_for(std::size_t count, int jobs,
                         const std::function<void(std::size_t)> &fn) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count || failed.load()) {
                return;
            }
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true)) {
                    error = std::current_exception();
                }
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int threads = static_cast<int>(std::min<std::size_t>(jobs, count));
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    for (std::thread &t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

inline MeanSe mean_and_se(const std::vector<double> &values) {
    MeanSe out;
    const double n = static_cast<double>(values.size());
    CompensatedSum sum;
    for (const double v : values) {
        sum.add(v);
    }
    out.mean = sum.value() / n;
    if (values.size() > 1) {
        CompensatedSum sq;
        for (const double v : values) {
            sq.add((v - out.mean) * (v - out.mean));
        }
        out.se = std::sqrt(sq.value() / (n - 1.0) / n);
    }
    return out;
}

} // namespace detail

struct FidelityRow {
    int num_qubits = 0;
    int layers = 0;
    std::size_t k = 0;
    double d = 0.0;
    TruncationKind policy = TruncationKind::kTopK;
    std::uint64_t circuit_seed = 0;
    double gamma_sq = 0.0;
    double fidelity = 0.0;
    double f_min = 0.0;
    double f_max_numeric = 0.0;
    double f_max_pt = 0.0;
};

/// Fidelity-vs-truncation experiment (layered circuits). Every run is checked
/// against the dense oracle, so all qubit counts must fit the dense limit.
inline std::vector<FidelityRow> sweep_fidelity(const SweepConfig &config) {
    detail::validate_common(config);
    for (const int n : config.qubits) {
        if (n > dense_qubit_limit()) {
            throw ResourceLimitError("sweep_fidelity: " + std::to_string(n) +
                                     " qubits exceeds the dense limit of " +
                                     std::to_string(dense_qubit_limit()));
        }
    }
    struct Point {
        int num_qubits;
        int layers;
        std::size_t k;
    };
    std::vector<Point> points;
    for (const int n : config.qubits) {
        const std::vector<std::size_t> ks = detail::capacities_for(config, n);
        for (const int l : config.layers) {
            for (const std::size_t k : ks) {
                points.push_back({n, l, k});
            }
        }
    }
    const std::size_t per_point = static_cast<std::size_t>(config.circuits_per_point);
    std::vector<FidelityRow> rows(points.size() * per_point);
    detail::parallel_for(rows.size(), config.jobs, [&](std::size_t i) {
        const Point &pt = points[i / per_point];
        const std::uint64_t circuit_seed = derive_seed(config.master_seed, i);
        const Circuit circuit =
            random_layered_circuit(pt.num_qubits, pt.layers, circuit_seed);
        const std::vector<Amplitude> psi = run_dense(circuit);
        TruncationPolicy policy;
        policy.kind = config.policy;
        policy.seed = derive_seed(circuit_seed, kStreamTruncation);
        const auto [phi, report] = run_sparse(circuit, pt.k, policy);
        FidelityRow &row = rows[i];
        row.num_qubits = pt.num_qubits;
        row.layers = pt.layers;
        row.k = pt.k;
        row.d = static_cast<double>(pt.k) * std::ldexp(1.0, -pt.num_qubits);
        row.policy = config.policy;
        row.circuit_seed = circuit_seed;
        row.gamma_sq = report.gamma_sq;
        row.fidelity = fidelity(phi, psi);
        row.f_min = f_min(pt.num_qubits);
        row.f_max_numeric = numeric_fmax(psi, pt.k);
        row.f_max_pt = porter_thomas_fmax(row.d);
    });
    return rows;
}

struct RuntimeRow {
    int num_qubits = 0;
    int layers = 0;
    std::size_t k = 0;
    bool exact = false; // k = 2^N reference series
    std::uint64_t circuit_seed = 0;
    std::size_t gate_count = 0;
    double wall_seconds = 0.0;
    double per_gate_seconds = 0.0;
};

/// Runtime-per-gate experiment (layered circuits, no oracle). With
/// include_exact an additional k = 2^N series is run under policy 'none';
/// its memory is checked up front and refused beyond 24 qubits.
inline std::vector<RuntimeRow> sweep_runtime(const SweepConfig &config) {
    detail::validate_common(config);
    struct Point {
        int num_qubits;
        int layers;
        std::size_t k;
        bool exact;
    };
    std::vector<Point> points;
    for (const int n : config.qubits) {
        const std::vector<std::size_t> ks = detail::capacities_for(config, n);
        for (const int l : config.layers) {
            for (const std::size_t k : ks) {
                points.push_back({n, l, k, false});
            }
            if (config.include_exact) {
                if (n > 24) {
                    throw ResourceLimitError(
                        "sweep_runtime: exact series beyond 24 qubits needs > 8 GiB");
                }
                points.push_back({n, l, std::size_t{1} << n, true});
            }
        }
    }
    const std::size_t per_point = static_cast<std::size_t>(config.circuits_per_point);
    std::vector<RuntimeRow> rows(points.size() * per_point);
    detail::parallel_for(rows.size(), config.jobs, [&](std::size_t i) {
        const Point &pt = points[i / per_point];
        const std::uint64_t circuit_seed = derive_seed(config.master_seed, i);
        const Circuit circuit =
            random_layered_circuit(pt.num_qubits, pt.layers, circuit_seed);
        TruncationPolicy policy;
        policy.kind = pt.exact ? TruncationKind::kNone : config.policy;
        policy.seed = derive_seed(circuit_seed, kStreamTruncation);
        const auto [state, report] = run_sparse(circuit, pt.k, policy);
        (void)state;
        RuntimeRow &row = rows[i];
        row.num_qubits = pt.num_qubits;
        row.layers = pt.layers;
        row.k = pt.k;
        row.exact = pt.exact;
        row.circuit_seed = circuit_seed;
        row.gate_count = report.gate_count;
        row.wall_seconds = report.wall_seconds;
        row.per_gate_seconds = report.per_gate_seconds;
    });
    return rows;
}

inline constexpr const char *kFidelityCsvHeader =
    "row,N,L,k,d,policy,circuit_seed,gamma_sq,fidelity,f_min,f_max_numeric,f_max_pt,"
    "se_gamma_sq,se_fidelity";

/// Per-run rows followed by one aggregate row (means and standard errors)
/// per grid point. All floats carry 17 significant digits.
inline void write_fidelity_csv(std::ostream &os, const std::vector<FidelityRow> &rows) {
    os << kFidelityCsvHeader << "\n";
    os << std::setprecision(17);
    std::size_t start = 0;
    while (start < rows.size()) {
        std::size_t end = start;
        while (end < rows.size() && rows[end].num_qubits == rows[start].num_qubits &&
               rows[end].layers == rows[start].layers && rows[end].k == rows[start].k) {
            ++end;
        }
        std::vector<double> gammas;
        std::vector<double> fidelities;
        std::vector<double> fmaxes;
        for (std::size_t i = start; i < end; ++i) {
            const FidelityRow &r = rows[i];
            os << "run," << r.num_qubits << "," << r.layers << "," << r.k << "," << r.d << ","
               << to_string(r.policy) << "," << r.circuit_seed << "," << r.gamma_sq << ","
               << r.fidelity << "," << r.f_min << "," << r.f_max_numeric << "," << r.f_max_pt
               << ",,\n";
            gammas.push_back(r.gamma_sq);
            fidelities.push_back(r.fidelity);
            fmaxes.push_back(r.f_max_numeric);
        }
        const detail::MeanSe g = detail::mean_and_se(gammas);
        const detail::MeanSe f = detail::mean_and_se(fidelities);
        const detail::MeanSe fm = detail::mean_and_se(fmaxes);
        const FidelityRow &r = rows[start];
        os << "agg," << r.num_qubits << "," << r.layers << "," << r.k << "," << r.d << ","
           << to_string(r.policy) << ",," << g.mean << "," << f.mean << "," << r.f_min << ","
           << fm.mean << "," << r.f_max_pt << "," << g.se << "," << f.se << "\n";
        start = end;
    }
}

inline constexpr const char *kRuntimeCsvHeader =
    "row,N,L,k,mode,circuit_seed,gates,wall_seconds,per_gate_seconds,se_per_gate_seconds";

inline void write_runtime_csv(std::ostream &os, const std::vector<RuntimeRow> &rows) {
    os << kRuntimeCsvHeader << "\n";
    os << std::setprecision(17);
    std::size_t start = 0;
    while (start < rows.size()) {
        std::size_t end = start;
        while (end < rows.size() && rows[end].num_qubits == rows[start].num_qubits &&
               rows[end].layers == rows[start].layers && rows[end].k == rows[start].k &&
               rows[end].exact == rows[start].exact) {
            ++end;
        }
        std::vector<double> walls;
        std::vector<double> per_gate;
        for (std::size_t i = start; i < end; ++i) {
            const RuntimeRow &r = rows[i];
            os << "run," << r.num_qubits << "," << r.layers << "," << r.k << ","
               << (r.exact ? "exact" : "truncated") << "," << r.circuit_seed << ","
               << r.gate_count << "," << r.wall_seconds << "," << r.per_gate_seconds << ",\n";
            walls.push_back(r.wall_seconds);
            per_gate.push_back(r.per_gate_seconds);
        }
        const detail::MeanSe w = detail::mean_and_se(walls);
        const detail::MeanSe p = detail::mean_and_se(per_gate);
        const RuntimeRow &r = rows[start];
        os << "agg," << r.num_qubits << "," << r.layers << "," << r.k << ","
           << (r.exact ? "exact" : "truncated") << ",," << r.gate_count << "," << w.mean << ","
           << p.mean << "," << p.se << "\n";
        start = end;
    }
}

/// Loads a SweepConfig from its JSON form. Unknown keys are rejected.
inline SweepConfig sweep_config_from_json(std::istream &is) {
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw std::invalid_argument("config: top level must be a JSON object");
    }
    SweepConfig config;
    for (const auto &[key, value] : j.items()) {
        try {
            if (key == "qubits") {
                config.qubits = value.get<std::vector<int>>();
            } else if (key == "layers") {
                config.layers = value.get<std::vector<int>>();
            } else if (key == "k") {
                config.k_values = value.get<std::vector<std::size_t>>();
            } else if (key == "d") {
                config.d_values = value.get<std::vector<double>>();
            } else if (key == "circuits_per_point") {
                config.circuits_per_point = value.get<int>();
            } else if (key == "truncation") {
                config.policy = truncation_kind_from_string(value.get<std::string>());
            } else if (key == "seed") {
                config.master_seed = value.get<std::uint64_t>();
            } else if (key == "out") {
                config.out_path = value.get<std::string>();
            } else if (key == "dense_oracle") {
                config.dense_oracle = value.get<bool>();
            } else if (key == "include_exact") {
                config.include_exact = value.get<bool>();
            } else if (key == "jobs") {
                config.jobs = value.get<int>();
            } else {
                throw std::invalid_argument("config: unknown key '" + key + "'");
            }
        } catch (const nlohmann::json::exception &e) {
            throw std::invalid_argument("config: bad value for '" + key + "': " + e.what());
        }
    }
    return config;
}

inline SweepConfig load_sweep_config(const std::string &path) {
    std::ifstream is(path);
    if (!is) {
        throw std::invalid_argument("cannot open config file '" + path + "'");
    }
    return sweep_config_from_json(is);
}

} // namespace trusts
