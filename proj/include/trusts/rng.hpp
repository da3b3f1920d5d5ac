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

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace trusts {

/// Seed-derivation scheme used throughout the library: derive_seed(master, i)
/// is the i-th output of a splitmix64 sequence started at `master`. Any child
/// stream (circuit structure, gate matrices, truncation, sweep points) can be
/// reproduced in O(1) from the master seed and its index.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Fixed stream indices for derive_seed. Circuit structure (qubit pairings)
/// and gate matrices consume separate streams so either can be varied while
/// holding the other fixed.
enum : std::uint64_t {
    kStreamCircuitStructure = 0,
    kStreamGateMatrices = 1,
    kStreamTruncation = 2,
};

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Unbiased uniform integer in [0, bound) by rejection.
inline std::uint64_t uniform_below(std::mt19937_64 &rng, std::uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("uniform_below: bound must be positive");
    }
    if (bound == 1) {
        return 0;
    }
    constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
    // 2^64 mod bound; draws at or above the last full multiple are rejected
    const std::uint64_t rem = (kMax % bound + 1) % bound;
    for (;;) {
        const std::uint64_t r = rng();
        if (r <= kMax - rem) {
            return r % bound;
        }
    }
}

/// One complex sample with independent standard-normal real and imaginary
/// parts (Box-Muller). The transform is hand-rolled rather than taken from
/// std::normal_distribution so a seed reproduces the same stream on every
/// standard library implementation.
inline std::complex<double> complex_normal(std::mt19937_64 &rng) {
    const double u1 = uniform_unit(rng);
    const double u2 = uniform_unit(rng);
    const double r = std::sqrt(-2.0 * std::log1p(-u1)); // log(1-u1), never log(0)
    const double t = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(t), r * std::sin(t)};
}

} // namespace trusts
