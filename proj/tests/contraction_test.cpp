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

#include "trusts/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.hpp"

namespace trusts {
namespace {

std::array<Amplitude, 16> identity_matrix() {
    std::array<Amplitude, 16> m{};
    for (int i = 0; i < 4; ++i) {
        m[i * 4 + i] = 1.0;
    }
    return m;
}

TEST(ContractionTest, GateMaskWorkedExample) {
    EXPECT_EQ(gate_mask(1, 4), 18u); // 0b0010010
    EXPECT_EQ(gate_mask(0, 1), 3u);
    EXPECT_EQ(gate_mask(2, 5), 36u);
    EXPECT_EQ(gate_mask(4, 1), 18u); // order-insensitive
    EXPECT_THROW(gate_mask(3, 3), std::invalid_argument);
}

TEST(ContractionTest, SplitIndexExamples) {
    EXPECT_EQ(split_index(22, 18), std::make_pair(BasisIndex{4}, BasisIndex{18}));
    EXPECT_EQ(split_index(1234, 0), std::make_pair(BasisIndex{1234}, BasisIndex{0}));
    EXPECT_EQ(split_index(18, 18), std::make_pair(BasisIndex{0}, BasisIndex{18}));
}

TEST(ContractionTest, SplitIndexRecombines) {
    std::mt19937_64 rng = make_rng(31);
    for (int i = 0; i < 200; ++i) {
        const BasisIndex x = rng();
        const int g1 = static_cast<int>(rng() % 64);
        const int g2 = static_cast<int>((g1 + 1 + rng() % 63) % 64);
        const BasisIndex mask = gate_mask(g1, g2);
        const auto [xf, xc] = split_index(x, mask);
        EXPECT_EQ(xf | xc, x);
        EXPECT_EQ(xf & xc, 0u);
    }
}

TEST(ContractionTest, SortGroupsByFreeIndex) {
    std::mt19937_64 rng = make_rng(32);
    SparseState state = testing::random_sparse_state(10, 1000, 1024, rng);
    const auto before = testing::sorted_terms(state);
    const BasisIndex mask = gate_mask(2, 7);
    sort_by_free_index(state, mask);
    // multiset of terms unchanged
    const auto after = testing::sorted_terms(state);
    ASSERT_EQ(before.size(), after.size());
    for (std::size_t i = 0; i < before.size(); ++i) {
        EXPECT_EQ(before[i].first, after[i].first);
        EXPECT_EQ(before[i].second, after[i].second);
    }
    // grouping: equal x_f entries contiguous, x_c ascending inside a group
    const auto coords = state.coords();
    std::map<BasisIndex, int> last_seen;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        const auto [xf, xc] = split_index(coords[i], mask);
        if (i > 0) {
            const auto [prev_f, prev_c] = split_index(coords[i - 1], mask);
            if (prev_f == xf) {
                EXPECT_LT(prev_c, xc);
            } else {
                EXPECT_EQ(last_seen.count(xf), 0u) << "group split apart";
            }
        }
        last_seen[xf] = 1;
    }
}

TEST(ContractionTest, SortIsStableOnAlreadyGroupedInput) {
    SparseState state(5, 0, 8);
    // mask 0b110: x_f is bit 0, so {0,2} share x_f=0 and {1,3} share x_f=1;
    // the input is already grouped and canonically ordered
    const std::vector<BasisIndex> coords{0, 2, 1, 3};
    const std::vector<Amplitude> amps{{0.5, 0}, {0.5, 0}, {0.5, 0}, {0.5, 0}};
    state.load_terms(coords, amps);
    sort_by_free_index(state, gate_mask(1, 2));
    const auto sorted = state.coords();
    EXPECT_EQ(sorted[0], 0u);
    EXPECT_EQ(sorted[1], 2u);
    EXPECT_EQ(sorted[2], 1u);
    EXPECT_EQ(sorted[3], 3u);
}

TEST(ContractionTest, IdentityGatePreservesTerms) {
    std::mt19937_64 rng = make_rng(33);
    SparseState state = testing::random_sparse_state(8, 40, 64, rng);
    const auto before = testing::sorted_terms(state);
    ContractionWorkspace ws(state.capacity());
    apply_gate(state, make_two_qubit_gate(identity_matrix(), 2, 5), ws);
    const auto after = testing::sorted_terms(ws);
    ASSERT_EQ(after.size(), before.size());
    for (std::size_t i = 0; i < before.size(); ++i) {
        EXPECT_EQ(after[i].first, before[i].first);
        EXPECT_NEAR(std::abs(after[i].second - before[i].second), 0.0, 1e-15);
    }
}

TEST(ContractionTest, HadamardOnQubitZero) {
    // H acting on qubit 0 (local bit 0), identity on qubit 1
    const double h = M_SQRT1_2;
    std::array<Amplitude, 16> m{};
    // row-major blocks: rows/cols 0,1 are qubit1=0; rows/cols 2,3 qubit1=1
    m[0 * 4 + 0] = h;
    m[0 * 4 + 1] = h;
    m[1 * 4 + 0] = h;
    m[1 * 4 + 1] = -h;
    m[2 * 4 + 2] = h;
    m[2 * 4 + 3] = h;
    m[3 * 4 + 2] = h;
    m[3 * 4 + 3] = -h;
    SparseState state(3, 0, 8);
    ContractionWorkspace ws(8);
    apply_gate(state, make_two_qubit_gate(m, 0, 1), ws);
    const auto terms = testing::sorted_terms(ws);
    ASSERT_EQ(terms.size(), 2u);
    EXPECT_EQ(terms[0].first, 0u);
    EXPECT_EQ(terms[1].first, 1u);
    EXPECT_NEAR(std::abs(terms[0].second - Amplitude(h, 0.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(terms[1].second - Amplitude(h, 0.0)), 0.0, 1e-15);
}

TEST(ContractionTest, MatchesEmbeddedMatrixOracle) {
    std::mt19937_64 rng = make_rng(34);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 5); // 4..8 qubits
        const std::size_t dim = std::size_t{1} << n;
        const std::size_t count = 1 + rng() % dim;
        SparseState state = testing::random_sparse_state(n, count, dim, rng);
        const int a = static_cast<int>(uniform_below(rng, n));
        int b = static_cast<int>(uniform_below(rng, n - 1));
        if (b >= a) {
            ++b;
        }
        const TwoQubitGate gate = haar_random_gate(a, b, rng);
        const std::vector<Amplitude> expected =
            testing::embedded_gate_oracle(to_dense(state), gate, n);
        ContractionWorkspace ws(state.capacity());
        apply_gate(state, gate, ws);
        std::vector<Amplitude> got(dim, Amplitude{0.0, 0.0});
        for (std::size_t i = 0; i < ws.n_out; ++i) {
            got[ws.coords[i]] = ws.amps[i];
        }
        for (std::size_t x = 0; x < dim; ++x) {
            ASSERT_NEAR(std::abs(got[x] - expected[x]), 0.0, 1e-12)
                << "trial " << trial << " coord " << x;
        }
    }
}

TEST(ContractionTest, NormPreservedWithoutTruncation) {
    std::mt19937_64 rng = make_rng(35);
    SparseState state = testing::random_sparse_state(9, 100, 512, rng);
    ContractionWorkspace ws(state.capacity());
    for (int step = 0; step < 20; ++step) {
        const int a = static_cast<int>(uniform_below(rng, 9));
        int b = static_cast<int>(uniform_below(rng, 8));
        if (b >= a) {
            ++b;
        }
        apply_gate(state, haar_random_gate(a, b, rng), ws);
        detail::CompensatedSum s;
        for (std::size_t i = 0; i < ws.n_out; ++i) {
            s.add(std::norm(ws.amps[i]));
        }
        EXPECT_NEAR(s.value(), 1.0, 1e-12);
        std::vector<BasisIndex> coords(ws.coords.begin(), ws.coords.begin() + ws.n_out);
        std::vector<Amplitude> amps(ws.amps.begin(), ws.amps.begin() + ws.n_out);
        state = SparseState(9, 0, 512);
        state.load_terms(coords, amps);
        state.check_invariants();
    }
}

TEST(ContractionTest, OutputCoordinatesAreValidAndBounded) {
    std::mt19937_64 rng = make_rng(36);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 6;
        SparseState state = testing::random_sparse_state(n, 1 + rng() % 40, 64, rng);
        const std::size_t n_in = state.size();
        std::set<BasisIndex> in_free;
        const TwoQubitGate gate = haar_random_gate(1, 4, rng);
        const BasisIndex mask = gate_mask(1, 4);
        for (const BasisIndex x : state.coords()) {
            in_free.insert(x & ~mask);
        }
        ContractionWorkspace ws(64);
        apply_gate(state, gate, ws);
        EXPECT_LE(ws.n_out, 4 * n_in);
        EXPECT_LE(ws.n_out, std::size_t{1} << n);
        std::set<BasisIndex> seen;
        for (std::size_t i = 0; i < ws.n_out; ++i) {
            EXPECT_LT(ws.coords[i], BasisIndex{1} << n);
            EXPECT_TRUE(in_free.count(ws.coords[i] & ~mask)) << "new free index appeared";
            EXPECT_TRUE(seen.insert(ws.coords[i]).second) << "duplicate output coordinate";
        }
    }
}

TEST(ContractionTest, OutputIsInvariantUnderInputPermutation) {
    std::mt19937_64 rng = make_rng(37);
    SparseState state = testing::random_sparse_state(7, 50, 64, rng);
    const TwoQubitGate gate = haar_random_gate(0, 3, rng);
    ContractionWorkspace ws_a(64);
    ContractionWorkspace ws_b(64);
    SparseState shuffled = state;
    {
        auto coords = shuffled.mutable_coords();
        auto amps = shuffled.mutable_amps();
        for (std::size_t i = coords.size() - 1; i > 0; --i) {
            const std::size_t j = uniform_below(rng, i + 1);
            std::swap(coords[i], coords[j]);
            std::swap(amps[i], amps[j]);
        }
    }
    apply_gate(state, gate, ws_a);
    apply_gate(shuffled, gate, ws_b);
    ASSERT_EQ(ws_a.n_out, ws_b.n_out);
    for (std::size_t i = 0; i < ws_a.n_out; ++i) {
        EXPECT_EQ(ws_a.coords[i], ws_b.coords[i]);
        EXPECT_EQ(ws_a.amps[i], ws_b.amps[i]); // bit-identical
    }
}

TEST(ContractionTest, RejectsBadTargetsAndSmallWorkspace) {
    SparseState state(4, 0, 4);
    ContractionWorkspace ws(4);
    std::mt19937_64 rng = make_rng(38);
    EXPECT_THROW(apply_gate(state, haar_random_gate(0, 4, rng), ws), std::invalid_argument);
    ContractionWorkspace tiny(1); // capacity 4 < 4*4
    EXPECT_THROW(apply_gate(state, haar_random_gate(0, 1, rng), tiny), std::invalid_argument);
}

TEST(ContractionTest, DropEpsilonPrunesSmallOutputs) {
    SparseState state(2, 0, 4);
    ContractionWorkspace ws(4);
    const double h = M_SQRT1_2;
    std::array<Amplitude, 16> m{};
    m[0 * 4 + 0] = h;
    m[0 * 4 + 1] = h;
    m[1 * 4 + 0] = h;
    m[1 * 4 + 1] = -h;
    m[2 * 4 + 2] = h;
    m[2 * 4 + 3] = h;
    m[3 * 4 + 2] = h;
    m[3 * 4 + 3] = -h;
    const TwoQubitGate gate = make_two_qubit_gate(m, 0, 1);
    apply_gate(state, gate, ws);
    EXPECT_EQ(ws.n_out, 2u);
    apply_gate(state, gate, ws, 0.9); // prunes both 1/sqrt(2) outputs
    EXPECT_EQ(ws.n_out, 0u);
}

} // namespace
} // namespace trusts
