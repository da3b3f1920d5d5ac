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

#include "trusts/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.hpp"
#include "trusts/circuit.hpp"

namespace trusts {
namespace {

TEST(AnalysisTest, FidelityOfStateAgainstItselfIsOne) {
    std::mt19937_64 rng = make_rng(61);
    const SparseState phi = testing::random_sparse_state(8, 30, 32, rng);
    EXPECT_NEAR(fidelity(phi, to_dense(phi)), 1.0, 1e-12);
}

TEST(AnalysisTest, FidelityOfDisjointSupportsIsZero) {
    SparseState phi(2, 0, 2);
    const std::vector<BasisIndex> coords{0, 1};
    const std::vector<Amplitude> amps{{M_SQRT1_2, 0.0}, {M_SQRT1_2, 0.0}};
    phi.load_terms(coords, amps);
    const std::vector<Amplitude> psi{{0.0, 0.0}, {0.0, 0.0}, {M_SQRT1_2, 0.0}, {0.0, M_SQRT1_2}};
    EXPECT_EQ(fidelity(phi, psi), 0.0);
}

TEST(AnalysisTest, FidelityValidatesInputs) {
    const SparseState phi(3, 0, 2);
    const std::vector<Amplitude> wrong_size(4, Amplitude{0.5, 0.0});
    EXPECT_THROW(fidelity(phi, wrong_size), std::invalid_argument);
    std::vector<Amplitude> unnormalized(8, Amplitude{0.0, 0.0});
    unnormalized[0] = Amplitude{0.5, 0.0};
    EXPECT_THROW(fidelity(phi, unnormalized), std::invalid_argument);
}

TEST(AnalysisTest, FMinValues) {
    EXPECT_DOUBLE_EQ(f_min(1), 0.5);
    EXPECT_DOUBLE_EQ(f_min(24), std::ldexp(1.0, -24));
    EXPECT_NEAR(f_min(24), 5.96e-8, 1e-9);
    EXPECT_GT(f_min(64), 0.0);
    EXPECT_DOUBLE_EQ(f_min(64), std::ldexp(1.0, -64));
    EXPECT_THROW(f_min(0), std::invalid_argument);
    EXPECT_THROW(f_min(65), std::invalid_argument);
}

TEST(AnalysisTest, PorterThomasFmaxClosedForm) {
    EXPECT_DOUBLE_EQ(porter_thomas_fmax(1.0), 1.0);
    EXPECT_NEAR(porter_thomas_fmax(0.5), 0.84657359027997264, 1e-15);
    EXPECT_THROW(porter_thomas_fmax(0.0), std::invalid_argument);
    EXPECT_THROW(porter_thomas_fmax(1.5), std::invalid_argument);
}

TEST(AnalysisTest, PorterThomasFmaxIsMonotone) {
    double prev = 0.0;
    for (int i = 1; i <= 100; ++i) {
        const double d = static_cast<double>(i) / 100.0;
        const double v = porter_thomas_fmax(d);
        EXPECT_GT(v, prev);
        EXPECT_LE(v, 1.0);
        prev = v;
    }
    EXPECT_DOUBLE_EQ(prev, 1.0);
}

TEST(AnalysisTest, PorterThomasPminValues) {
    EXPECT_DOUBLE_EQ(porter_thomas_pmin(1.0, 8), 0.0);
    EXPECT_DOUBLE_EQ(porter_thomas_pmin(std::exp(-1.0), 10), std::ldexp(1.0, -10));
    EXPECT_THROW(porter_thomas_pmin(0.0, 8), std::invalid_argument);
    EXPECT_THROW(porter_thomas_pmin(0.5, 0), std::invalid_argument);
}

// Deep random circuits reach the Porter-Thomas regime: the k-th largest
// output probability tracks -ln(d)/2^N.
TEST(AnalysisTest, PminMatchesDeepCircuitOrderStatistics) {
    const int n = 12;
    const std::size_t dim = std::size_t{1} << n;
    const double d = std::ldexp(1.0, -6);
    const std::size_t k = static_cast<std::size_t>(d * static_cast<double>(dim));
    std::vector<double> kth_largest;
    for (int c = 0; c < 20; ++c) {
        const Circuit circuit = random_layered_circuit(n, 10, derive_seed(62, c));
        const std::vector<Amplitude> psi = run_dense(circuit);
        std::vector<double> probs(dim);
        for (std::size_t x = 0; x < dim; ++x) {
            probs[x] = std::norm(psi[x]);
        }
        std::nth_element(probs.begin(), probs.begin() + (k - 1), probs.end(),
                         [](double a, double b) { return a > b; });
        kth_largest.push_back(probs[k - 1]);
    }
    const double expected = porter_thomas_pmin(d, n);
    EXPECT_NEAR(testing::mean_of(kth_largest), expected, 0.10 * expected);
}

TEST(AnalysisTest, NumericFmaxTrivialCases) {
    std::vector<Amplitude> uniform(16, Amplitude{0.25, 0.0});
    EXPECT_NEAR(numeric_fmax(uniform, 16), 1.0, 1e-15);
    EXPECT_NEAR(numeric_fmax(uniform, 8), 0.5, 1e-15);
    EXPECT_THROW(numeric_fmax(uniform, 0), std::invalid_argument);
    std::vector<Amplitude> unnormalized(16, Amplitude{0.5, 0.0});
    EXPECT_THROW(numeric_fmax(unnormalized, 4), std::invalid_argument);
}

TEST(AnalysisTest, NumericFmaxIsMonotoneInK) {
    const Circuit circuit = random_layered_circuit(8, 3, 63);
    const std::vector<Amplitude> psi = run_dense(circuit);
    double prev = 0.0;
    for (std::size_t k = 1; k <= 256; k *= 2) {
        const double v = numeric_fmax(psi, k);
        EXPECT_GE(v, prev - 1e-15);
        prev = v;
    }
    EXPECT_NEAR(prev, 1.0, 1e-12);
}

TEST(AnalysisTest, NumericFmaxBoundsRandomTruncations) {
    std::mt19937_64 rng = make_rng(64);
    const Circuit circuit = random_layered_circuit(8, 3, 65);
    const std::vector<Amplitude> psi = run_dense(circuit);
    const std::size_t k = 16;
    const double bound = numeric_fmax(psi, k);
    for (int trial = 0; trial < 50; ++trial) {
        const SparseState candidate = testing::random_sparse_state(8, k, k, rng);
        EXPECT_LE(fidelity(candidate, psi), bound + 1e-12);
    }
    // the optimal truncation itself attains the bound
    const SparseState best = from_dense(psi, 8, k);
    EXPECT_NEAR(fidelity(best, psi), bound, 1e-12);
}

// In the Porter-Thomas regime numeric_fmax approaches d(1 - ln d), and
// from_dense's kept probability is the same quantity by construction.
TEST(AnalysisTest, PorterThomasRegimeMatchesNumericFmax) {
    const int n = 12;
    const int circuits = 20;
    for (const double d : {std::ldexp(1.0, -8), std::ldexp(1.0, -4), 0.5}) {
        const std::size_t k = static_cast<std::size_t>(d * std::ldexp(1.0, n));
        std::vector<double> fmaxes;
        std::vector<double> kept;
        for (int c = 0; c < circuits; ++c) {
            const Circuit circuit = random_layered_circuit(n, 10, derive_seed(66, c));
            const std::vector<Amplitude> psi = run_dense(circuit);
            fmaxes.push_back(numeric_fmax(psi, k));
            kept.push_back(from_dense(psi, n, k).gamma_sq());
        }
        const double expected = porter_thomas_fmax(d);
        EXPECT_NEAR(testing::mean_of(fmaxes), expected, 0.10 * expected) << "d = " << d;
        EXPECT_NEAR(testing::mean_of(kept), expected, 0.10 * expected) << "d = " << d;
    }
}

TEST(AnalysisTest, GapStatsOnExactRuns) {
    const std::vector<std::pair<double, double>> runs{{1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}};
    const GapStats stats = gamma_fidelity_gap(runs);
    EXPECT_EQ(stats.mean_gap, 0.0);
    EXPECT_EQ(stats.std_error, 0.0);
    EXPECT_EQ(stats.frac_fidelity_at_least_gamma, 1.0);
    EXPECT_EQ(stats.count, 3u);
}

TEST(AnalysisTest, GapStatsArithmetic) {
    const std::vector<std::pair<double, double>> runs{{0.5, 0.4}, {0.3, 0.4}};
    const GapStats stats = gamma_fidelity_gap(runs);
    EXPECT_NEAR(stats.mean_gap, 0.0, 1e-15);
    // gaps are +0.1 and -0.1: sd = 0.1*sqrt(2), se = sd/sqrt(2) = 0.1
    EXPECT_NEAR(stats.std_error, 0.1, 1e-12);
    EXPECT_EQ(stats.frac_fidelity_at_least_gamma, 0.5);
}

TEST(AnalysisTest, GapStatsNeedTwoRuns) {
    const std::vector<std::pair<double, double>> runs{{1.0, 1.0}};
    EXPECT_THROW(gamma_fidelity_gap(runs), std::invalid_argument);
}

} // namespace
} // namespace trusts
