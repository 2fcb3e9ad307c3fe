// Copyright 2026 The sqsp developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sqsp/state.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "test_util.hpp"

using namespace sqsp;

namespace {

std::string amp(double re) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g+0.0i", re);
    return buf;
}

// The eight squared magnitudes of the worked 3-qubit example.
const double kExampleP[8] = {0.05, 0.1, 0.03, 0.17, 0.35, 0.09, 0.18, 0.03};

SparseStateSpec example_3q_spec() {
    std::string doc = R"({"n":3,"entries":[)";
    for (int i = 0; i < 8; ++i) {
        doc += (i ? "," : "");
        doc += "[\"" + amp(std::sqrt(kExampleP[i])) + "\",\"" + index_to_bits(i, 3) + "\"]";
    }
    doc += "]}";
    return parse_state_spec(doc);
}

}  // namespace

TEST(ParseStateSpec, SingleBasisState) {
    SparseStateSpec s = parse_state_spec(R"({"n":3,"entries":[["1.0+0.0i","101"]]})");
    EXPECT_EQ(s.num_qubits, 3);
    ASSERT_EQ(s.d(), 1);
    EXPECT_EQ(s.entries[0].bits, "101");
    EXPECT_NEAR(std::abs(s.entries[0].amplitude - cplx(1.0, 0.0)), 0.0, 1e-15);
}

TEST(ParseStateSpec, WorkedThreeQubitExample) {
    SparseStateSpec s = example_3q_spec();
    EXPECT_EQ(s.num_qubits, 3);
    EXPECT_EQ(s.d(), 8);
    for (int i = 0; i < 8; ++i) {
        EXPECT_NEAR(s.entries[i].amplitude.real(), std::sqrt(kExampleP[i]), 1e-12);
    }
}

TEST(ParseStateSpec, DuplicateBitstringRejected) {
    EXPECT_THROW(parse_state_spec(
                     R"({"n":5,"entries":[["0.7071067811865476+0.0i","01001"],
                                          ["0.7071067811865476+0.0i","01001"]]})"),
                 std::invalid_argument);
}

TEST(ParseStateSpec, LengthAndAlphabetChecked) {
    EXPECT_THROW(parse_state_spec(R"({"n":3,"entries":[["1.0+0.0i","10"]]})"),
                 std::invalid_argument);
    EXPECT_THROW(parse_state_spec(R"({"n":3,"entries":[["1.0+0.0i","1a1"]]})"),
                 std::invalid_argument);
}

TEST(ParseStateSpec, MalformedDocument) {
    EXPECT_THROW(parse_state_spec("{"), std::invalid_argument);
    EXPECT_THROW(parse_state_spec(R"({"entries":[]})"), std::invalid_argument);
    EXPECT_THROW(parse_state_spec(R"({"n":2,"entries":[["1.0","11"]]})"), std::invalid_argument);
}

TEST(ParseStateSpec, NormHandling) {
    // 1e-6 off: rejected without the flag, rescaled with it.
    std::string off = R"({"n":1,"entries":[["0.7071072+0.0i","0"],["0.7071072+0.0i","1"]]})";
    EXPECT_THROW(parse_state_spec(off), std::invalid_argument);
    std::string with_flag =
        R"({"n":1,"renormalize":true,"entries":[["0.7071072+0.0i","0"],["0.7071072+0.0i","1"]]})";
    SparseStateSpec s = parse_state_spec(with_flag);
    double nsq = 0;
    for (auto& e : s.entries) nsq += std::norm(e.amplitude);
    EXPECT_NEAR(nsq, 1.0, 1e-12);
    // Far off: rejected even with the flag.
    EXPECT_THROW(parse_state_spec(R"({"n":1,"renormalize":true,"entries":[["0.9+0.0i","0"]]})"),
                 std::invalid_argument);
}

TEST(ParseAmplitude, Forms) {
    EXPECT_NEAR(std::abs(parse_amplitude("0.5916+0.0i") - cplx(0.5916, 0.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(parse_amplitude("-0.25-0.75i") - cplx(-0.25, -0.75)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(parse_amplitude("1e-2+2e-3i") - cplx(0.01, 0.002)), 0.0, 1e-15);
    EXPECT_THROW(parse_amplitude("0.5"), std::invalid_argument);
    EXPECT_THROW(parse_amplitude("0.5i"), std::invalid_argument);
    EXPECT_THROW(parse_amplitude("a+bi"), std::invalid_argument);
}

TEST(Fidelity, SelfOverlapIsOne) {
    DenseState s = DenseState::zero(2);
    s.amplitudes = {0.5, 0.5, 0.5, 0.5};
    EXPECT_NEAR(fidelity(s, s), 1.0, 1e-12);
}

TEST(Fidelity, OrthogonalStates) {
    DenseState a = DenseState::zero(1), b = DenseState::zero(1);
    a.amplitudes[0] = 1.0;
    b.amplitudes[1] = 1.0;
    EXPECT_NEAR(fidelity(a, b), 0.0, 1e-15);
}

TEST(Fidelity, HalfOverlapWithPlusState) {
    DenseState a = DenseState::zero(1), b = DenseState::zero(1);
    a.amplitudes[0] = 1.0;
    b.amplitudes = {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    EXPECT_NEAR(fidelity(a, b), 0.5, 1e-12);
    EXPECT_NEAR(fidelity(b, a), 0.5, 1e-12);
}

TEST(Fidelity, GlobalPhaseInsensitive) {
    DenseState a = DenseState::zero(1), b = DenseState::zero(1);
    a.amplitudes = {0.6, 0.8};
    cplx phase = std::polar(1.0, 1.234);
    b.amplitudes = {phase * 0.6, phase * 0.8};
    EXPECT_NEAR(fidelity(a, b), 1.0, 1e-12);
}

TEST(Fidelity, DimensionMismatchThrows) {
    EXPECT_THROW(fidelity(DenseState::zero(1), DenseState::zero(2)), std::invalid_argument);
}

TEST(Embed, BasisEmbedding) {
    SparseStateSpec s;
    s.num_qubits = 2;
    s.entries = {{cplx(1.0, 0.0), "11"}};
    DenseState v = embed(s);
    EXPECT_NEAR(std::abs(v.amplitudes[0]), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(v.amplitudes[1]), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(v.amplitudes[2]), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(v.amplitudes[3] - cplx(1.0, 0.0)), 0.0, 1e-15);
}

TEST(Embed, WorkedExampleOrder) {
    DenseState v = embed(example_3q_spec());
    for (int i = 0; i < 8; ++i) {
        EXPECT_NEAR(v.amplitudes[i].real(), std::sqrt(kExampleP[i]), 1e-12);
        EXPECT_NEAR(v.amplitudes[i].imag(), 0.0, 1e-15);
    }
}

TEST(Embed, BitOrderConvention) {
    // Leftmost character is qubit 0 and the most significant index bit.
    EXPECT_EQ(bits_to_index("10"), 2u);
    EXPECT_EQ(bits_to_index("01"), 1u);
    EXPECT_EQ(bits_to_index("1000"), 8u);
    EXPECT_EQ(index_to_bits(6, 4), "0110");
}

TEST(Embed, RoundTripRandomSpecs) {
    std::mt19937_64 rng(20260810);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 2 + static_cast<int>(rng() % 7);
        int d = 1 + static_cast<int>(rng() % std::min<uint64_t>(8, uint64_t{1} << n));
        SparseStateSpec spec = sqsp_test::random_spec(rng, n, d);
        SparseStateSpec back = extract_nonzeros(embed(spec));
        ASSERT_EQ(back.d(), spec.d());
        auto sorted = spec;
        std::sort(sorted.entries.begin(), sorted.entries.end(),
                  [](const SparseEntry& a, const SparseEntry& b) { return a.bits < b.bits; });
        for (int i = 0; i < spec.d(); ++i) {
            EXPECT_EQ(back.entries[i].bits, sorted.entries[i].bits);
            EXPECT_LT(std::abs(back.entries[i].amplitude - sorted.entries[i].amplitude), 1e-12);
        }
    }
}

TEST(SpecJson, RoundTrip) {
    std::mt19937_64 rng(7);
    SparseStateSpec spec = sqsp_test::random_spec(rng, 5, 4);
    SparseStateSpec back = parse_state_spec(serialize_state_spec(spec));
    ASSERT_EQ(back.d(), spec.d());
    for (int i = 0; i < spec.d(); ++i) {
        EXPECT_EQ(back.entries[i].bits, spec.entries[i].bits);
        EXPECT_LT(std::abs(back.entries[i].amplitude - spec.entries[i].amplitude), 1e-15);
    }
}
