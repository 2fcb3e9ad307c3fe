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

#include "sqsp/circuit.hpp"

#include <random>

#include "gtest/gtest.h"
#include "sqsp/lower.hpp"
#include "sqsp/metrics.hpp"
#include "sqsp/serialize.hpp"
#include "sqsp/synth.hpp"
#include "test_util.hpp"

using namespace sqsp;

namespace {

// Minimal layer scheduler over an explicit (op, wires) list, kept separate
// from metrics() so depth expectations don't lean on the code under test.
int hand_layer_depth(const std::vector<std::vector<int>>& wire_lists, int nq) {
    std::vector<int> last(nq, 0);
    int depth = 0;
    for (const auto& wires : wire_lists) {
        int layer = 0;
        for (int q : wires) layer = std::max(layer, last[q]);
        ++layer;
        for (int q : wires) last[q] = layer;
        depth = std::max(depth, layer);
    }
    return depth;
}

}  // namespace

TEST(Validate, CatchesBadOperands) {
    Circuit c(2);
    c.cnot(0, 1);
    EXPECT_NO_THROW(validate_circuit(c));

    Circuit outr(2);
    outr.cnot(0, 2);
    EXPECT_THROW(validate_circuit(outr), std::invalid_argument);

    Circuit rep(2);
    rep.cnot(1, 1);
    EXPECT_THROW(validate_circuit(rep), std::invalid_argument);

    Circuit cond_first(2, 1);
    cond_first.cond(CondGate::X, {0}, 1);
    EXPECT_THROW(validate_circuit(cond_first), std::invalid_argument);

    Circuit ok(2, 1);
    ok.measure(0, 0);
    ok.cond(CondGate::X, {0}, 1);
    EXPECT_NO_THROW(validate_circuit(ok));
}

TEST(Serialize, EmptyOneQubitCircuit) {
    Circuit c(1);
    EXPECT_EQ(serialize(c), "qubits 1\ncbits 0\n");
}

TEST(Serialize, MeasureThenConditionedX) {
    Circuit c(8, 1);
    c.measure(4, 0);
    c.cond(CondGate::X, {0}, 7);
    EXPECT_EQ(serialize(c), "qubits 8\ncbits 1\nmeasure q4 -> c0\ncond xor(c0) x q7\n");
}

TEST(Serialize, GateLineForms) {
    Circuit c(4, 2);
    c.x(3);
    c.h(0);
    c.t(1);
    c.tdg(1);
    c.ry(1.8754890, 2);
    c.rz(0.25, 2);
    c.cnot(0, 1);
    c.measure(2, 0);
    c.measure(3, 1);
    c.round_barrier();
    c.cond(CondGate::Z, {1}, 0, true);
    std::string text = serialize(c);
    EXPECT_NE(text.find("x q3\n"), std::string::npos);
    EXPECT_NE(text.find("ry(1.875489) q2\n"), std::string::npos);
    EXPECT_NE(text.find("rz(0.25) q2\n"), std::string::npos);
    EXPECT_NE(text.find("cx q0 q1\n"), std::string::npos);
    EXPECT_NE(text.find("round\n"), std::string::npos);
    EXPECT_NE(text.find("cond !xor(c1) z q0\n"), std::string::npos);
    EXPECT_EQ(parse_circuit(text), c);
}

TEST(Serialize, StageTagsPreserved) {
    Circuit c(2);
    c.h(0, Stage::Gqsp);
    c.cnot(0, 1, Stage::Permutation);
    std::string text = serialize(c);
    EXPECT_NE(text.find("# stage: gqsp\n"), std::string::npos);
    EXPECT_NE(text.find("# stage: permutation\n"), std::string::npos);
    EXPECT_EQ(parse_circuit(text), c);
}

TEST(Serialize, ParseErrorsCarryLineNumbers) {
    try {
        parse_circuit("qubits 2\ncbits 0\nbogus q0\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line, 3);
    }
    // Dangling cbit reference.
    EXPECT_THROW(parse_circuit("qubits 2\ncbits 2\nmeasure q0 -> c0\ncond xor(c1) x q1\n"),
                 ParseError);
    EXPECT_THROW(parse_circuit("qubits 1\ncbits 0\ncx q0 q1\n"), ParseError);
}

TEST(Serialize, MutatedDocumentsNeverCrash) {
    // Single-character mutations of a valid document must either parse or
    // throw a ParseError; nothing else.
    std::mt19937_64 rng(314);
    Circuit c = sqsp_test::random_native_circuit(rng, 4, 40, true);
    std::string text = serialize(c);
    const char charset[] = "qc0123456789xhtr(),.->#| ";
    for (int trial = 0; trial < 300; ++trial) {
        std::string mutated = text;
        size_t pos = rng() % mutated.size();
        mutated[pos] = charset[rng() % (sizeof(charset) - 1)];
        try {
            Circuit parsed = parse_circuit(mutated);
            (void)parsed;
        } catch (const ParseError&) {
        } catch (const std::invalid_argument&) {
        }
    }
}

TEST(Serialize, RoundTripRandomCircuits) {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 30; ++trial) {
        Circuit c = sqsp_test::random_native_circuit(rng, 6, 200, true);
        c.num_data = 4;
        c.registers.a = {0, 4};
        c.registers.c = {4, 2};
        Circuit back = parse_circuit(serialize(c));
        EXPECT_EQ(back, c);
    }
}

TEST(Serialize, CompositeForms) {
    Circuit c(8);
    c.cswap(0, 1, 2);
    c.toffoli(0, 1, 2);
    Instruction mcx;
    mcx.op = Op::MCX;
    mcx.qubits = {0, 1, 2, 3, 4};
    mcx.num_controls = 3;
    c.push(mcx);
    Instruction mcry = mcx;
    mcry.op = Op::MCRY;
    mcry.theta = 0.75;
    c.push(mcry);
    Instruction orcx = mcx;
    orcx.op = Op::OR_CX;
    c.push(orcx);
    Instruction parcx = mcx;
    parcx.op = Op::PAR_CX;
    parcx.mode = FanoutMode::Maf;
    parcx.qubits = {0, 1, 2, 3, 4, 5, 6};
    c.push(parcx);
    Instruction fan;
    fan.op = Op::FANOUT;
    fan.mode = FanoutMode::Tree;
    fan.qubits = {0, 1, 2, 3};
    fan.num_targets = 3;
    c.push(fan);
    std::string text = serialize(c);
    EXPECT_NE(text.find("mcx q0 q1 q2 > q3 | q4\n"), std::string::npos);
    EXPECT_NE(text.find("fanout(tree) q0 > q1 q2 q3\n"), std::string::npos);
    EXPECT_EQ(parse_circuit(text), c);
}

TEST(Lower, ToffoliIsFifteenGatesDepthEleven) {
    Circuit c(3);
    c.toffoli(0, 1, 2);
    Circuit low = lower(c);
    EXPECT_TRUE(low.is_native());
    EXPECT_EQ(low.instructions.size(), 15u);

    Metrics m = metrics(low);
    EXPECT_EQ(m.size, 15);
    EXPECT_EQ(m.quantum_depth, 11);

    // Independent layer count over the emitted wire lists.
    std::vector<std::vector<int>> wires;
    for (const auto& ins : low.instructions) wires.push_back(ins.qubits);
    EXPECT_EQ(hand_layer_depth(wires, 3), 11);
}

TEST(Lower, CswapExpandsThroughToffoli) {
    Circuit c(3);
    c.cswap(0, 1, 2);
    Circuit low = lower(c);
    EXPECT_TRUE(low.is_native());
    EXPECT_EQ(low.instructions.size(), 17u);  // CNOT + 15 + CNOT
    EXPECT_EQ(low.instructions.front().op, Op::CNOT);
    EXPECT_EQ(low.instructions.back().op, Op::CNOT);
}

TEST(Lower, CompositeMcxMatchesDefiningMatrix) {
    // Operand-carried pool wires must come back to |0>; the action on the
    // controls and target is the multi-controlled flip.
    for (int k : {3, 4}) {
        Circuit c(k + 1 + (k - 2));
        Instruction ins;
        ins.op = Op::MCX;
        for (int i = 0; i < k; ++i) ins.qubits.push_back(i);
        ins.qubits.push_back(k);
        for (int i = 0; i < k - 2; ++i) ins.qubits.push_back(k + 1 + i);
        ins.num_controls = k;
        c.push(ins);
        auto m = sqsp_test::fragment_matrix(lower(c), k + 1);
        uint64_t dim = uint64_t{1} << (k + 1);
        for (uint64_t b = 0; b < dim; ++b) {
            uint64_t want = (b >> 1) == dim / 2 - 1 ? b ^ 1 : b;
            EXPECT_LT(std::abs(m[b][want] - cplx(1.0, 0.0)), 1e-12) << "k=" << k;
        }
    }
}

TEST(Lower, MafFanoutAllocatesClassicalBits) {
    Circuit c(9);
    Instruction fan;
    fan.op = Op::FANOUT;
    fan.mode = FanoutMode::Maf;
    fan.qubits = {0, 1, 2, 3, 4, 5, 6, 7, 8};
    fan.num_targets = 4;
    c.push(fan);
    Circuit low = lower(c);
    EXPECT_TRUE(low.is_native());
    EXPECT_EQ(low.num_cbits, 4);  // frugal block: two legs, two helpers
    int measures = 0, conds = 0, barriers = 0;
    for (const auto& ins : low.instructions) {
        measures += ins.op == Op::MEASURE;
        conds += ins.op == Op::COND;
        barriers += ins.op == Op::ROUND_BARRIER;
    }
    EXPECT_EQ(measures, 4);
    EXPECT_EQ(barriers, 1);
    EXPECT_GT(conds, 0);
}

TEST(Lower, NativeCircuitIsFixedPoint) {
    std::mt19937_64 rng(5);
    Circuit c = sqsp_test::random_native_circuit(rng, 5, 120, true);
    Circuit low = lower(c);
    EXPECT_EQ(low, c);
}

TEST(Lower, MalformedCompositeOperandsRejected) {
    Circuit zero_targets(4);
    Instruction fan;
    fan.op = Op::FANOUT;
    fan.mode = FanoutMode::Sequential;
    fan.qubits = {0};
    fan.num_targets = 0;
    zero_targets.push(fan);
    EXPECT_THROW(validate_circuit(zero_targets), std::invalid_argument);

    Circuit zero_controls(4);
    Instruction mcx;
    mcx.op = Op::MCX;
    mcx.qubits = {0};
    mcx.num_controls = 0;
    zero_controls.push(mcx);
    EXPECT_THROW(validate_circuit(zero_controls), std::invalid_argument);

    Circuit starved(6);
    Instruction wide;
    wide.op = Op::MCX;
    wide.qubits = {0, 1, 2, 3, 4};  // four controls, target, no pool
    wide.num_controls = 4;
    starved.push(wide);
    EXPECT_THROW(lower(starved), std::invalid_argument);
}

TEST(Metrics, SingleCnot) {
    Circuit c(2);
    c.cnot(0, 1);
    Metrics m = metrics(c);
    EXPECT_EQ(m.size, 1);
    EXPECT_EQ(m.quantum_depth, 1);
    EXPECT_EQ(m.maf_rounds, 0);
    EXPECT_EQ(m.classical_depth_bound, 0);
}

TEST(Metrics, RejectsComposite) {
    Circuit c(3);
    c.toffoli(0, 1, 2);
    EXPECT_THROW(metrics(c), std::invalid_argument);
}

TEST(Metrics, MafFanoutBlockDepthAndRounds) {
    for (int pool_factor : {1, 2}) {
        Circuit c(1 + 4 + 4 * pool_factor);
        std::vector<int> targets{1, 2, 3, 4};
        std::vector<int> pool;
        for (int i = 0; i < 4 * pool_factor; ++i) pool.push_back(5 + i);
        synth_fanout(c, 0, targets, FanoutMode::Maf, pool);
        Metrics m = metrics(c);
        EXPECT_EQ(m.maf_rounds, 1) << "pool factor " << pool_factor;
        EXPECT_LE(m.quantum_depth, 6) << "pool factor " << pool_factor;
    }
}

TEST(Metrics, DepthAtLeastRoundCount) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        Circuit c = sqsp_test::random_native_circuit(rng, 4, 80, true);
        Metrics m = metrics(lower(c));
        int barriers = 0;
        for (const auto& ins : c.instructions) barriers += ins.op == Op::ROUND_BARRIER;
        EXPECT_GE(m.quantum_depth, barriers);
    }
}

TEST(Metrics, ClassicalDepthWithinParityContract) {
    Circuit c(3, 4);
    for (int i = 0; i < 4; ++i) c.measure(i % 3, i);
    c.round_barrier();
    c.cond(CondGate::X, {0, 1, 2, 3}, 0);
    c.cond(CondGate::Z, {2}, 1);
    Metrics m = metrics(c);
    EXPECT_EQ(m.classical_depth_bound, 2);  // ceil(log2 4)
    EXPECT_LE(m.classical_depth_bound, xor_tree_depth(4) + 1);
}

TEST(Metrics, PerStageSizesSumToTotal) {
    Circuit c(3);
    c.h(0, Stage::Gqsp);
    c.cnot(0, 1, Stage::Onehot);
    c.x(2, Stage::Permutation);
    c.cnot(1, 2, Stage::Garbage);
    Metrics m = metrics(c);
    long long sum = 0;
    for (auto& [name, sm] : m.per_stage) sum += sm.size;
    EXPECT_EQ(sum, m.size);
}

TEST(Metrics, RoundTripStability) {
    std::mt19937_64 rng(99);
    Circuit c = sqsp_test::random_native_circuit(rng, 6, 150, true);
    Metrics before = metrics(c);
    Metrics after = metrics(parse_circuit(serialize(c)));
    EXPECT_EQ(before.size, after.size);
    EXPECT_EQ(before.quantum_depth, after.quantum_depth);
    EXPECT_EQ(before.maf_rounds, after.maf_rounds);
    EXPECT_EQ(before.classical_depth_bound, after.classical_depth_bound);
}
