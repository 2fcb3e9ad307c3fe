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

#ifndef SQSP_CIRCUIT_HPP
#define SQSP_CIRCUIT_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace sqsp {

enum class Op {
    X,
    H,
    T,
    Tdg,
    RY,
    RZ,
    U1Q,
    CNOT,
    CSWAP,
    TOFFOLI,
    MCX,
    MCRY,
    FANOUT,
    OR_CX,
    PAR_CX,
    MEASURE,
    COND,
    ROUND_BARRIER,
};

enum class Stage { None, Gqsp, Onehot, Permutation, Garbage };

enum class FanoutMode {
    Sequential,  // one CNOT per target, shared control
    Tree,        // CNOT doubling; targets must be fresh |0> wires
    Maf,         // measurement-assisted constant-depth block
};

enum class CondGate { X, Z };

/// One instruction. Qubit operand layout by kind:
///   X/H/T/Tdg/RY/RZ/U1Q      {target}
///   CNOT                     {control, target}
///   CSWAP                    {control, target1, target2}
///   TOFFOLI                  {control1, control2, target}
///   MCX/MCRY/OR_CX/PAR_CX    {controls..., target, pool...}   (num_controls set)
///   FANOUT                   {control, targets..., pool...}   (num_targets set)
///   MEASURE                  {qubit}, cbits = {cbit}
///   COND                     {target}, cbits = XOR'd condition bits
struct Instruction {
    Op op;
    std::vector<int> qubits;
    std::vector<int> cbits;
    double theta = 0.0;
    double phi = 0.0;
    double lambda = 0.0;
    int num_controls = 0;
    int num_targets = 0;
    FanoutMode mode = FanoutMode::Sequential;
    CondGate cond_gate = CondGate::X;
    bool negate = false;
    Stage stage = Stage::None;

    bool operator==(const Instruction& other) const {
        return op == other.op && qubits == other.qubits && cbits == other.cbits &&
               theta == other.theta && phi == other.phi && lambda == other.lambda &&
               num_controls == other.num_controls && num_targets == other.num_targets &&
               mode == other.mode && cond_gate == other.cond_gate &&
               negate == other.negate && stage == other.stage;
    }
};

inline bool op_is_native(Op op) {
    switch (op) {
        case Op::X:
        case Op::H:
        case Op::T:
        case Op::Tdg:
        case Op::RY:
        case Op::RZ:
        case Op::U1Q:
        case Op::CNOT:
        case Op::MEASURE:
        case Op::COND:
        case Op::ROUND_BARRIER:
            return true;
        default:
            return false;
    }
}

/// True for native unitary gates, the ones counted by the size metric.
inline bool op_is_unitary_gate(Op op) {
    return op_is_native(op) && op != Op::MEASURE && op != Op::COND && op != Op::ROUND_BARRIER;
}

struct RegisterSpan {
    int start = 0;
    int size = 0;
};

/// Named wire spans of the pipeline layout. Unused spans stay zero-sized.
struct RegisterMap {
    RegisterSpan a, b, c, d;

    bool operator==(const RegisterMap& o) const {
        auto eq = [](const RegisterSpan& x, const RegisterSpan& y) {
            return x.start == y.start && x.size == y.size;
        };
        return eq(a, o.a) && eq(b, o.b) && eq(c, o.c) && eq(d, o.d);
    }
};

struct Circuit {
    int num_qubits = 0;
    int num_cbits = 0;
    /// Wires 0..num_data-1 carry the prepared state; the rest are ancillas.
    int num_data = 0;
    std::vector<Instruction> instructions;
    RegisterMap registers;

    explicit Circuit(int qubits = 0, int cbits = 0)
        : num_qubits(qubits), num_cbits(cbits), num_data(qubits) {}

    bool is_native() const {
        for (const auto& ins : instructions) {
            if (!op_is_native(ins.op)) return false;
        }
        return true;
    }

    int alloc_cbit() { return num_cbits++; }

    Instruction& push(Instruction ins) {
        instructions.push_back(std::move(ins));
        return instructions.back();
    }

    void gate1(Op op, int q, Stage stage = Stage::None) {
        Instruction ins;
        ins.op = op;
        ins.qubits = {q};
        ins.stage = stage;
        push(std::move(ins));
    }

    void x(int q, Stage s = Stage::None) { gate1(Op::X, q, s); }
    void h(int q, Stage s = Stage::None) { gate1(Op::H, q, s); }
    void t(int q, Stage s = Stage::None) { gate1(Op::T, q, s); }
    void tdg(int q, Stage s = Stage::None) { gate1(Op::Tdg, q, s); }

    void ry(double theta, int q, Stage s = Stage::None) {
        Instruction ins;
        ins.op = Op::RY;
        ins.qubits = {q};
        ins.theta = theta;
        ins.stage = s;
        push(std::move(ins));
    }

    void rz(double theta, int q, Stage s = Stage::None) {
        Instruction ins;
        ins.op = Op::RZ;
        ins.qubits = {q};
        ins.theta = theta;
        ins.stage = s;
        push(std::move(ins));
    }

    void u1q(double theta, double phi, double lambda, int q, Stage s = Stage::None) {
        Instruction ins;
        ins.op = Op::U1Q;
        ins.qubits = {q};
        ins.theta = theta;
        ins.phi = phi;
        ins.lambda = lambda;
        ins.stage = s;
        push(std::move(ins));
    }

    void cnot(int c, int t, Stage s = Stage::None) {
        Instruction ins;
        ins.op = Op::CNOT;
        ins.qubits = {c, t};
        ins.stage = s;
        push(std::move(ins));
    }

    void cswap(int c, int t1, int t2, Stage s = Stage::None) {
        Instruction ins;
        ins.op = Op::CSWAP;
        ins.qubits = {c, t1, t2};
        ins.stage = s;
        push(std::move(ins));
    }

    void toffoli(int c1, int c2, int t, Stage s = Stage::None) {
        Instruction ins;
        ins.op = Op::TOFFOLI;
        ins.qubits = {c1, c2, t};
        ins.stage = s;
        push(std::move(ins));
    }

    void measure(int q, int cbit, Stage s = Stage::None) {
        Instruction ins;
        ins.op = Op::MEASURE;
        ins.qubits = {q};
        ins.cbits = {cbit};
        ins.stage = s;
        push(std::move(ins));
    }

    void cond(CondGate g, std::vector<int> condition, int target, bool negate = false,
              Stage s = Stage::None) {
        Instruction ins;
        ins.op = Op::COND;
        ins.qubits = {target};
        ins.cbits = std::move(condition);
        ins.cond_gate = g;
        ins.negate = negate;
        ins.stage = s;
        push(std::move(ins));
    }

    void round_barrier(Stage s = Stage::None) {
        Instruction ins;
        ins.op = Op::ROUND_BARRIER;
        ins.stage = s;
        push(std::move(ins));
    }

    bool operator==(const Circuit& o) const {
        return num_qubits == o.num_qubits && num_cbits == o.num_cbits &&
               num_data == o.num_data && instructions == o.instructions &&
               registers == o.registers;
    }
};

/// Structural checks: operand ranges, operand distinctness, measurement-before-
/// condition ordering, composite operand-count sanity. Throws on violation.
inline void validate_circuit(const Circuit& c) {
    std::vector<bool> cbit_written(c.num_cbits, false);
    for (size_t pos = 0; pos < c.instructions.size(); ++pos) {
        const Instruction& ins = c.instructions[pos];
        auto fail = [&](const std::string& why) {
            throw std::invalid_argument("instruction " + std::to_string(pos) + ": " + why);
        };
        std::unordered_set<int> seen;
        for (int q : ins.qubits) {
            if (q < 0 || q >= c.num_qubits) fail("qubit operand out of range");
            if (!seen.insert(q).second) fail("repeated qubit operand");
        }
        for (int b : ins.cbits) {
            if (b < 0 || b >= c.num_cbits) fail("cbit operand out of range");
        }
        switch (ins.op) {
            case Op::X:
            case Op::H:
            case Op::T:
            case Op::Tdg:
            case Op::RY:
            case Op::RZ:
            case Op::U1Q:
                if (ins.qubits.size() != 1) fail("expected one qubit operand");
                break;
            case Op::CNOT:
                if (ins.qubits.size() != 2) fail("CNOT takes two operands");
                break;
            case Op::CSWAP:
            case Op::TOFFOLI:
                if (ins.qubits.size() != 3) fail("three operands required");
                break;
            case Op::MCX:
            case Op::MCRY:
            case Op::OR_CX:
            case Op::PAR_CX:
                if (ins.num_controls < 1 ||
                    static_cast<size_t>(ins.num_controls) + 1 > ins.qubits.size()) {
                    fail("control count inconsistent with operand list");
                }
                break;
            case Op::FANOUT:
                if (ins.num_targets < 1 ||
                    static_cast<size_t>(ins.num_targets) + 1 > ins.qubits.size()) {
                    fail("target count inconsistent with operand list");
                }
                break;
            case Op::MEASURE:
                if (ins.qubits.size() != 1 || ins.cbits.size() != 1) {
                    fail("MEASURE takes one qubit and one cbit");
                }
                cbit_written[ins.cbits[0]] = true;
                break;
            case Op::COND:
                if (ins.qubits.size() != 1 || ins.cbits.empty()) {
                    fail("COND takes one target and a nonempty condition");
                }
                for (int b : ins.cbits) {
                    if (!cbit_written[b]) fail("condition reads cbit before any measurement writes it");
                }
                break;
            case Op::ROUND_BARRIER:
                if (!ins.qubits.empty() || !ins.cbits.empty()) fail("barrier takes no operands");
                break;
        }
    }
}

inline const char* stage_name(Stage s) {
    switch (s) {
        case Stage::Gqsp: return "gqsp";
        case Stage::Onehot: return "onehot";
        case Stage::Permutation: return "permutation";
        case Stage::Garbage: return "garbage";
        default: return "none";
    }
}

}  // namespace sqsp

#endif  // SQSP_CIRCUIT_HPP
