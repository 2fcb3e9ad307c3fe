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

#ifndef SQSP_LOWER_HPP
#define SQSP_LOWER_HPP

#include <stdexcept>
#include <vector>

#include "sqsp/circuit.hpp"
#include "sqsp/synth.hpp"

namespace sqsp {

/// Rewrites composite gates into {single-qubit, CNOT, MEASURE, COND, round}
/// form. Classical bits for measurement-assisted blocks are allocated here,
/// appended after any bits the input already declares. Stage tags carry over.
inline Circuit lower(const Circuit& in) {
    Circuit out(in.num_qubits, in.num_cbits);
    out.num_data = in.num_data;
    out.registers = in.registers;
    out.instructions.reserve(in.instructions.size());

    for (const auto& ins : in.instructions) {
        if (op_is_native(ins.op)) {
            out.push(ins);
            continue;
        }
        Stage st = ins.stage;
        const std::vector<int>& q = ins.qubits;
        switch (ins.op) {
            case Op::TOFFOLI:
                synth_toffoli(out, q[0], q[1], q[2], st);
                break;
            case Op::CSWAP:
                out.cnot(q[2], q[1], st);
                synth_toffoli(out, q[0], q[1], q[2], st);
                out.cnot(q[2], q[1], st);
                break;
            case Op::MCX: {
                size_t k = static_cast<size_t>(ins.num_controls);
                std::vector<int> controls(q.begin(), q.begin() + k);
                std::vector<int> pool(q.begin() + k + 1, q.end());
                synth_mcx(out, controls, q[k], pool, st);
                break;
            }
            case Op::MCRY: {
                size_t k = static_cast<size_t>(ins.num_controls);
                std::vector<int> controls(q.begin(), q.begin() + k);
                std::vector<int> pool(q.begin() + k + 1, q.end());
                synth_mcry(out, ins.theta, controls, q[k], pool, st);
                break;
            }
            case Op::OR_CX: {
                size_t k = static_cast<size_t>(ins.num_controls);
                std::vector<int> controls(q.begin(), q.begin() + k);
                std::vector<int> pool(q.begin() + k + 1, q.end());
                synth_or_cx(out, controls, q[k], pool, st);
                break;
            }
            case Op::PAR_CX: {
                size_t k = static_cast<size_t>(ins.num_controls);
                std::vector<int> controls(q.begin(), q.begin() + k);
                std::vector<int> pool(q.begin() + k + 1, q.end());
                synth_parity_cx(out, controls, q[k], ins.mode, pool, st);
                break;
            }
            case Op::FANOUT: {
                size_t m = static_cast<size_t>(ins.num_targets);
                std::vector<int> targets(q.begin() + 1, q.begin() + 1 + m);
                std::vector<int> pool(q.begin() + 1 + m, q.end());
                synth_fanout(out, q[0], targets, ins.mode, pool, st);
                break;
            }
            default:
                throw std::invalid_argument("lower: unhandled composite kind");
        }
    }
    return out;
}

}  // namespace sqsp

#endif  // SQSP_LOWER_HPP
