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

#ifndef SQSP_METRICS_HPP
#define SQSP_METRICS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqsp/circuit.hpp"

namespace sqsp {

struct StageMetrics {
    long long size = 0;
    int quantum_depth = 0;
    int classical_depth_bound = 0;
    int ancilla = 0;
    int maf_rounds = 0;
};

struct Metrics {
    long long size = 0;           // native unitary gate count
    int quantum_depth = 0;        // ASAP layers over gates and measurements
    int classical_depth_bound = 0;  // max XOR-tree depth over conditions
    int ancilla = 0;              // wires beyond the data register
    int maf_rounds = 0;           // ROUND_BARRIER count
    std::map<std::string, StageMetrics> per_stage;
};

inline int xor_tree_depth(size_t fan_in) {
    int depth = 0;
    size_t width = 1;
    while (width < fan_in) {
        width <<= 1;
        ++depth;
    }
    return depth;
}

namespace detail {

/// ASAP scheduler over one instruction sequence. Each instruction occupies one
/// layer on all its qubit operands. MEASURE occupies its qubit and counts
/// toward depth; COND occupies its target strictly after the current round's
/// measurements but is accounted on the classical side; ROUND_BARRIER
/// synchronizes every wire without occupying a layer.
struct AsapState {
    std::vector<int> wire_layer;
    int depth = 0;              // max layer over gates and measurements
    int round_meas_layer = 0;   // latest measurement layer since the last barrier
    int max_cond_fanin = 0;

    explicit AsapState(int num_qubits) : wire_layer(num_qubits, 0) {}

    void schedule(const Instruction& ins) {
        switch (ins.op) {
            case Op::ROUND_BARRIER: {
                int top = 0;
                for (int l : wire_layer) top = std::max(top, l);
                for (int& l : wire_layer) l = top;
                round_meas_layer = 0;
                return;
            }
            case Op::COND: {
                int layer = std::max(wire_layer[ins.qubits[0]], round_meas_layer) + 1;
                wire_layer[ins.qubits[0]] = layer;
                max_cond_fanin = std::max(max_cond_fanin, static_cast<int>(ins.cbits.size()));
                return;
            }
            default: {
                int layer = 0;
                for (int q : ins.qubits) layer = std::max(layer, wire_layer[q]);
                ++layer;
                for (int q : ins.qubits) wire_layer[q] = layer;
                depth = std::max(depth, layer);
                if (ins.op == Op::MEASURE) round_meas_layer = std::max(round_meas_layer, layer);
                return;
            }
        }
    }
};

}  // namespace detail

/// Computes size/depth/round metrics of a native circuit. Per-stage depth is
/// the ASAP depth of the stage's instructions scheduled in isolation.
inline Metrics metrics(const Circuit& c) {
    if (!c.is_native()) {
        throw std::invalid_argument("metrics: circuit contains composite gates; lower it first");
    }
    Metrics m;
    m.ancilla = c.num_qubits - c.num_data;

    detail::AsapState total(c.num_qubits);
    std::map<Stage, detail::AsapState> stage_asap;
    std::map<Stage, StageMetrics> stage_acc;

    for (const auto& ins : c.instructions) {
        total.schedule(ins);
        if (ins.op == Op::ROUND_BARRIER) m.maf_rounds += 1;
        if (op_is_unitary_gate(ins.op)) m.size += 1;

        if (ins.stage != Stage::None) {
            auto it = stage_asap.find(ins.stage);
            if (it == stage_asap.end()) {
                it = stage_asap.emplace(ins.stage, detail::AsapState(c.num_qubits)).first;
            }
            it->second.schedule(ins);
            StageMetrics& sm = stage_acc[ins.stage];
            if (ins.op == Op::ROUND_BARRIER) sm.maf_rounds += 1;
            if (op_is_unitary_gate(ins.op)) sm.size += 1;
        }
    }
    m.quantum_depth = total.depth;
    m.classical_depth_bound = xor_tree_depth(total.max_cond_fanin);

    for (auto& [stage, acc] : stage_acc) {
        const detail::AsapState& a = stage_asap.at(stage);
        acc.quantum_depth = a.depth;
        acc.classical_depth_bound = xor_tree_depth(a.max_cond_fanin);
        acc.ancilla = m.ancilla;
        m.per_stage[stage_name(stage)] = acc;
    }
    return m;
}

}  // namespace sqsp

#endif  // SQSP_METRICS_HPP
