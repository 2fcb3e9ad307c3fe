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

#ifndef SQSP_GQSP_HPP
#define SQSP_GQSP_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "sqsp/circuit.hpp"
#include "sqsp/state.hpp"

namespace sqsp {

inline int ceil_log2(int v) {
    int bits = 0;
    while ((1 << bits) < v) ++bits;
    return bits;
}

/// Binary tree over the target amplitudes. Node (i, k) covers leaves
/// k*2^(h-i) .. (k+1)*2^(h-i)-1 and stores the magnitude of that subtree,
/// the RY angle splitting it, and a phase-difference angle; `omega` is the
/// running mean phase used to derive the latter. Rotations with
/// sub-threshold parent magnitude are zeroed, since such branches carry no
/// probability mass.
struct AmplitudeBst {
    int height = 0;                          // ceil(log2 d)
    std::vector<std::vector<double>> x;      // x[i], i = 0..height, size 2^i
    std::vector<std::vector<double>> theta;  // theta[i], i = 0..height-1
    std::vector<std::vector<double>> phase;  // RZ angle per internal node
    std::vector<std::vector<double>> omega;  // mean leaf phase per node
};

constexpr double kZeroBranch = 1e-14;

inline AmplitudeBst build_amplitude_bst(const std::vector<cplx>& amplitudes) {
    int d = static_cast<int>(amplitudes.size());
    if (d < 1) throw std::invalid_argument("build_amplitude_bst: empty amplitude list");
    AmplitudeBst bst;
    bst.height = ceil_log2(d);
    int h = bst.height;
    bst.x.assign(h + 1, {});
    bst.omega.assign(h + 1, {});
    bst.theta.assign(h, {});
    bst.phase.assign(h, {});

    int leaves = 1 << h;
    bst.x[h].assign(leaves, 0.0);
    bst.omega[h].assign(leaves, 0.0);
    for (int k = 0; k < d; ++k) {
        bst.x[h][k] = std::abs(amplitudes[k]);
        bst.omega[h][k] = bst.x[h][k] > kZeroBranch ? std::arg(amplitudes[k]) : 0.0;
    }
    for (int i = h - 1; i >= 0; --i) {
        int width = 1 << i;
        bst.x[i].assign(width, 0.0);
        bst.omega[i].assign(width, 0.0);
        bst.theta[i].assign(width, 0.0);
        bst.phase[i].assign(width, 0.0);
        for (int k = 0; k < width; ++k) {
            double left = bst.x[i + 1][2 * k];
            double right = bst.x[i + 1][2 * k + 1];
            bst.x[i][k] = std::sqrt(left * left + right * right);
            bst.omega[i][k] = 0.5 * (bst.omega[i + 1][2 * k] + bst.omega[i + 1][2 * k + 1]);
            if (bst.x[i][k] < kZeroBranch) continue;  // angles stay 0
            double ratio = std::clamp(left / bst.x[i][k], -1.0, 1.0);
            bst.theta[i][k] = 2.0 * std::acos(ratio);
            bst.phase[i][k] = bst.omega[i + 1][2 * k + 1] - bst.omega[i + 1][2 * k];
        }
    }
    return bst;
}

/// Emits the rotation cascade preparing sum_k alpha_k |k> on
/// wires[0..height-1], up to a global phase. Layer i places one
/// multi-controlled RY (and, for complex inputs, a controlled-RZ pair built
/// from two MCX blocks) per surviving node, with X conjugation selecting the
/// control pattern. Deterministic layer-major, index-minor order. A
/// nonnegative `max_layers` truncates emission to the first layers, which
/// leaves the register in the corresponding intermediate state.
inline void emit_grover_rudolph(Circuit& c, const AmplitudeBst& bst,
                                const std::vector<int>& wires, const std::vector<int>& pool,
                                Stage stage = Stage::None, int max_layers = -1) {
    int h = bst.height;
    if (max_layers >= 0) h = std::min(h, max_layers);
    if (static_cast<int>(wires.size()) < h) {
        throw std::invalid_argument("emit_grover_rudolph: too few wires for tree height");
    }
    for (int i = 0; i < h; ++i) {
        for (int k = 0; k < (1 << i); ++k) {
            if (bst.x[i][k] < kZeroBranch) continue;
            double theta = bst.theta[i][k];
            double phase = bst.phase[i][k];
            bool want_ry = theta != 0.0;
            bool want_rz = std::abs(phase) > 1e-15;
            if (!want_ry && !want_rz) continue;
            int target = wires[i];

            std::vector<int> zero_bits;
            for (int j = 0; j < i; ++j) {
                if (((k >> (i - 1 - j)) & 1) == 0) zero_bits.push_back(wires[j]);
            }
            for (int q : zero_bits) c.x(q, stage);

            if (i == 0) {
                if (want_ry) c.ry(theta, target, stage);
                if (want_rz) c.rz(phase, target, stage);
            } else {
                std::vector<int> controls(wires.begin(), wires.begin() + i);
                int need = std::max(0, i - 2);
                if (static_cast<int>(pool.size()) < need) {
                    throw std::invalid_argument("emit_grover_rudolph: pool too small");
                }
                std::vector<int> mcx_pool(pool.begin(), pool.begin() + need);
                auto mcx = [&]() {
                    Instruction ins;
                    ins.op = Op::MCX;
                    ins.qubits = controls;
                    ins.qubits.push_back(target);
                    ins.qubits.insert(ins.qubits.end(), mcx_pool.begin(), mcx_pool.end());
                    ins.num_controls = i;
                    ins.stage = stage;
                    c.push(std::move(ins));
                };
                if (want_ry) {
                    Instruction ins;
                    ins.op = Op::MCRY;
                    ins.theta = theta;
                    ins.qubits = controls;
                    ins.qubits.push_back(target);
                    ins.qubits.insert(ins.qubits.end(), mcx_pool.begin(), mcx_pool.end());
                    ins.num_controls = i;
                    ins.stage = stage;
                    c.push(std::move(ins));
                }
                if (want_rz) {
                    c.rz(phase / 2, target, stage);
                    mcx();
                    c.rz(-phase / 2, target, stage);
                    mcx();
                }
            }
            for (int q : zero_bits) c.x(q, stage);
        }
    }
}

}  // namespace sqsp

#endif  // SQSP_GQSP_HPP
