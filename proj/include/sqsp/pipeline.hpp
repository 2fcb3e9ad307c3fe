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

#ifndef SQSP_PIPELINE_HPP
#define SQSP_PIPELINE_HPP

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqsp/circuit.hpp"
#include "sqsp/gqsp.hpp"
#include "sqsp/state.hpp"
#include "sqsp/synth.hpp"

namespace sqsp {

/// Wire plan: data register A (n wires), one-hot register B (2^ceil(log2 d)),
/// work register C (2d), copy register D (d). Ancilla total is fixed by
/// (n, d) alone.
struct RegisterLayout {
    int n = 0;
    int d = 0;
    int n_prime = 0;  // ceil(log2 d)
    int big_d = 1;    // 2^n_prime
    int total = 0;

    static RegisterLayout make(int n, int d) {
        RegisterLayout lay;
        lay.n = n;
        lay.d = d;
        lay.n_prime = ceil_log2(d);
        lay.big_d = 1 << lay.n_prime;
        lay.total = n + lay.big_d + 3 * d;
        return lay;
    }

    int A(int j) const { return j; }
    int B(int i) const { return n + i; }
    int C(int i) const { return n + big_d + i; }
    int D(int i) const { return n + big_d + 2 * d + i; }

    RegisterMap map() const {
        RegisterMap rm;
        rm.a = {0, n};
        rm.b = {n, big_d};
        rm.c = {n + big_d, 2 * d};
        rm.d = {n + big_d + 2 * d, d};
        return rm;
    }

    Circuit fresh_circuit() const {
        Circuit c(total);
        c.num_data = n;
        c.registers = map();
        return c;
    }
};

enum class OnehotMode { Baseline, Copy, Maf };
enum class PermutationMode { OrCx, ParCxMaf };
enum class GarbageMode { Copy, Maf };
enum class PipelineMode { Unitary, Maf };

/// Binary tree over the target bitstrings. Branch nodes (two children) are
/// indexed 1..d-1 in root-to-leaf, left-to-right order. For each branch:
/// its layer, its nearest branch ancestor, and which side of that ancestor
/// it lies on; for each leaf: the lowest branch on its path and the side
/// taken there.
struct PathBst {
    int num_leaves = 0;
    int num_branches = 0;
    std::vector<int> layer;           // [k-1] for branch k
    std::vector<int> parent;          // PB(k); 0 when k is the first branch
    std::vector<int> parent_side;     // 0 = left subtree of parent, 1 = right
    std::vector<std::string> prefix;  // bitstring prefix naming branch k's node
    std::vector<int> branch_count;    // b(j) per layer j = 0..n-1
    std::vector<int> leaf_lb;         // LB(i); 0 when there is no branch (d = 1)
    std::vector<int> leaf_side;       // side taken at LB(i)
};

inline PathBst build_path_bst(const SparseStateSpec& spec) {
    int d = spec.d();
    int n = spec.num_qubits;
    PathBst bst;
    bst.num_leaves = d;
    bst.num_branches = 0;
    bst.branch_count.assign(n, 0);
    bst.leaf_lb.assign(d, 0);
    bst.leaf_side.assign(d, 0);

    struct Node {
        std::vector<int> leaves;  // sorted by bitstring; prefix order
        int anc_branch = 0;       // nearest branch ancestor (0 = none)
        int anc_side = 0;         // side of that ancestor this node hangs from
    };
    std::vector<int> order(d);
    for (int i = 0; i < d; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return spec.entries[a].bits < spec.entries[b].bits;
    });
    std::vector<Node> level;
    level.push_back({order, 0, 0});

    for (int j = 0; j < n; ++j) {
        std::vector<Node> next;
        for (const Node& node : level) {
            if (node.leaves.size() <= 1) {
                if (node.leaves.size() == 1) {
                    // Path runs straight to the leaf; LB was set at the last split.
                    Node copy = node;
                    next.push_back(std::move(copy));
                }
                continue;
            }
            std::vector<int> left, right;
            for (int leaf : node.leaves) {
                (spec.entries[leaf].bits[j] == '0' ? left : right).push_back(leaf);
            }
            if (!left.empty() && !right.empty()) {
                int k = ++bst.num_branches;
                bst.layer.push_back(j);
                bst.parent.push_back(node.anc_branch);
                bst.parent_side.push_back(node.anc_side);
                bst.prefix.push_back(spec.entries[node.leaves[0]].bits.substr(0, j));
                bst.branch_count[j] += 1;
                for (int leaf : left) {
                    bst.leaf_lb[leaf] = k;
                    bst.leaf_side[leaf] = 0;
                }
                for (int leaf : right) {
                    bst.leaf_lb[leaf] = k;
                    bst.leaf_side[leaf] = 1;
                }
                next.push_back({std::move(left), k, 0});
                next.push_back({std::move(right), k, 1});
            } else if (!left.empty()) {
                next.push_back({std::move(left), node.anc_branch, node.anc_side});
            } else {
                next.push_back({std::move(right), node.anc_branch, node.anc_side});
            }
        }
        level = std::move(next);
    }
    return bst;
}

/// Stage 2: X on B(0), then per control qubit j a rank of CSWAPs that walks
/// the 1 to position i. Baseline controls them on A(j) directly; Copy
/// spreads A(j) through C with a CNOT doubling tree; Maf uses the
/// measurement-assisted fan-out for the copy and the reversed tree to clean
/// up.
inline void emit_onehot(Circuit& c, const RegisterLayout& lay, OnehotMode mode,
                        Stage stage = Stage::Onehot) {
    c.x(lay.B(0), stage);
    int np = lay.n_prime;
    for (int j = 0; j < np; ++j) {
        int copies = 1 << j;
        int stride = 1 << (np - j - 1);
        std::vector<int> targets(copies);
        for (int i = 0; i < copies; ++i) targets[i] = lay.C(i);
        if (mode == OnehotMode::Copy) {
            synth_fanout(c, lay.A(j), targets, FanoutMode::Tree, {}, stage);
        } else if (mode == OnehotMode::Maf) {
            std::vector<int> pool(copies);
            for (int i = 0; i < copies; ++i) pool[i] = lay.C(copies + i);
            Instruction ins;
            ins.op = Op::FANOUT;
            ins.mode = FanoutMode::Maf;
            ins.qubits = {lay.A(j)};
            ins.qubits.insert(ins.qubits.end(), targets.begin(), targets.end());
            ins.qubits.insert(ins.qubits.end(), pool.begin(), pool.end());
            ins.num_targets = copies;
            ins.stage = stage;
            c.push(std::move(ins));
        }
        for (int i = 0; i < copies; ++i) {
            int base = i * 2 * stride;
            int ctrl = mode == OnehotMode::Baseline ? lay.A(j) : lay.C(i);
            c.cswap(ctrl, lay.B(base), lay.B(base + stride), stage);
        }
        if (mode != OnehotMode::Baseline) emit_tree_uncopy(c, lay.A(j), targets, stage);
    }
}

inline int padded_index_bit(int i, int j, int n_prime) {
    if (j >= n_prime) return 0;
    return (i >> (n_prime - 1 - j)) & 1;
}

/// Stage 3: per data qubit j, flip A(j) controlled on the one-hot wires of
/// the entries whose bit j disagrees with the padded binary index. Columns
/// with no disagreement emit nothing.
inline void emit_permutation(Circuit& c, const RegisterLayout& lay, const SparseStateSpec& spec,
                             PermutationMode mode, Stage stage = Stage::Permutation) {
    int d = lay.d;
    for (int j = 0; j < lay.n; ++j) {
        std::vector<int> cq;
        for (int i = 0; i < d; ++i) {
            int want = spec.entries[i].bits[j] == '1' ? 1 : 0;
            if (padded_index_bit(i, j, lay.n_prime) != want) cq.push_back(i);
        }
        if (cq.empty()) continue;
        int k = static_cast<int>(cq.size());
        Instruction ins;
        ins.num_controls = k;
        ins.stage = stage;
        for (int i : cq) ins.qubits.push_back(lay.B(i));
        ins.qubits.push_back(lay.A(j));
        if (mode == PermutationMode::OrCx) {
            ins.op = Op::OR_CX;
            for (int p = 0; p < std::max(0, k - 2); ++p) ins.qubits.push_back(lay.C(p));
        } else {
            ins.op = Op::PAR_CX;
            ins.mode = FanoutMode::Maf;
            for (int p = 0; p < 2 * k; ++p) ins.qubits.push_back(lay.C(p));
        }
        c.push(std::move(ins));
    }
}

namespace detail {

inline void emit_branch_copy(Circuit& c, const RegisterLayout& lay, int j, int b,
                             GarbageMode mode, Stage stage) {
    std::vector<int> targets(b);
    for (int i = 0; i < b; ++i) targets[i] = lay.D(i);
    if (mode == GarbageMode::Copy || b == 1) {
        synth_fanout(c, lay.A(j), targets, FanoutMode::Tree, {}, stage);
    } else {
        std::vector<int> pool(b);
        for (int i = 0; i < b; ++i) pool[i] = lay.D(b + i);
        Instruction ins;
        ins.op = Op::FANOUT;
        ins.mode = FanoutMode::Maf;
        ins.qubits = {lay.A(j)};
        ins.qubits.insert(ins.qubits.end(), targets.begin(), targets.end());
        ins.qubits.insert(ins.qubits.end(), pool.begin(), pool.end());
        ins.num_targets = b;
        ins.stage = stage;
        c.push(std::move(ins));
    }
}

inline void emit_branch_uncopy(Circuit& c, const RegisterLayout& lay, int j, int b, Stage stage) {
    std::vector<int> targets(b);
    for (int i = 0; i < b; ++i) targets[i] = lay.D(i);
    emit_tree_uncopy(c, lay.A(j), targets, stage);
}

/// One layer of branch recording (forward) or its exact inverse.
inline void emit_record_layer(Circuit& c, const RegisterLayout& lay, const PathBst& bst,
                              int j, int k_base, GarbageMode mode, bool inverse, Stage stage) {
    int b = bst.branch_count[j];
    if (b == 0) return;
    bool first = k_base == 0;
    if (first) {
        // The shallowest split is unique, so this layer holds exactly one branch.
        if (!inverse) {
            c.x(lay.C(0), stage);
            c.cswap(lay.A(j), lay.C(0), lay.C(1), stage);
        } else {
            c.cswap(lay.A(j), lay.C(0), lay.C(1), stage);
            c.x(lay.C(0), stage);
        }
        return;
    }
    auto parent_links = [&](bool reversed) {
        for (int step = 0; step < b; ++step) {
            int i = reversed ? b - step : step + 1;  // 1-based within layer
            int k = k_base + i;
            int pb = bst.parent[k - 1];
            int src = lay.C(2 * pb - 2 + bst.parent_side[k - 1]);
            c.cnot(src, lay.C(2 * (k - 1)), stage);
        }
    };
    auto swaps = [&](bool reversed) {
        for (int step = 0; step < b; ++step) {
            int i = reversed ? b - step : step + 1;
            int k = k_base + i;
            c.cswap(lay.D(i - 1), lay.C(2 * (k - 1)), lay.C(2 * k - 1), stage);
        }
    };
    if (!inverse) {
        parent_links(false);
        emit_branch_copy(c, lay, j, b, mode, stage);
        swaps(false);
        emit_branch_uncopy(c, lay, j, b, stage);
    } else {
        emit_branch_copy(c, lay, j, b, mode, stage);
        swaps(true);
        emit_branch_uncopy(c, lay, j, b, stage);
        parent_links(true);
    }
}

}  // namespace detail

/// Substep 4.1 (or its exact inverse, 4.3): record every branch of the path
/// tree into its C pair, layer by layer.
inline void emit_bst_recording(Circuit& c, const RegisterLayout& lay, const PathBst& bst,
                               GarbageMode mode, bool inverse, Stage stage = Stage::Garbage) {
    std::vector<int> k_base(lay.n, 0);
    for (int j = 0, acc = 0; j < lay.n; ++j) {
        k_base[j] = acc;
        acc += bst.branch_count[j];
    }
    if (!inverse) {
        for (int j = 0; j < lay.n; ++j) {
            detail::emit_record_layer(c, lay, bst, j, k_base[j], mode, false, stage);
        }
    } else {
        for (int j = lay.n - 1; j >= 0; --j) {
            detail::emit_record_layer(c, lay, bst, j, k_base[j], mode, true, stage);
        }
    }
}

/// Stage 4: record the branch tree into C pairs (4.1), clear the one-hot
/// register with one CNOT per entry off the lowest branch pair (4.2), then
/// run 4.1 backwards to reset C (4.3). d = 1 has nothing recorded and clears
/// B with a single X.
inline void emit_garbage_elim(Circuit& c, const RegisterLayout& lay, const PathBst& bst,
                              GarbageMode mode, Stage stage = Stage::Garbage) {
    if (lay.d == 1) {
        c.x(lay.B(0), stage);
        return;
    }
    emit_bst_recording(c, lay, bst, mode, false, stage);
    for (int i = 0; i < lay.d; ++i) {
        int k = bst.leaf_lb[i];
        c.cnot(lay.C(2 * k - 2 + bst.leaf_side[i]), lay.B(i), stage);
    }
    emit_bst_recording(c, lay, bst, mode, true, stage);
}

/// The full compiler: amplitude preparation on ceil(log2 d) wires, one-hot
/// encoding, permutation, garbage elimination. d = 1 degenerates to plain X
/// gates. The result still contains composite gates; lower() it before
/// metrics or simulation.
inline Circuit compile_sqsp(const SparseStateSpec& spec, PipelineMode mode) {
    int d = spec.d();
    RegisterLayout lay = RegisterLayout::make(spec.num_qubits, d);
    Circuit c = lay.fresh_circuit();
    if (d == 1) {
        for (int j = 0; j < lay.n; ++j) {
            if (spec.entries[0].bits[j] == '1') c.x(lay.A(j), Stage::Permutation);
        }
        return c;
    }
    bool maf = mode == PipelineMode::Maf;

    std::vector<cplx> amps(d);
    for (int i = 0; i < d; ++i) amps[i] = spec.entries[i].amplitude;
    AmplitudeBst abst = build_amplitude_bst(amps);
    std::vector<int> gqsp_wires(lay.n_prime);
    for (int i = 0; i < lay.n_prime; ++i) gqsp_wires[i] = lay.A(i);
    std::vector<int> gqsp_pool(std::max(0, lay.n_prime - 2));
    for (size_t i = 0; i < gqsp_pool.size(); ++i) gqsp_pool[i] = lay.C(static_cast<int>(i));
    emit_grover_rudolph(c, abst, gqsp_wires, gqsp_pool, Stage::Gqsp);
    if (maf) c.round_barrier(Stage::Gqsp);

    emit_onehot(c, lay, maf ? OnehotMode::Maf : OnehotMode::Copy);
    if (maf) c.round_barrier(Stage::Onehot);

    emit_permutation(c, lay, spec, maf ? PermutationMode::ParCxMaf : PermutationMode::OrCx);
    if (maf) c.round_barrier(Stage::Permutation);

    PathBst pbst = build_path_bst(spec);
    emit_garbage_elim(c, lay, pbst, maf ? GarbageMode::Maf : GarbageMode::Copy);
    return c;
}

}  // namespace sqsp

#endif  // SQSP_PIPELINE_HPP
