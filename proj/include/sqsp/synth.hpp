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

#ifndef SQSP_SYNTH_HPP
#define SQSP_SYNTH_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqsp/circuit.hpp"

namespace sqsp {

/// Controlled-RY as RY(t/2), CNOT, RY(-t/2), CNOT.
inline void synth_cry(Circuit& c, double theta, int control, int target,
                      Stage stage = Stage::None) {
    c.ry(theta / 2, target, stage);
    c.cnot(control, target, stage);
    c.ry(-theta / 2, target, stage);
    c.cnot(control, target, stage);
}

/// The 15-gate H/T/CNOT Toffoli; ASAP depth 11.
inline void synth_toffoli(Circuit& c, int a, int b, int t, Stage stage = Stage::None) {
    c.h(t, stage);
    c.cnot(b, t, stage);
    c.tdg(t, stage);
    c.cnot(a, t, stage);
    c.t(t, stage);
    c.cnot(b, t, stage);
    c.tdg(t, stage);
    c.t(b, stage);
    c.cnot(a, t, stage);
    c.t(t, stage);
    c.cnot(a, b, stage);
    c.t(a, stage);
    c.tdg(b, stage);
    c.h(t, stage);
    c.cnot(a, b, stage);
}

/// CSWAP via CNOT, Toffoli, CNOT (Toffoli left composite for the lowering
/// pass to expand).
inline void synth_cswap(Circuit& c, int control, int t1, int t2, Stage stage = Stage::None) {
    c.cnot(t2, t1, stage);
    synth_toffoli(c, control, t1, t2, stage);
    c.cnot(t2, t1, stage);
}

/// RY-based AND node: acts as I, I, Z, X on the target for control patterns
/// 00, 01, 10, 11. Exact Toffoli on a target known to be |0>, self-inverse,
/// and depth 7 instead of 11, which is what keeps the AND-tree inside the
/// multi-controlled depth budget.
inline void synth_and_node(Circuit& c, int a, int b, int t, Stage stage = Stage::None) {
    const double q = M_PI / 4;
    c.ry(q, t, stage);
    c.cnot(b, t, stage);
    c.ry(q, t, stage);
    c.cnot(a, t, stage);
    c.ry(-q, t, stage);
    c.cnot(b, t, stage);
    c.ry(-q, t, stage);
}

/// Multi-controlled X. k=1 is a CNOT, k=2 the 15-gate Toffoli; k>=3 builds a
/// balanced AND-tree of partial products in the pool (k-2 wires), applies one
/// Toffoli at the root, then uncomputes. Pool wires are returned to |0>.
inline void synth_mcx(Circuit& c, const std::vector<int>& controls, int target,
                      const std::vector<int>& pool, Stage stage = Stage::None) {
    size_t k = controls.size();
    if (k == 0) throw std::invalid_argument("synth_mcx: at least one control required");
    if (k == 1) {
        c.cnot(controls[0], target, stage);
        return;
    }
    if (k == 2) {
        synth_toffoli(c, controls[0], controls[1], target, stage);
        return;
    }
    if (pool.size() + 2 < k) {
        throw std::invalid_argument("synth_mcx: pool of " + std::to_string(pool.size()) +
                                    " wires is insufficient for " + std::to_string(k) + " controls");
    }
    struct Node { int a, b, t; };
    std::vector<Node> nodes;
    std::vector<int> work = controls;
    size_t next_pool = 0;
    while (work.size() > 2) {
        std::vector<int> reduced;
        for (size_t i = 0; i + 1 < work.size(); i += 2) {
            int slot = pool[next_pool++];
            nodes.push_back({work[i], work[i + 1], slot});
            reduced.push_back(slot);
        }
        if (work.size() % 2 == 1) reduced.push_back(work.back());
        work = std::move(reduced);
    }
    for (const Node& nd : nodes) synth_and_node(c, nd.a, nd.b, nd.t, stage);
    synth_toffoli(c, work[0], work[1], target, stage);
    for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
        synth_and_node(c, it->a, it->b, it->t, stage);  // self-inverse
    }
}

/// Multi-controlled RY: RY(t/2), MCX, RY(-t/2), MCX. Zero controls degrade to
/// a bare rotation.
inline void synth_mcry(Circuit& c, double theta, const std::vector<int>& controls, int target,
                       const std::vector<int>& pool, Stage stage = Stage::None) {
    if (controls.empty()) {
        c.ry(theta, target, stage);
        return;
    }
    c.ry(theta / 2, target, stage);
    synth_mcx(c, controls, target, pool, stage);
    c.ry(-theta / 2, target, stage);
    synth_mcx(c, controls, target, pool, stage);
}

/// OR-controlled X: X-conjugate the controls, MCX, unconjugate, X the target.
inline void synth_or_cx(Circuit& c, const std::vector<int>& controls, int target,
                        const std::vector<int>& pool, Stage stage = Stage::None) {
    if (controls.empty()) throw std::invalid_argument("synth_or_cx: at least one control required");
    for (int q : controls) c.x(q, stage);
    synth_mcx(c, controls, target, pool, stage);
    for (int q : controls) c.x(q, stage);
    c.x(target, stage);
}

namespace detail {

/// Measurement-assisted fan-out using 2m ancillas (m pads + m helpers), with
/// layer count independent of m:
///   H pads | pads copy onto targets | sew chain into helpers (2 layers) |
///   H pads | measure | conditioned corrections.
/// Helper j reads z_j, pad j reads s_j. Prefix parities z_0^..^z_j drive X
/// corrections on the targets; the total pad parity drives a Z on the
/// control. Measured ancillas are flipped back to |0> so the pool can be
/// reused in later rounds.
inline void fanout_maf_wide(Circuit& c, int control, const std::vector<int>& targets,
                            const std::vector<int>& pool, Stage stage) {
    int m = static_cast<int>(targets.size());
    std::vector<int> pads(pool.begin(), pool.begin() + m);
    std::vector<int> helpers(pool.begin() + m, pool.begin() + 2 * m);

    for (int p : pads) c.h(p, stage);
    for (int j = 0; j < m; ++j) c.cnot(pads[j], targets[j], stage);
    c.cnot(control, helpers[0], stage);
    for (int j = 0; j + 1 < m; ++j) c.cnot(pads[j], helpers[j + 1], stage);
    for (int j = 0; j < m; ++j) c.cnot(pads[j], helpers[j], stage);
    for (int p : pads) c.h(p, stage);

    std::vector<int> z(m), s(m);
    for (int j = 0; j < m; ++j) {
        z[j] = c.alloc_cbit();
        c.measure(helpers[j], z[j], stage);
    }
    for (int j = 0; j < m; ++j) {
        s[j] = c.alloc_cbit();
        c.measure(pads[j], s[j], stage);
    }
    c.round_barrier(stage);

    std::vector<int> prefix;
    for (int j = 0; j < m; ++j) {
        prefix.push_back(z[j]);
        c.cond(CondGate::X, prefix, targets[j], false, stage);
    }
    c.cond(CondGate::Z, s, control, false, stage);
    for (int j = 0; j < m; ++j) c.cond(CondGate::X, {z[j]}, helpers[j], false, stage);
    for (int j = 0; j < m; ++j) c.cond(CondGate::X, {s[j]}, pads[j], false, stage);
}

/// Measurement-assisted fan-out with exactly m ancillas: floor(m/2) cat legs
/// each serving two targets (X-measured), one parity helper per leg fusing it
/// with the control (Z-measured), and for odd m a solo pad serving the last
/// target directly. Layer count is 6 for 2 <= m <= 8 and grows with the
/// control's fan-in beyond that.
inline void fanout_maf_frugal(Circuit& c, int control, const std::vector<int>& targets,
                              const std::vector<int>& pool, Stage stage) {
    int m = static_cast<int>(targets.size());
    int legs = m / 2;
    bool odd = m % 2 != 0;
    std::vector<int> leg(pool.begin(), pool.begin() + legs);
    std::vector<int> helper(pool.begin() + legs, pool.begin() + 2 * legs);
    int solo = odd ? pool[2 * legs] : -1;

    for (int l : leg) c.h(l, stage);
    if (odd) c.h(solo, stage);
    // The control's copies serialize on its wire, so leg donations are
    // staggered around them: legs 0 and 1 donate late, later legs donate
    // first. Every leg then fits in six wire events.
    c.cnot(control, helper[0], stage);
    c.cnot(leg[0], targets[0], stage);
    if (legs > 1) c.cnot(leg[1], targets[2], stage);
    for (int j = 2; j < legs; ++j) c.cnot(leg[j], helper[j], stage);
    if (odd) c.cnot(solo, targets[m - 1], stage);
    if (legs > 1) c.cnot(control, helper[1], stage);
    c.cnot(leg[0], helper[0], stage);
    if (legs > 1) c.cnot(leg[1], targets[3], stage);
    for (int j = 2; j < legs; ++j) c.cnot(leg[j], targets[2 * j], stage);
    for (int j = 2; j < legs; ++j) c.cnot(control, helper[j], stage);
    c.cnot(leg[0], targets[1], stage);
    if (legs > 1) c.cnot(leg[1], helper[1], stage);
    for (int j = 2; j < legs; ++j) c.cnot(leg[j], targets[2 * j + 1], stage);
    if (odd) c.cnot(control, solo, stage);
    for (int l : leg) c.h(l, stage);

    std::vector<int> z(legs), s(legs);
    int w = -1;
    for (int j = 0; j < legs; ++j) {
        z[j] = c.alloc_cbit();
        c.measure(helper[j], z[j], stage);
    }
    if (odd) {
        w = c.alloc_cbit();
        c.measure(solo, w, stage);
    }
    for (int j = 0; j < legs; ++j) {
        s[j] = c.alloc_cbit();
        c.measure(leg[j], s[j], stage);
    }
    c.round_barrier(stage);

    for (int j = 0; j < legs; ++j) {
        c.cond(CondGate::X, {z[j]}, targets[2 * j], false, stage);
        c.cond(CondGate::X, {z[j]}, targets[2 * j + 1], false, stage);
    }
    if (odd) c.cond(CondGate::X, {w}, targets[m - 1], false, stage);
    if (legs > 0) c.cond(CondGate::Z, s, control, false, stage);
    for (int j = 0; j < legs; ++j) c.cond(CondGate::X, {z[j]}, helper[j], false, stage);
    if (odd) c.cond(CondGate::X, {w}, solo, false, stage);
    for (int j = 0; j < legs; ++j) c.cond(CondGate::X, {s[j]}, leg[j], false, stage);
}

}  // namespace detail

/// Fan-out from one control onto m targets.
///   Sequential: m CNOTs sharing the control.
///   Tree:       CNOT doubling; targets must be fresh |0> wires.
///   Maf:        one measurement round; with pool >= 2m the wide block
///               (m-independent layer count) is used, otherwise the frugal
///               block with exactly m pool wires. m = 1 is a plain CNOT.
inline void synth_fanout(Circuit& c, int control, const std::vector<int>& targets,
                         FanoutMode mode, const std::vector<int>& pool,
                         Stage stage = Stage::None) {
    int m = static_cast<int>(targets.size());
    if (m < 1) throw std::invalid_argument("synth_fanout: at least one target required");
    switch (mode) {
        case FanoutMode::Sequential:
            for (int t : targets) c.cnot(control, t, stage);
            return;
        case FanoutMode::Tree: {
            c.cnot(control, targets[0], stage);
            for (int span = 1; span < m; span <<= 1) {
                for (int l = 0; l < span && l + span < m; ++l) {
                    c.cnot(targets[l], targets[l + span], stage);
                }
            }
            return;
        }
        case FanoutMode::Maf: {
            if (m == 1) {
                c.cnot(control, targets[0], stage);
                return;
            }
            if (static_cast<int>(pool.size()) >= 2 * m) {
                detail::fanout_maf_wide(c, control, targets, pool, stage);
            } else if (static_cast<int>(pool.size()) >= m) {
                detail::fanout_maf_frugal(c, control, targets, pool, stage);
            } else {
                throw std::invalid_argument("synth_fanout: MAF mode needs a pool of at least " +
                                            std::to_string(m) + " wires, got " +
                                            std::to_string(pool.size()));
            }
            return;
        }
    }
}

/// Emits the CNOT list that undoes a Tree fan-out (the doubling reversed).
/// Only valid when the targets hold exact copies of the control.
inline void emit_tree_uncopy(Circuit& c, int control, const std::vector<int>& targets,
                             Stage stage = Stage::None) {
    int m = static_cast<int>(targets.size());
    int top = 1;
    while (top < m) top <<= 1;
    for (int span = top >> 1; span >= 1; span >>= 1) {
        for (int l = std::min(span, m - span) - 1; l >= 0; --l) {
            c.cnot(targets[l], targets[l + span], stage);
        }
    }
    c.cnot(control, targets[0], stage);
}

/// Parity-controlled X: flips the target iff the XOR of the controls is 1.
/// Unitary modes use a CNOT chain; Maf conjugates a fan-out from the target
/// onto the controls with Hadamards on every involved wire.
inline void synth_parity_cx(Circuit& c, const std::vector<int>& controls, int target,
                            FanoutMode mode, const std::vector<int>& pool,
                            Stage stage = Stage::None) {
    if (controls.empty()) throw std::invalid_argument("synth_parity_cx: at least one control required");
    if (mode != FanoutMode::Maf) {
        for (int q : controls) c.cnot(q, target, stage);
        return;
    }
    if (controls.size() == 1) {
        c.cnot(controls[0], target, stage);
        return;
    }
    c.h(target, stage);
    for (int q : controls) c.h(q, stage);
    synth_fanout(c, target, controls, FanoutMode::Maf, pool, stage);
    for (int q : controls) c.h(q, stage);
    c.h(target, stage);
}

}  // namespace sqsp

#endif  // SQSP_SYNTH_HPP
