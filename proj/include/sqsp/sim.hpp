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

#ifndef SQSP_SIM_HPP
#define SQSP_SIM_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sqsp/circuit.hpp"
#include "sqsp/metrics.hpp"
#include "sqsp/state.hpp"

namespace sqsp {

/// Fixed, reproducible generator (SplitMix64). The measurement sampler draws
/// one uniform double per measurement; identical seeds give bit-identical
/// runs on every platform.
struct SplitMix64 {
    uint64_t state;
    explicit SplitMix64(uint64_t seed) : state(seed) {}
    uint64_t next() {
        uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

struct OutcomePolicy {
    enum class Kind { Sample, Forced };
    Kind kind = Kind::Sample;
    uint64_t seed = 0;
    std::vector<uint8_t> forced;

    static OutcomePolicy sample(uint64_t seed) {
        OutcomePolicy p;
        p.kind = Kind::Sample;
        p.seed = seed;
        return p;
    }
    static OutcomePolicy force(std::vector<uint8_t> outcomes) {
        OutcomePolicy p;
        p.kind = Kind::Forced;
        p.forced = std::move(outcomes);
        return p;
    }
};

struct MeasurementRecord {
    int qubit = 0;
    int cbit = 0;
    int outcome = 0;
    double probability = 1.0;  // pre-measurement probability of the realized outcome
};

/// Amplitudes below this magnitude are rounding dust from gate algebra
/// (e.g. the T-gate Toffoli sequence leaves ~1e-16 residues) and are dropped
/// to keep the tracked support tight. The floor sits six orders below the
/// finest tolerance in the verification ladder.
constexpr double kAmplitudeFloor = 1e-15;

/// Statevector with amplitudes held as a sorted (index, amplitude) list over
/// the 2^Q-dimensional register. Qubit 0 is the most significant index bit.
struct SimState {
    int num_qubits = 0;
    std::vector<std::pair<uint64_t, cplx>> amps;
    std::vector<uint8_t> cbits;
    std::vector<MeasurementRecord> log;
    int rounds_seen = 0;

    static SimState zero(int num_qubits, int num_cbits) {
        SimState s;
        s.num_qubits = num_qubits;
        s.amps = {{0, cplx{1.0, 0.0}}};
        s.cbits.assign(num_cbits, 0);
        return s;
    }

    uint64_t qubit_mask(int q) const { return uint64_t{1} << (num_qubits - 1 - q); }

    double norm_sq() const {
        double acc = 0.0;
        for (const auto& [idx, a] : amps) acc += std::norm(a);
        return acc;
    }

    void sort_amps() {
        std::sort(amps.begin(), amps.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
    }
};

namespace detail {

struct Mat2 {
    cplx m00, m01, m10, m11;
};

inline Mat2 gate_matrix(const Instruction& ins) {
    static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    switch (ins.op) {
        case Op::X: return {0, 1, 1, 0};
        case Op::H: return {inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2};
        case Op::T: return {1, 0, 0, std::polar(1.0, M_PI / 4)};
        case Op::Tdg: return {1, 0, 0, std::polar(1.0, -M_PI / 4)};
        case Op::RY: {
            double c = std::cos(ins.theta / 2), s = std::sin(ins.theta / 2);
            return {c, -s, s, c};
        }
        case Op::RZ: {
            return {std::polar(1.0, -ins.theta / 2), 0, 0, std::polar(1.0, ins.theta / 2)};
        }
        case Op::U1Q: {
            double c = std::cos(ins.theta / 2), s = std::sin(ins.theta / 2);
            return {c, -std::polar(1.0, ins.lambda) * s, std::polar(1.0, ins.phi) * s,
                    std::polar(1.0, ins.phi + ins.lambda) * c};
        }
        default:
            throw std::invalid_argument("gate_matrix: not a single-qubit gate");
    }
}

}  // namespace detail

inline void apply_single_qubit(SimState& s, const detail::Mat2& m, int q) {
    uint64_t mask = s.qubit_mask(q);
    // Diagonal and antidiagonal matrices keep the support structure.
    if (m.m01 == cplx{0.0, 0.0} && m.m10 == cplx{0.0, 0.0}) {
        for (auto& [idx, a] : s.amps) a *= (idx & mask) ? m.m11 : m.m00;
        return;
    }
    if (m.m00 == cplx{0.0, 0.0} && m.m11 == cplx{0.0, 0.0}) {
        for (auto& [idx, a] : s.amps) {
            a *= (idx & mask) ? m.m01 : m.m10;
            idx ^= mask;
        }
        s.sort_amps();
        return;
    }
    std::map<uint64_t, std::pair<cplx, cplx>> groups;
    for (const auto& [idx, a] : s.amps) {
        auto& slot = groups[idx & ~mask];
        if (idx & mask) slot.second = a;
        else slot.first = a;
    }
    s.amps.clear();
    for (const auto& [base, pair] : groups) {
        cplx v0 = m.m00 * pair.first + m.m01 * pair.second;
        cplx v1 = m.m10 * pair.first + m.m11 * pair.second;
        if (std::abs(v0) > kAmplitudeFloor) s.amps.emplace_back(base, v0);
        if (std::abs(v1) > kAmplitudeFloor) s.amps.emplace_back(base | mask, v1);
    }
    // Group keys were ascending and base < base|mask, so amps stayed sorted.
}

inline void apply_cnot(SimState& s, int control, int target) {
    uint64_t cmask = s.qubit_mask(control);
    uint64_t tmask = s.qubit_mask(target);
    for (auto& [idx, a] : s.amps) {
        if (idx & cmask) idx ^= tmask;
    }
    s.sort_amps();
}

/// Applies one native instruction. COND evaluates its XOR condition against
/// the classical bits; MEASURE requires a policy and is handled by `measure`.
inline void apply(SimState& s, const Instruction& ins) {
    switch (ins.op) {
        case Op::CNOT:
            apply_cnot(s, ins.qubits[0], ins.qubits[1]);
            return;
        case Op::COND: {
            int v = ins.negate ? 1 : 0;
            for (int b : ins.cbits) v ^= s.cbits[b];
            if (!v) return;
            if (ins.cond_gate == CondGate::X) {
                apply_single_qubit(s, {0, 1, 1, 0}, ins.qubits[0]);
            } else {
                apply_single_qubit(s, {1, 0, 0, -1}, ins.qubits[0]);
            }
            return;
        }
        case Op::ROUND_BARRIER:
            s.rounds_seen += 1;
            return;
        case Op::MEASURE:
            throw std::invalid_argument("apply: MEASURE needs an outcome policy; use measure()");
        default:
            if (!op_is_native(ins.op)) {
                throw std::invalid_argument("apply: composite instruction; lower the circuit first");
            }
            apply_single_qubit(s, detail::gate_matrix(ins), ins.qubits[0]);
            return;
    }
}

/// Projective computational-basis measurement. Returns the outcome; the state
/// is projected and renormalized, and the record logs the pre-measurement
/// probability of the realized branch.
inline int measure(SimState& s, int qubit, int cbit, int forced_outcome, SplitMix64* rng) {
    uint64_t mask = s.qubit_mask(qubit);
    double p1 = 0.0;
    for (const auto& [idx, a] : s.amps) {
        if (idx & mask) p1 += std::norm(a);
    }
    double total = s.norm_sq();
    p1 /= total;
    int outcome;
    if (rng != nullptr) {
        outcome = rng->uniform() < p1 ? 1 : 0;
    } else {
        outcome = forced_outcome;
        double p = outcome ? p1 : 1.0 - p1;
        if (p < 1e-12) {
            throw std::runtime_error("measure: forced outcome " + std::to_string(outcome) +
                                     " on qubit " + std::to_string(qubit) +
                                     " has probability below 1e-12");
        }
    }
    double p = outcome ? p1 : 1.0 - p1;
    double scale = 1.0 / std::sqrt(p * total);
    std::vector<std::pair<uint64_t, cplx>> kept;
    kept.reserve(s.amps.size());
    for (const auto& [idx, a] : s.amps) {
        if (static_cast<int>((idx & mask) != 0) != outcome) continue;
        cplx v = a * scale;
        if (std::abs(v) > kAmplitudeFloor) kept.emplace_back(idx, v);
    }
    s.amps = std::move(kept);
    if (cbit >= 0) s.cbits[cbit] = static_cast<uint8_t>(outcome);
    s.log.push_back({qubit, cbit, outcome, p});
    return outcome;
}

struct RunResult {
    DenseState final_state;   // data-register block with ancillas in |0>
    std::string outcomes;
    double branch_probability = 1.0;
    double ancilla_residual = 0.0;
    std::optional<double> fidelity_vs_target;
    Metrics metrics_echo;
};

namespace detail {

/// Overlap <target (x) 0...0 | psi> over the data wires.
inline cplx data_overlap(const SimState& s, const DenseState& target, int num_data,
                         double* residual_out) {
    int anc_bits = s.num_qubits - num_data;
    uint64_t anc_mask = anc_bits >= 64 ? ~uint64_t{0} : ((uint64_t{1} << anc_bits) - 1);
    cplx overlap{0.0, 0.0};
    double clean = 0.0;
    for (const auto& [idx, a] : s.amps) {
        if ((idx & anc_mask) == 0) {
            clean += std::norm(a);
            uint64_t data_idx = idx >> anc_bits;
            if (data_idx < target.amplitudes.size()) {
                overlap += std::conj(target.amplitudes[data_idx]) * a;
            }
        }
    }
    if (residual_out != nullptr) *residual_out = std::max(0.0, 1.0 - clean);
    return overlap;
}

inline void fill_run_result(RunResult& r, const SimState& s, int num_data,
                            const DenseState* target) {
    int anc_bits = s.num_qubits - num_data;
    uint64_t anc_mask = anc_bits >= 64 ? ~uint64_t{0} : ((uint64_t{1} << anc_bits) - 1);
    double residual = 0.0;
    if (target != nullptr) {
        cplx ov = data_overlap(s, *target, num_data, &residual);
        r.fidelity_vs_target = std::norm(ov);
    } else {
        for (const auto& [idx, a] : s.amps) {
            if ((idx & anc_mask) == 0) residual += std::norm(a);
        }
        residual = std::max(0.0, 1.0 - residual);
    }
    r.ancilla_residual = residual;
    for (const auto& rec : s.log) r.outcomes += rec.outcome ? '1' : '0';
    if (num_data <= 22) {
        r.final_state = DenseState::zero(num_data);
        for (const auto& [idx, a] : s.amps) {
            if ((idx & anc_mask) == 0) r.final_state.amplitudes[idx >> anc_bits] = a;
        }
    } else {
        r.final_state.num_qubits = num_data;
    }
}

inline int count_measurements(const Circuit& c) {
    int n = 0;
    for (const auto& ins : c.instructions) n += ins.op == Op::MEASURE;
    return n;
}

/// Validates the once-per-round cbit write discipline while executing.
struct RoundWriteCheck {
    std::vector<int> last_round_written;
    void reset(int num_cbits) { last_round_written.assign(num_cbits, -1); }
    void on_measure(int cbit, int round) {
        if (last_round_written[cbit] == round) {
            throw std::runtime_error("cbit c" + std::to_string(cbit) +
                                     " written twice in one round");
        }
        last_round_written[cbit] = round;
    }
};

}  // namespace detail

/// Executes a native circuit from |0...0>. With a Forced policy the k-th
/// measurement takes the k-th bit of the policy string.
inline RunResult run(const Circuit& circuit, const OutcomePolicy& policy,
                     const DenseState* target = nullptr) {
    if (!circuit.is_native()) {
        throw std::invalid_argument("run: circuit contains composite gates; lower it first");
    }
    int total_meas = detail::count_measurements(circuit);
    if (policy.kind == OutcomePolicy::Kind::Forced &&
        static_cast<int>(policy.forced.size()) != total_meas) {
        throw std::invalid_argument("run: forced outcome length " +
                                    std::to_string(policy.forced.size()) + " != measurement count " +
                                    std::to_string(total_meas));
    }
    SimState s = SimState::zero(circuit.num_qubits, circuit.num_cbits);
    SplitMix64 rng(policy.seed);
    SplitMix64* rng_ptr = policy.kind == OutcomePolicy::Kind::Sample ? &rng : nullptr;
    detail::RoundWriteCheck writes;
    writes.reset(circuit.num_cbits);

    RunResult r;
    size_t next_forced = 0;
    for (const auto& ins : circuit.instructions) {
        if (ins.op == Op::MEASURE) {
            int forced = rng_ptr ? 0 : policy.forced[next_forced++];
            writes.on_measure(ins.cbits[0], s.rounds_seen);
            int outcome = measure(s, ins.qubits[0], ins.cbits[0], forced, rng_ptr);
            r.branch_probability *= s.log.back().probability;
            (void)outcome;
        } else {
            apply(s, ins);
        }
    }
    detail::fill_run_result(r, s, circuit.num_data, target);
    r.metrics_echo = metrics(circuit);
    return r;
}

/// Runs every measurement branch with probability >= 1e-12 and returns one
/// result per branch. Branch probabilities sum to 1 within tolerance.
inline std::vector<RunResult> enumerate_branches(const Circuit& circuit, int max_measurements = 12,
                                                 const DenseState* target = nullptr) {
    if (!circuit.is_native()) {
        throw std::invalid_argument("enumerate_branches: lower the circuit first");
    }
    int total = detail::count_measurements(circuit);
    if (total > max_measurements) {
        throw std::invalid_argument("enumerate_branches: " + std::to_string(total) +
                                    " measurements exceed limit " + std::to_string(max_measurements));
    }
    Metrics m = metrics(circuit);
    std::vector<RunResult> results;

    struct Frame {
        SimState state;
        size_t pos;
        double prob;
    };
    std::vector<Frame> stack;
    stack.push_back({SimState::zero(circuit.num_qubits, circuit.num_cbits), 0, 1.0});
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        bool forked = false;
        for (size_t pos = f.pos; pos < circuit.instructions.size(); ++pos) {
            const Instruction& ins = circuit.instructions[pos];
            if (ins.op != Op::MEASURE) {
                apply(f.state, ins);
                continue;
            }
            uint64_t mask = f.state.qubit_mask(ins.qubits[0]);
            double p1 = 0.0;
            for (const auto& [idx, a] : f.state.amps) {
                if (idx & mask) p1 += std::norm(a);
            }
            p1 /= f.state.norm_sq();
            // Branch 1 goes on the stack (explored later), branch 0 continues
            // in place; outcomes therefore enumerate in lexicographic order
            // once results are collected depth-first.
            bool take0 = (1.0 - p1) >= 1e-12;
            bool take1 = p1 >= 1e-12;
            if (take1) {
                Frame g{f.state, pos, f.prob};
                measure(g.state, ins.qubits[0], ins.cbits[0], 1, nullptr);
                g.prob *= g.state.log.back().probability;
                g.pos = pos + 1;
                stack.push_back(std::move(g));
            }
            if (take0) {
                measure(f.state, ins.qubits[0], ins.cbits[0], 0, nullptr);
                f.prob *= f.state.log.back().probability;
            } else {
                forked = true;  // no zero branch; frame ends here
                break;
            }
        }
        if (forked) continue;
        RunResult r;
        r.branch_probability = f.prob;
        detail::fill_run_result(r, f.state, circuit.num_data, target);
        r.metrics_echo = m;
        results.push_back(std::move(r));
    }
    std::sort(results.begin(), results.end(),
              [](const RunResult& a, const RunResult& b) { return a.outcomes < b.outcomes; });
    return results;
}

inline nlohmann::json metrics_to_json(const Metrics& m) {
    nlohmann::json j;
    j["size"] = m.size;
    j["quantum_depth"] = m.quantum_depth;
    j["classical_depth_bound"] = m.classical_depth_bound;
    j["ancilla"] = m.ancilla;
    j["maf_rounds"] = m.maf_rounds;
    nlohmann::json stages = nlohmann::json::object();
    for (const auto& [name, sm] : m.per_stage) {
        stages[name] = {{"size", sm.size},
                        {"quantum_depth", sm.quantum_depth},
                        {"classical_depth_bound", sm.classical_depth_bound},
                        {"ancilla", sm.ancilla},
                        {"maf_rounds", sm.maf_rounds}};
    }
    j["per_stage"] = std::move(stages);
    return j;
}

inline nlohmann::json run_result_to_json(const RunResult& r) {
    nlohmann::json j;
    j["outcomes"] = r.outcomes;
    j["branch_probability"] = r.branch_probability;
    j["ancilla_residual"] = r.ancilla_residual;
    if (r.fidelity_vs_target.has_value()) j["fidelity"] = *r.fidelity_vs_target;
    j["metrics"] = metrics_to_json(r.metrics_echo);
    return j;
}

}  // namespace sqsp

#endif  // SQSP_SIM_HPP
