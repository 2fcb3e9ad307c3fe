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

#ifndef SQSP_STATE_HPP
#define SQSP_STATE_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "json.hpp"

namespace sqsp {

using cplx = std::complex<double>;

/// One (amplitude, bitstring) entry of a sparse state. The bitstring is
/// MSB-first: character j addresses qubit j.
struct SparseEntry {
    cplx amplitude;
    std::string bits;
};

/// An n-qubit state with d nonzero computational-basis amplitudes.
/// Entry order is significant: it fixes the index i used by the one-hot
/// encoding stage and the leaf order of the amplitude tree.
struct SparseStateSpec {
    int num_qubits = 0;
    std::vector<SparseEntry> entries;

    int d() const { return static_cast<int>(entries.size()); }
};

/// Full 2^n amplitude vector. Qubit 0 is the most significant index bit.
struct DenseState {
    int num_qubits = 0;
    std::vector<cplx> amplitudes;

    static DenseState zero(int num_qubits) {
        DenseState s;
        s.num_qubits = num_qubits;
        s.amplitudes.assign(uint64_t{1} << num_qubits, cplx{0.0, 0.0});
        return s;
    }
};

inline double norm_squared(const std::vector<cplx>& v) {
    double acc = 0.0;
    for (const auto& a : v) acc += std::norm(a);
    return acc;
}

/// |<a|b>|^2. Symmetric and insensitive to global phase.
inline double fidelity(const DenseState& a, const DenseState& b) {
    if (a.num_qubits != b.num_qubits) {
        throw std::invalid_argument("fidelity: qubit count mismatch (" +
                                    std::to_string(a.num_qubits) + " vs " +
                                    std::to_string(b.num_qubits) + ")");
    }
    cplx overlap{0.0, 0.0};
    for (size_t i = 0; i < a.amplitudes.size(); ++i) {
        overlap += std::conj(a.amplitudes[i]) * b.amplitudes[i];
    }
    return std::norm(overlap);
}

/// Dense-vector index of a bitstring, MSB-first.
inline uint64_t bits_to_index(const std::string& bits) {
    uint64_t idx = 0;
    for (char ch : bits) idx = (idx << 1) | static_cast<uint64_t>(ch == '1');
    return idx;
}

inline std::string index_to_bits(uint64_t idx, int n) {
    std::string s(n, '0');
    for (int j = 0; j < n; ++j) {
        if ((idx >> (n - 1 - j)) & 1) s[j] = '1';
    }
    return s;
}

inline DenseState embed(const SparseStateSpec& spec) {
    DenseState s = DenseState::zero(spec.num_qubits);
    for (const auto& e : spec.entries) s.amplitudes[bits_to_index(e.bits)] += e.amplitude;
    return s;
}

/// Inverse of embed for states that are exactly sparse; entries come out in
/// ascending index order.
inline SparseStateSpec extract_nonzeros(const DenseState& s, double cutoff = 0.0) {
    SparseStateSpec spec;
    spec.num_qubits = s.num_qubits;
    for (uint64_t i = 0; i < s.amplitudes.size(); ++i) {
        if (std::abs(s.amplitudes[i]) > cutoff) {
            spec.entries.push_back({s.amplitudes[i], index_to_bits(i, s.num_qubits)});
        }
    }
    return spec;
}

/// Parses "RE+IMi" / "RE-IMi" with decimal literals, e.g. "0.5916+0.0i".
inline cplx parse_amplitude(const std::string& text) {
    if (text.empty() || text.back() != 'i') {
        throw std::invalid_argument("amplitude '" + text + "': expected \"RE+IMi\" or \"RE-IMi\"");
    }
    std::string body = text.substr(0, text.size() - 1);
    // The imaginary part starts at the last +/- that is not an exponent sign.
    size_t split = std::string::npos;
    for (size_t p = body.size(); p-- > 1;) {
        char ch = body[p];
        if ((ch == '+' || ch == '-') && body[p - 1] != 'e' && body[p - 1] != 'E') {
            split = p;
            break;
        }
    }
    if (split == std::string::npos) {
        throw std::invalid_argument("amplitude '" + text + "': missing imaginary part");
    }
    try {
        size_t used = 0;
        double re = std::stod(body.substr(0, split), &used);
        if (used != split) throw std::invalid_argument("trailing characters");
        std::string im_text = body.substr(split);
        double im = std::stod(im_text, &used);
        if (used != im_text.size()) throw std::invalid_argument("trailing characters");
        return {re, im};
    } catch (const std::exception&) {
        throw std::invalid_argument("amplitude '" + text + "': malformed number");
    }
}

inline std::string format_amplitude(const cplx& a) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g%+.17gi", a.real(), a.imag());
    return buf;
}

/// Validates entry bitstrings, distinctness, and normalization. With
/// `renormalize`, deviations up to 1e-3 are rescaled away; anything larger is
/// rejected either way.
inline void validate_spec(SparseStateSpec& spec, bool renormalize) {
    if (spec.num_qubits <= 0) throw std::invalid_argument("spec: n must be positive");
    if (spec.entries.empty()) throw std::invalid_argument("spec: at least one entry required");
    if (spec.num_qubits < 64 &&
        spec.entries.size() > (uint64_t{1} << spec.num_qubits)) {
        throw std::invalid_argument("spec: d exceeds 2^n");
    }
    std::unordered_set<std::string> seen;
    for (const auto& e : spec.entries) {
        if (static_cast<int>(e.bits.size()) != spec.num_qubits) {
            throw std::invalid_argument("spec: bitstring '" + e.bits + "' length != n");
        }
        for (char ch : e.bits) {
            if (ch != '0' && ch != '1') {
                throw std::invalid_argument("spec: bitstring '" + e.bits + "' has non-binary character");
            }
        }
        if (!seen.insert(e.bits).second) {
            throw std::invalid_argument("spec: duplicate bitstring '" + e.bits + "'");
        }
    }
    double nsq = 0.0;
    for (const auto& e : spec.entries) nsq += std::norm(e.amplitude);
    double dev = std::abs(nsq - 1.0);
    if (dev > 1e-9) {
        if (!renormalize) {
            throw std::invalid_argument("spec: squared norm deviates from 1 by " +
                                        std::to_string(dev) + " (renormalize not set)");
        }
        if (dev > 1e-3) {
            throw std::invalid_argument("spec: norm deviation " + std::to_string(dev) +
                                        " too large to renormalize");
        }
        double scale = 1.0 / std::sqrt(nsq);
        for (auto& e : spec.entries) e.amplitude *= scale;
    }
}

/// Parses the JSON document
///   {"n": int, "renormalize": bool?, "entries": [["RE+IMi", "bits"], ...]}
inline SparseStateSpec parse_state_spec(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("spec: malformed JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("entries")) {
        throw std::invalid_argument("spec: expected object with \"n\" and \"entries\"");
    }
    SparseStateSpec spec;
    if (!doc["n"].is_number_integer()) throw std::invalid_argument("spec: \"n\" must be an integer");
    spec.num_qubits = doc["n"].get<int>();
    bool renorm = doc.value("renormalize", false);
    if (!doc["entries"].is_array()) throw std::invalid_argument("spec: \"entries\" must be an array");
    for (const auto& item : doc["entries"]) {
        if (!item.is_array() || item.size() != 2 || !item[0].is_string() || !item[1].is_string()) {
            throw std::invalid_argument("spec: each entry must be [amplitude-string, bitstring]");
        }
        spec.entries.push_back({parse_amplitude(item[0].get<std::string>()),
                                item[1].get<std::string>()});
    }
    validate_spec(spec, renorm);
    return spec;
}

inline std::string serialize_state_spec(const SparseStateSpec& spec) {
    nlohmann::json doc;
    doc["n"] = spec.num_qubits;
    auto entries = nlohmann::json::array();
    for (const auto& e : spec.entries) {
        entries.push_back({format_amplitude(e.amplitude), e.bits});
    }
    doc["entries"] = std::move(entries);
    return doc.dump(2);
}

}  // namespace sqsp

#endif  // SQSP_STATE_HPP
