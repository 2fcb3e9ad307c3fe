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

#ifndef SQSP_SERIALIZE_HPP
#define SQSP_SERIALIZE_HPP

#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqsp/circuit.hpp"

namespace sqsp {

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_no, const std::string& why)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + why), line(line_no) {}
};

namespace detail {

inline std::string format_angle(double a) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", a);
    return buf;
}

inline void append_qubits(std::string& out, const std::vector<int>& qs, size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
        out += (i == begin ? "" : " ");
        out += "q" + std::to_string(qs[i]);
    }
}

inline const char* fanout_mode_name(FanoutMode m) {
    switch (m) {
        case FanoutMode::Sequential: return "seq";
        case FanoutMode::Tree: return "tree";
        default: return "maf";
    }
}

}  // namespace detail

/// One instruction per line. Composite gates use
///   "mcx c... > t | pool..." style operand lists; everything the native
/// format needs matches the gate lines documented in the README.
inline std::string serialize_instruction(const Instruction& ins) {
    using detail::append_qubits;
    using detail::format_angle;
    std::string out;
    switch (ins.op) {
        case Op::X: out = "x q" + std::to_string(ins.qubits[0]); break;
        case Op::H: out = "h q" + std::to_string(ins.qubits[0]); break;
        case Op::T: out = "t q" + std::to_string(ins.qubits[0]); break;
        case Op::Tdg: out = "tdg q" + std::to_string(ins.qubits[0]); break;
        case Op::RY: out = "ry(" + format_angle(ins.theta) + ") q" + std::to_string(ins.qubits[0]); break;
        case Op::RZ: out = "rz(" + format_angle(ins.theta) + ") q" + std::to_string(ins.qubits[0]); break;
        case Op::U1Q:
            out = "u(" + format_angle(ins.theta) + "," + format_angle(ins.phi) + "," +
                  format_angle(ins.lambda) + ") q" + std::to_string(ins.qubits[0]);
            break;
        case Op::CNOT:
            out = "cx q" + std::to_string(ins.qubits[0]) + " q" + std::to_string(ins.qubits[1]);
            break;
        case Op::CSWAP:
            out = "cswap q" + std::to_string(ins.qubits[0]) + " q" + std::to_string(ins.qubits[1]) +
                  " q" + std::to_string(ins.qubits[2]);
            break;
        case Op::TOFFOLI:
            out = "toffoli q" + std::to_string(ins.qubits[0]) + " q" + std::to_string(ins.qubits[1]) +
                  " q" + std::to_string(ins.qubits[2]);
            break;
        case Op::MCX:
        case Op::MCRY:
        case Op::OR_CX:
        case Op::PAR_CX: {
            if (ins.op == Op::MCX) out = "mcx ";
            else if (ins.op == Op::MCRY) out = "mcry(" + format_angle(ins.theta) + ") ";
            else if (ins.op == Op::OR_CX) out = "orcx ";
            else out = std::string("parcx(") + detail::fanout_mode_name(ins.mode) + ") ";
            size_t k = static_cast<size_t>(ins.num_controls);
            append_qubits(out, ins.qubits, 0, k);
            out += " > q" + std::to_string(ins.qubits[k]);
            if (ins.qubits.size() > k + 1) {
                out += " | ";
                append_qubits(out, ins.qubits, k + 1, ins.qubits.size());
            }
            break;
        }
        case Op::FANOUT: {
            out = std::string("fanout(") + detail::fanout_mode_name(ins.mode) + ") q" +
                  std::to_string(ins.qubits[0]) + " > ";
            size_t m = static_cast<size_t>(ins.num_targets);
            append_qubits(out, ins.qubits, 1, 1 + m);
            if (ins.qubits.size() > 1 + m) {
                out += " | ";
                append_qubits(out, ins.qubits, 1 + m, ins.qubits.size());
            }
            break;
        }
        case Op::MEASURE:
            out = "measure q" + std::to_string(ins.qubits[0]) + " -> c" + std::to_string(ins.cbits[0]);
            break;
        case Op::COND: {
            out = std::string("cond ") + (ins.negate ? "!xor(" : "xor(");
            for (size_t i = 0; i < ins.cbits.size(); ++i) {
                out += (i ? "," : "") + std::string("c") + std::to_string(ins.cbits[i]);
            }
            out += ins.cond_gate == CondGate::X ? ") x q" : ") z q";
            out += std::to_string(ins.qubits[0]);
            break;
        }
        case Op::ROUND_BARRIER: out = "round"; break;
    }
    return out;
}

inline std::string serialize(const Circuit& c) {
    std::string out = "qubits " + std::to_string(c.num_qubits) + "\n";
    out += "cbits " + std::to_string(c.num_cbits) + "\n";
    if (c.num_data != c.num_qubits) out += "# data " + std::to_string(c.num_data) + "\n";
    auto reg = [&](const char* name, const RegisterSpan& s) {
        if (s.size > 0) {
            out += std::string("# register ") + name + " " + std::to_string(s.start) + " " +
                   std::to_string(s.size) + "\n";
        }
    };
    reg("A", c.registers.a);
    reg("B", c.registers.b);
    reg("C", c.registers.c);
    reg("D", c.registers.d);
    Stage current = Stage::None;
    for (const auto& ins : c.instructions) {
        if (ins.stage != current) {
            current = ins.stage;
            out += std::string("# stage: ") + stage_name(current) + "\n";
        }
        out += serialize_instruction(ins) + "\n";
    }
    return out;
}

namespace detail {

struct Tokenizer {
    std::vector<std::string> toks;
    size_t pos = 0;
    int line;

    Tokenizer(const std::string& text, int line_no) : line(line_no) {
        std::string cur;
        for (char ch : text) {
            if (ch == ' ' || ch == '\t') {
                if (!cur.empty()) toks.push_back(cur), cur.clear();
            } else {
                cur += ch;
            }
        }
        if (!cur.empty()) toks.push_back(cur);
    }

    bool done() const { return pos >= toks.size(); }
    const std::string& peek() const {
        static const std::string empty;
        return done() ? empty : toks[pos];
    }
    std::string next() {
        if (done()) throw ParseError(line, "unexpected end of line");
        return toks[pos++];
    }
};

inline int parse_wire(const std::string& tok, char prefix, int limit, int line) {
    if (tok.size() < 2 || tok[0] != prefix) {
        throw ParseError(line, "expected operand like " + std::string(1, prefix) + "3, got '" + tok + "'");
    }
    size_t used = 0;
    int v;
    try {
        v = std::stoi(tok.substr(1), &used);
    } catch (const std::exception&) {
        throw ParseError(line, "bad operand '" + tok + "'");
    }
    if (used + 1 != tok.size() || v < 0 || v >= limit) {
        throw ParseError(line, "operand '" + tok + "' out of range");
    }
    return v;
}

inline double parse_angle_arg(const std::string& head, size_t open, int line) {
    size_t close = head.rfind(')');
    if (close == std::string::npos || close <= open) throw ParseError(line, "missing ')' in '" + head + "'");
    std::string body = head.substr(open + 1, close - open - 1);
    try {
        size_t used = 0;
        double v = std::stod(body, &used);
        if (used != body.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ParseError(line, "bad angle '" + body + "'");
    }
}

inline FanoutMode parse_mode_arg(const std::string& head, size_t open, int line) {
    size_t close = head.rfind(')');
    if (close == std::string::npos || close <= open) throw ParseError(line, "missing ')' in '" + head + "'");
    std::string body = head.substr(open + 1, close - open - 1);
    if (body == "seq") return FanoutMode::Sequential;
    if (body == "tree") return FanoutMode::Tree;
    if (body == "maf") return FanoutMode::Maf;
    throw ParseError(line, "unknown fan-out mode '" + body + "'");
}

}  // namespace detail

inline Circuit parse_circuit(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    Circuit c;
    bool have_qubits = false, have_cbits = false;
    Stage stage = Stage::None;
    std::vector<bool> cbit_written;

    while (std::getline(in, raw)) {
        ++line_no;
        while (!raw.empty() && (raw.back() == '\r' || raw.back() == ' ')) raw.pop_back();
        size_t first = raw.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        std::string s = raw.substr(first);

        if (s[0] == '#') {
            detail::Tokenizer tk(s.substr(1), line_no);
            if (tk.done()) continue;
            std::string what = tk.next();
            if (what == "stage:") {
                std::string name = tk.done() ? "none" : tk.next();
                if (name == "gqsp") stage = Stage::Gqsp;
                else if (name == "onehot") stage = Stage::Onehot;
                else if (name == "permutation") stage = Stage::Permutation;
                else if (name == "garbage") stage = Stage::Garbage;
                else stage = Stage::None;
            } else if (what == "data") {
                c.num_data = std::stoi(tk.next());
            } else if (what == "register") {
                std::string name = tk.next();
                int start = std::stoi(tk.next());
                int size = std::stoi(tk.next());
                RegisterSpan span{start, size};
                if (name == "A") c.registers.a = span;
                else if (name == "B") c.registers.b = span;
                else if (name == "C") c.registers.c = span;
                else if (name == "D") c.registers.d = span;
            }
            continue;  // any other comment is ignored
        }

        detail::Tokenizer tk(s, line_no);
        std::string head = tk.next();
        if (head == "qubits") {
            c.num_qubits = std::stoi(tk.next());
            if (c.num_data == 0 || !have_qubits) c.num_data = c.num_qubits;
            have_qubits = true;
            continue;
        }
        if (head == "cbits") {
            c.num_cbits = std::stoi(tk.next());
            cbit_written.assign(c.num_cbits, false);
            have_cbits = true;
            continue;
        }
        if (!have_qubits || !have_cbits) {
            throw ParseError(line_no, "instruction before qubits/cbits header");
        }

        auto qubit = [&](const std::string& tok) { return detail::parse_wire(tok, 'q', c.num_qubits, line_no); };
        auto cbit = [&](const std::string& tok) { return detail::parse_wire(tok, 'c', c.num_cbits, line_no); };

        Instruction ins;
        ins.stage = stage;
        size_t open = head.find('(');
        std::string kind = open == std::string::npos ? head : head.substr(0, open);

        if (kind == "x" || kind == "h" || kind == "t" || kind == "tdg") {
            ins.op = kind == "x" ? Op::X : kind == "h" ? Op::H : kind == "t" ? Op::T : Op::Tdg;
            ins.qubits = {qubit(tk.next())};
        } else if (kind == "ry" || kind == "rz") {
            ins.op = kind == "ry" ? Op::RY : Op::RZ;
            ins.theta = detail::parse_angle_arg(head, open, line_no);
            ins.qubits = {qubit(tk.next())};
        } else if (kind == "u") {
            ins.op = Op::U1Q;
            size_t close = head.rfind(')');
            if (open == std::string::npos || close == std::string::npos) {
                throw ParseError(line_no, "bad u(...) gate");
            }
            std::string body = head.substr(open + 1, close - open - 1);
            double vals[3];
            size_t start = 0;
            for (int i = 0; i < 3; ++i) {
                size_t comma = i < 2 ? body.find(',', start) : body.size();
                if (comma == std::string::npos) throw ParseError(line_no, "u(...) needs three angles");
                try {
                    vals[i] = std::stod(body.substr(start, comma - start));
                } catch (const std::exception&) {
                    throw ParseError(line_no, "bad angle in u(...)");
                }
                start = comma + 1;
            }
            ins.theta = vals[0];
            ins.phi = vals[1];
            ins.lambda = vals[2];
            ins.qubits = {qubit(tk.next())};
        } else if (kind == "cx") {
            ins.op = Op::CNOT;
            ins.qubits = {qubit(tk.next()), qubit(tk.next())};
        } else if (kind == "cswap" || kind == "toffoli") {
            ins.op = kind == "cswap" ? Op::CSWAP : Op::TOFFOLI;
            ins.qubits = {qubit(tk.next()), qubit(tk.next()), qubit(tk.next())};
        } else if (kind == "mcx" || kind == "mcry" || kind == "orcx" || kind == "parcx") {
            if (kind == "mcx") ins.op = Op::MCX;
            else if (kind == "mcry") ins.op = Op::MCRY, ins.theta = detail::parse_angle_arg(head, open, line_no);
            else if (kind == "orcx") ins.op = Op::OR_CX;
            else ins.op = Op::PAR_CX, ins.mode = detail::parse_mode_arg(head, open, line_no);
            while (!tk.done() && tk.peek() != ">") ins.qubits.push_back(qubit(tk.next()));
            ins.num_controls = static_cast<int>(ins.qubits.size());
            if (tk.done()) throw ParseError(line_no, "missing '>' target separator");
            tk.next();
            ins.qubits.push_back(qubit(tk.next()));
            if (!tk.done()) {
                if (tk.next() != "|") throw ParseError(line_no, "expected '|' before pool");
                while (!tk.done()) ins.qubits.push_back(qubit(tk.next()));
            }
        } else if (kind == "fanout") {
            ins.op = Op::FANOUT;
            ins.mode = detail::parse_mode_arg(head, open, line_no);
            ins.qubits.push_back(qubit(tk.next()));
            if (tk.next() != ">") throw ParseError(line_no, "missing '>' target separator");
            while (!tk.done() && tk.peek() != "|") ins.qubits.push_back(qubit(tk.next()));
            ins.num_targets = static_cast<int>(ins.qubits.size()) - 1;
            if (ins.num_targets < 1) throw ParseError(line_no, "fan-out needs at least one target");
            if (!tk.done()) {
                tk.next();
                while (!tk.done()) ins.qubits.push_back(qubit(tk.next()));
            }
        } else if (kind == "measure") {
            ins.op = Op::MEASURE;
            ins.qubits = {qubit(tk.next())};
            if (tk.next() != "->") throw ParseError(line_no, "expected '->' in measure");
            ins.cbits = {cbit(tk.next())};
            cbit_written[ins.cbits[0]] = true;
        } else if (kind == "cond") {
            ins.op = Op::COND;
            std::string expr = tk.next();
            if (expr.rfind("!xor(", 0) == 0) ins.negate = true;
            else if (expr.rfind("xor(", 0) != 0) throw ParseError(line_no, "expected xor(...) condition");
            size_t lparen = expr.find('(');
            size_t rparen = expr.rfind(')');
            if (rparen == std::string::npos || rparen <= lparen) {
                throw ParseError(line_no, "missing ')' in condition");
            }
            std::string body = expr.substr(lparen + 1, rparen - lparen - 1);
            size_t start = 0;
            while (start < body.size()) {
                size_t comma = body.find(',', start);
                if (comma == std::string::npos) comma = body.size();
                int b = cbit(body.substr(start, comma - start));
                if (!cbit_written[b]) {
                    throw ParseError(line_no, "condition references cbit c" + std::to_string(b) +
                                                  " before any measurement writes it");
                }
                ins.cbits.push_back(b);
                start = comma + 1;
            }
            if (ins.cbits.empty()) throw ParseError(line_no, "empty condition");
            std::string g = tk.next();
            if (g == "x") ins.cond_gate = CondGate::X;
            else if (g == "z") ins.cond_gate = CondGate::Z;
            else throw ParseError(line_no, "conditioned gate must be x or z");
            ins.qubits = {qubit(tk.next())};
        } else if (kind == "round") {
            ins.op = Op::ROUND_BARRIER;
        } else {
            throw ParseError(line_no, "unknown instruction '" + head + "'");
        }
        if (!tk.done()) throw ParseError(line_no, "trailing tokens after instruction");
        c.instructions.push_back(std::move(ins));
    }
    if (!have_qubits || !have_cbits) throw ParseError(line_no, "missing qubits/cbits header");
    validate_circuit(c);
    return c;
}

}  // namespace sqsp

#endif  // SQSP_SERIALIZE_HPP
