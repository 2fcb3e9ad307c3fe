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

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sqsp/bench.hpp"
#include "sqsp/lower.hpp"
#include "sqsp/pipeline.hpp"
#include "sqsp/serialize.hpp"
#include "sqsp/sim.hpp"

namespace {

constexpr int kExitInputError = 2;
constexpr int kExitVerifyFailure = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write '" + path + "'");
    out << content;
}

sqsp::PipelineMode parse_mode(const std::string& mode) {
    if (mode == "unitary") return sqsp::PipelineMode::Unitary;
    if (mode == "maf") return sqsp::PipelineMode::Maf;
    throw std::invalid_argument("mode must be 'unitary' or 'maf'");
}

uint64_t base_seed() {
    const char* env = std::getenv("SQSP_SEED");
    if (env == nullptr) return 0;
    return std::strtoull(env, nullptr, 10);
}

int cmd_compile(const std::string& input, const std::string& mode, const std::string& out,
                const std::string& metrics_path) {
    sqsp::SparseStateSpec spec;
    sqsp::Circuit native;
    try {
        spec = sqsp::parse_state_spec(read_file(input));
        native = sqsp::lower(sqsp::compile_sqsp(spec, parse_mode(mode)));
        sqsp::validate_circuit(native);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    sqsp::Metrics m = sqsp::metrics(native);
    if (!out.empty()) write_file(out, sqsp::serialize(native));
    if (!metrics_path.empty()) write_file(metrics_path, sqsp::metrics_to_json(m).dump(2) + "\n");
    std::cout << "compiled n=" << spec.num_qubits << " d=" << spec.d() << " mode=" << mode
              << " size=" << m.size << " depth=" << m.quantum_depth << " rounds=" << m.maf_rounds
              << " ancilla=" << m.ancilla << "\n";
    return 0;
}

int cmd_verify(const std::string& input, const std::string& mode, int seeds, bool exhaustive,
               const std::string& circuit_path, const std::string& report_path) {
    sqsp::SparseStateSpec spec;
    sqsp::Circuit native;
    try {
        spec = sqsp::parse_state_spec(read_file(input));
        if (!circuit_path.empty()) {
            native = sqsp::parse_circuit(read_file(circuit_path));
        } else {
            native = sqsp::lower(sqsp::compile_sqsp(spec, parse_mode(mode)));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }

    sqsp::DenseState target = sqsp::embed(spec);
    double min_fidelity = 1.0;
    double max_residual = 0.0;
    std::string worst_outcomes;
    nlohmann::json report = nlohmann::json::array();
    try {
        auto consider = [&](const sqsp::RunResult& r) {
            double f = r.fidelity_vs_target.value_or(0.0);
            if (f < min_fidelity) {
                min_fidelity = f;
                worst_outcomes = r.outcomes;
            }
            max_residual = std::max(max_residual, r.ancilla_residual);
            if (!report_path.empty()) report.push_back(sqsp::run_result_to_json(r));
        };
        int measurements = 0;
        for (const auto& ins : native.instructions) measurements += ins.op == sqsp::Op::MEASURE;
        if (exhaustive && measurements > 0) {
            for (const auto& r : sqsp::enumerate_branches(native, 16, &target)) consider(r);
        } else if (measurements == 0) {
            consider(sqsp::run(native, sqsp::OutcomePolicy::sample(base_seed()), &target));
        } else {
            for (int s = 0; s < seeds; ++s) {
                consider(sqsp::run(native, sqsp::OutcomePolicy::sample(base_seed() + s), &target));
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerifyFailure;
    }
    if (!report_path.empty()) write_file(report_path, report.dump(2) + "\n");
    std::cout << "min_fidelity=" << std::setprecision(15) << min_fidelity
              << " ancilla_residual=" << max_residual << "\n";
    if (min_fidelity < 1.0 - 1e-9) {
        std::cerr << "verification failed; worst branch outcomes='" << worst_outcomes << "'\n";
        return kExitVerifyFailure;
    }
    return 0;
}

int cmd_bench(const std::string& n_range, const std::string& d_set, const std::string& mode,
              const std::string& csv_path) {
    int n_lo = 0, n_hi = 0;
    std::vector<int> ds;
    try {
        size_t colon = n_range.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("--n-range must be a:b");
        n_lo = std::stoi(n_range.substr(0, colon));
        n_hi = std::stoi(n_range.substr(colon + 1));
        if (n_lo < 1 || n_hi < n_lo) throw std::invalid_argument("bad --n-range bounds");
        std::stringstream ss(d_set);
        std::string item;
        while (std::getline(ss, item, ',')) {
            int d = std::stoi(item);
            if (d < 1) throw std::invalid_argument("d must be positive");
            ds.push_back(d);
        }
        if (ds.empty()) throw std::invalid_argument("--d-set is empty");
        if (mode != "unitary" && mode != "maf" && mode != "both") {
            throw std::invalid_argument("--mode must be unitary, maf, or both");
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }

    std::vector<sqsp::PipelineMode> modes;
    if (mode == "unitary" || mode == "both") modes.push_back(sqsp::PipelineMode::Unitary);
    if (mode == "maf" || mode == "both") modes.push_back(sqsp::PipelineMode::Maf);

    std::vector<sqsp::BenchRow> rows;
    for (int n = n_lo; n <= n_hi; ++n) {
        for (int d : ds) {
            if (n < 64 && d > (1 << std::min(n, 30))) continue;  // d <= 2^n required
            for (auto m : modes) {
                auto point = sqsp::bench_point(n, d, m);
                rows.insert(rows.end(), point.begin(), point.end());
            }
        }
    }
    std::string csv = std::string(sqsp::bench_csv_header()) + "\n";
    for (const auto& r : rows) csv += sqsp::bench_row_csv(r) + "\n";
    if (!csv_path.empty()) write_file(csv_path, csv);
    else std::cout << csv;

    // Permutation-depth slopes: vs n at fixed d (unitary), vs d at fixed n (each mode).
    for (int d : ds) {
        std::vector<double> xs, ys;
        for (const auto& r : rows) {
            if (r.d == d && r.mode == "unitary" && r.stage == "permutation") {
                xs.push_back(r.n);
                ys.push_back(r.quantum_depth);
            }
        }
        if (xs.size() >= 2) {
            auto fit = sqsp::ols_fit(xs, ys);
            std::printf("permutation depth vs n (unitary, d=%d): slope=%.4f R2=%.6f\n", d,
                        fit.slope, fit.r2);
        }
    }
    for (auto m : modes) {
        const char* mode_name = m == sqsp::PipelineMode::Unitary ? "unitary" : "maf";
        std::vector<double> xs, ys;
        for (const auto& r : rows) {
            if (r.n == n_hi && r.mode == mode_name && r.stage == "permutation") {
                xs.push_back(r.d);
                ys.push_back(r.quantum_depth);
            }
        }
        if (xs.size() >= 2) {
            auto fit = sqsp::ols_fit(xs, ys);
            std::printf("permutation depth vs d (%s, n=%d): slope=%.4f R2=%.6f\n", mode_name, n_hi,
                        fit.slope, fit.r2);
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse state preparation compiler and verifier"};
    app.require_subcommand(1);

    std::string input, mode = "unitary", out, metrics_path;
    auto* compile = app.add_subcommand("compile", "compile a state spec to a native circuit");
    compile->add_option("--input", input, "state spec JSON")->required();
    compile->add_option("--mode", mode, "unitary|maf");
    compile->add_option("--out", out, "circuit text output path");
    compile->add_option("--metrics", metrics_path, "metrics JSON output path");

    std::string v_input, v_mode = "unitary", v_circuit, v_report;
    int v_seeds = 20;
    bool v_exhaustive = false;
    auto* verify = app.add_subcommand("verify", "compile and check fidelity by simulation");
    verify->add_option("--input", v_input, "state spec JSON")->required();
    verify->add_option("--mode", v_mode, "unitary|maf");
    verify->add_option("--seeds", v_seeds, "sampled seeds for measurement circuits");
    verify->add_flag("--exhaustive", v_exhaustive, "enumerate every measurement branch");
    verify->add_option("--circuit", v_circuit, "verify this circuit file instead of recompiling");
    verify->add_option("--report", v_report, "write per-run results as JSON");

    std::string b_nrange, b_dset, b_mode = "both", b_csv;
    auto* bench = app.add_subcommand("bench", "sweep compile-only metrics to CSV");
    bench->add_option("--n-range", b_nrange, "a:b inclusive")->required();
    bench->add_option("--d-set", b_dset, "comma-separated d values")->required();
    bench->add_option("--mode", b_mode, "unitary|maf|both");
    bench->add_option("--csv", b_csv, "CSV output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (compile->parsed()) return cmd_compile(input, mode, out, metrics_path);
        if (verify->parsed()) return cmd_verify(v_input, v_mode, v_seeds, v_exhaustive, v_circuit, v_report);
        if (bench->parsed()) return cmd_bench(b_nrange, b_dset, b_mode, b_csv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return 0;
}
