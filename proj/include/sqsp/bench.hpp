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

#ifndef SQSP_BENCH_HPP
#define SQSP_BENCH_HPP

#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "sqsp/lower.hpp"
#include "sqsp/metrics.hpp"
#include "sqsp/pipeline.hpp"
#include "sqsp/state.hpp"

namespace sqsp {

/// Deterministic benchmark family: uniform amplitudes on the bit-flipped,
/// zero-padded indices. Every permutation column disagrees on every entry,
/// so stage-3 structure depends only on (n, d). Requires d <= 2^n.
inline SparseStateSpec make_bench_spec(int n, int d) {
    SparseStateSpec spec;
    spec.num_qubits = n;
    double amp = 1.0 / std::sqrt(static_cast<double>(d));
    int np = ceil_log2(d);
    for (int i = 0; i < d; ++i) {
        std::string bits(n, '1');
        for (int j = 0; j < np; ++j) {
            if ((i >> (np - 1 - j)) & 1) bits[j] = '0';
        }
        spec.entries.push_back({cplx{amp, 0.0}, bits});
    }
    return spec;
}

struct BenchRow {
    int n = 0;
    int d = 0;
    std::string mode;
    std::string stage;
    long long size = 0;
    int quantum_depth = 0;
    int maf_rounds = 0;
    int ancilla = 0;
    double wall_time_ms = 0.0;
};

inline const char* bench_csv_header() {
    return "n,d,mode,stage,size,quantum_depth,maf_rounds,ancilla,wall_time_ms";
}

inline std::string bench_row_csv(const BenchRow& r) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d,%d,%s,%s,%lld,%d,%d,%d,%.3f", r.n, r.d, r.mode.c_str(),
                  r.stage.c_str(), r.size, r.quantum_depth, r.maf_rounds, r.ancilla,
                  r.wall_time_ms);
    return buf;
}

/// Compiles the benchmark spec for one (n, d, mode) point and reports rows
/// for the four stages plus a "total" row.
inline std::vector<BenchRow> bench_point(int n, int d, PipelineMode mode) {
    auto t0 = std::chrono::steady_clock::now();
    SparseStateSpec spec = make_bench_spec(n, d);
    Circuit native = lower(compile_sqsp(spec, mode));
    Metrics m = metrics(native);
    auto t1 = std::chrono::steady_clock::now();
    double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

    const char* mode_name = mode == PipelineMode::Unitary ? "unitary" : "maf";
    std::vector<BenchRow> rows;
    for (const char* stage : {"gqsp", "onehot", "permutation", "garbage"}) {
        BenchRow r{n, d, mode_name, stage, 0, 0, 0, m.ancilla, ms};
        auto it = m.per_stage.find(stage);
        if (it != m.per_stage.end()) {
            r.size = it->second.size;
            r.quantum_depth = it->second.quantum_depth;
            r.maf_rounds = it->second.maf_rounds;
        }
        rows.push_back(std::move(r));
    }
    rows.push_back({n, d, mode_name, "total", m.size, m.quantum_depth, m.maf_rounds, m.ancilla, ms});
    return rows;
}

struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

inline OlsFit ols_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    size_t n = xs.size();
    OlsFit fit;
    if (n < 2) return fit;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0) return fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_res = 0, ss_tot = 0, mean = sy / n;
    for (size_t i = 0; i < n; ++i) {
        double pred = fit.slope * xs[i] + fit.intercept;
        ss_res += (ys[i] - pred) * (ys[i] - pred);
        ss_tot += (ys[i] - mean) * (ys[i] - mean);
    }
    fit.r2 = ss_tot == 0 ? 1.0 : 1.0 - ss_res / ss_tot;
    return fit;
}

}  // namespace sqsp

#endif  // SQSP_BENCH_HPP
