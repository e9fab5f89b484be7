// Copyright 2026 The gapsum Authors
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

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "gapsum/compensated_sum.hpp"
#include "gapsum/prime_engine.hpp"

namespace gapsum {

// Weight f(t) = (log t)^alpha / t applied to each gap d_n with n >= start.
//
// d_1 = 1 is special: (log 1)^alpha is 0 for alpha > 0, 1 for alpha = 0 and
// undefined for alpha < 0, so negative exponents must start at n = 2.
struct WeightSpec {
    double alpha = 0;
    // 0 picks the default: 1 for alpha >= 0, 2 otherwise.
    std::uint64_t start_index = 0;
    // Optional user weight replacing the power-log family. Must be
    // monotone decreasing on [2, inf) for the range-split reading to apply.
    std::function<double(std::uint64_t)> custom;

    std::uint64_t first_index() const;
    void validate() const;
    double operator()(std::uint64_t d) const;
};

struct SumSnapshot {
    LimitMode mode = LimitMode::prime;
    std::uint64_t limit_reached = 0;
    double value = 0;
    std::uint64_t terms = 0;
    double compensation = 0;

    friend bool operator==(const SumSnapshot&, const SumSnapshot&) = default;
};

// 10, 30, 100, 300, ... strictly below `limit`.
std::vector<std::uint64_t> default_snapshot_grid(std::uint64_t limit);

// Everything needed to continue an accumulation after the last completed
// segment.
struct StreamState {
    GapCursor cursor;
    CompensatedSum acc;
    std::uint64_t terms = 0;
    std::vector<SumSnapshot> snapshots;
};

struct SumRunOptions {
    EngineConfig engine;
    // Snapshot limits; nullopt selects default_snapshot_grid.
    std::optional<std::vector<std::uint64_t>> grid;
    // Continue from a saved state instead of n = 1.
    std::optional<StreamState> resume;
    // Called after every completed segment; returning false halts the run.
    std::function<bool(const StreamState&)> on_segment;
};

struct SumRun {
    std::vector<SumSnapshot> snapshots;  // grid snapshots, then the final one
    SumSnapshot final;
    StreamState state;
    bool completed = false;
};

SumRun weighted_gap_sum(const WeightSpec& weight, GapLimit limit, const SumRunOptions& options = {});

// sum_{3<=n<=N} 1 / (d_n n (log log n)^c), index-limit mode.
SumRun erdos_nathanson_sum(std::uint64_t index_limit, double c, const SumRunOptions& options = {});

// Heuristic tail beyond N for c > 2, from the average density of 1/d_n:
// integral of dt / (t log t (log log t)^(c-1)) = (log log N)^(2-c) / (c-2).
// Not a bound.
double erdos_nathanson_tail_heuristic(std::uint64_t index_limit, double c);

// Three-range split of the prime-limit sum at y = log X / log log X and log X.
struct RangeSplit {
    std::uint64_t limit = 0;
    double y = 0;
    double log_limit = 0;
    double low = 0;   // d_n <= y
    double mid = 0;   // y < d_n <= log X
    double high = 0;  // d_n > log X
    double total = 0; // ordered sum over all terms
    std::uint64_t low_terms = 0;
    std::uint64_t mid_terms = 0;
    std::uint64_t high_terms = 0;
};

RangeSplit range_split_sum(std::uint64_t limit, const WeightSpec& weight, const EngineConfig& engine = {});

// Several weights over one prime-limit stream, plus the gap histogram.
struct GapBatch {
    std::vector<RangeSplit> splits;
    GapHistogram histogram;
};
GapBatch gap_batch(std::uint64_t limit, std::span<const WeightSpec> weights, const EngineConfig& engine = {});

struct Sandwich {
    std::int64_t lower = 0;    // pi(X;{0,d}) - sum_h pi(X;{0,h,d})
    std::uint64_t middle = 0;  // #{n : d_n = d, p_{n+1} <= X}
    std::uint64_t upper = 0;   // pi(X;{0,d})
    bool ok = false;
};

Sandwich sandwich_check(std::uint64_t limit, std::uint64_t d, const EngineConfig& engine = {});

}  // namespace gapsum
