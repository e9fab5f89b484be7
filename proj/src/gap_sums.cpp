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

#include "gapsum/gap_sums.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gapsum/errors.hpp"

namespace gapsum {

namespace {

class WeightTable {
  public:
    explicit WeightTable(const WeightSpec& weight) : weight_(weight), table_(2048) {
        for (std::uint64_t d = 1; d < table_.size(); ++d) {
            table_[d] = (d == 1 && weight.alpha < 0 && !weight.custom) ? std::numeric_limits<double>::quiet_NaN()
                                                                        : weight(d);
        }
    }

    double operator()(std::uint64_t d) const { return d < table_.size() ? table_[d] : weight_(d); }

  private:
    const WeightSpec& weight_;
    std::vector<double> table_;
};

std::vector<std::uint64_t> resolve_grid(const SumRunOptions& options, std::uint64_t limit) {
    std::vector<std::uint64_t> grid = options.grid ? *options.grid : default_snapshot_grid(limit);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    grid.erase(std::remove_if(grid.begin(), grid.end(), [&](std::uint64_t g) { return g >= limit; }), grid.end());
    return grid;
}

template <typename Term>
SumRun accumulate(GapLimit limit, std::uint64_t first_index, Term&& term, const SumRunOptions& options) {
    const std::vector<std::uint64_t> grid = resolve_grid(options, limit.value);
    StreamState st = options.resume.value_or(StreamState{});
    std::size_t next = 0;
    if (!st.snapshots.empty()) {
        const std::uint64_t done = st.snapshots.back().limit_reached;
        while (next < grid.size() && grid[next] <= done) ++next;
    }

    auto snap = [&](std::uint64_t at) {
        st.snapshots.push_back(SumSnapshot{limit.mode, at, st.acc.value(), st.terms, st.acc.carry});
    };

    auto on_record = [&](const GapRecord& r) {
        if (limit.mode == LimitMode::prime) {
            while (next < grid.size() && r.p_next > grid[next]) snap(grid[next++]);
        }
        if (r.n >= first_index) {
            st.acc.add(term(r));
            ++st.terms;
        }
        if (limit.mode == LimitMode::index) {
            while (next < grid.size() && grid[next] <= r.n) snap(grid[next++]);
        }
    };

    SegmentHook hook;
    if (options.on_segment) {
        hook = [&](const GapCursor& cursor) {
            st.cursor = cursor;
            return options.on_segment(st);
        };
    }
    const GapStreamResult result = gap_stream(limit, on_record, options.engine, st.cursor, hook);
    st.cursor = result.cursor;

    SumRun run;
    run.completed = result.completed;
    if (result.completed) {
        while (next < grid.size()) snap(grid[next++]);
        run.final = SumSnapshot{limit.mode, limit.value, st.acc.value(), st.terms, st.acc.carry};
        run.snapshots = st.snapshots;
        run.snapshots.push_back(run.final);
    } else {
        run.snapshots = st.snapshots;
    }
    run.state = std::move(st);
    return run;
}

}  // namespace

std::uint64_t WeightSpec::first_index() const {
    if (start_index != 0) return start_index;
    return alpha < 0 && !custom ? 2 : 1;
}

void WeightSpec::validate() const {
    if (custom) return;
    if (std::isnan(alpha)) throw ValidationError("alpha must be a number");
    if (alpha < -1) throw UnsupportedExponentError("alpha below -1 is not supported");
    if (alpha < 0 && first_index() < 2) {
        throw ValidationError("negative alpha needs start_index >= 2: (log 1)^alpha is undefined");
    }
}

double WeightSpec::operator()(std::uint64_t d) const {
    if (custom) return custom(d);
    const double x = static_cast<double>(d);
    return std::pow(std::log(x), alpha) / x;
}

std::vector<std::uint64_t> default_snapshot_grid(std::uint64_t limit) {
    std::vector<std::uint64_t> grid;
    for (std::uint64_t p = 10; p < limit; p *= 10) {
        grid.push_back(p);
        if (3 * p < limit) grid.push_back(3 * p);
        if (p > std::numeric_limits<std::uint64_t>::max() / 10) break;
    }
    return grid;
}

SumRun weighted_gap_sum(const WeightSpec& weight, GapLimit limit, const SumRunOptions& options) {
    weight.validate();
    const WeightTable table(weight);
    return accumulate(
        limit, weight.first_index(), [&](const GapRecord& r) { return table(r.d); }, options);
}

SumRun erdos_nathanson_sum(std::uint64_t index_limit, double c, const SumRunOptions& options) {
    if (index_limit < 3) throw EmptyDomainError("Erdos-Nathanson sum starts at n = 3; limit must be >= 3");
    if (std::isnan(c)) throw ValidationError("c must be a number");
    return accumulate(
        GapLimit::index(index_limit), 3,
        [c](const GapRecord& r) {
            const double n = static_cast<double>(r.n);
            return 1.0 / (static_cast<double>(r.d) * n * std::pow(std::log(std::log(n)), c));
        },
        options);
}

double erdos_nathanson_tail_heuristic(std::uint64_t index_limit, double c) {
    if (!(c > 2)) return std::numeric_limits<double>::infinity();
    const double ll = std::log(std::log(static_cast<double>(index_limit)));
    return std::pow(ll, 2 - c) / (c - 2);
}

GapBatch gap_batch(std::uint64_t limit, std::span<const WeightSpec> weights, const EngineConfig& engine) {
    if (limit < 16) throw ValidationError("range split needs X >= 16 so that log log X > 1");
    for (const auto& w : weights) w.validate();

    const double log_x = std::log(static_cast<double>(limit));
    const double y = log_x / std::log(log_x);

    struct Lane {
        WeightTable table;
        std::uint64_t first;
        CompensatedSum low, mid, high, total;
        std::uint64_t low_terms = 0, mid_terms = 0, high_terms = 0;
    };
    std::vector<Lane> lanes;
    lanes.reserve(weights.size());
    for (const auto& w : weights) lanes.push_back(Lane{WeightTable(w), w.first_index(), {}, {}, {}, {}});

    std::vector<std::uint64_t> by_gap(64, 0);
    gap_stream(
        GapLimit::prime(limit),
        [&](const GapRecord& r) {
            if (r.d >= by_gap.size()) by_gap.resize(2 * r.d, 0);
            ++by_gap[r.d];
            const double d = static_cast<double>(r.d);
            for (auto& lane : lanes) {
                if (r.n < lane.first) continue;
                const double f = lane.table(r.d);
                lane.total.add(f);
                if (d <= y) {
                    lane.low.add(f);
                    ++lane.low_terms;
                } else if (d <= log_x) {
                    lane.mid.add(f);
                    ++lane.mid_terms;
                } else {
                    lane.high.add(f);
                    ++lane.high_terms;
                }
            }
        },
        engine);

    GapBatch out;
    out.histogram.limit = limit;
    for (std::uint64_t d = 0; d < by_gap.size(); ++d) {
        if (by_gap[d] != 0) out.histogram.counts.emplace(d, by_gap[d]);
    }
    for (const auto& lane : lanes) {
        out.splits.push_back(RangeSplit{limit, y, log_x, lane.low.value(), lane.mid.value(), lane.high.value(),
                                        lane.total.value(), lane.low_terms, lane.mid_terms, lane.high_terms});
    }
    return out;
}

RangeSplit range_split_sum(std::uint64_t limit, const WeightSpec& weight, const EngineConfig& engine) {
    return gap_batch(limit, std::span<const WeightSpec>(&weight, 1), engine).splits.front();
}

Sandwich sandwich_check(std::uint64_t limit, std::uint64_t d, const EngineConfig& engine) {
    if (d < 2 || d % 2 != 0) throw ValidationError("sandwich check needs an even d >= 2");
    if (limit < d + 3) throw ValidationError("sandwich check needs X >= d + 3");
    std::vector<TupleSpec> tuples;
    tuples.reserve(d);
    tuples.push_back(TupleSpec{0, d});
    for (std::uint64_t h = 1; h < d; ++h) tuples.push_back(TupleSpec{0, h, d});
    const auto counts = tuple_counts(limit, tuples, engine);

    Sandwich s;
    s.upper = counts[0];
    std::int64_t lower = static_cast<std::int64_t>(counts[0]);
    for (std::size_t i = 1; i < counts.size(); ++i) lower -= static_cast<std::int64_t>(counts[i]);
    s.lower = lower;
    s.middle = consecutive_gap_counts(limit, engine).count(d);
    s.ok = s.lower <= static_cast<std::int64_t>(s.middle) && s.middle <= s.upper;
    return s;
}

}  // namespace gapsum
