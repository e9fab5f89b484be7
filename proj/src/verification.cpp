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

#include "gapsum/verification.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "gapsum/errors.hpp"
#include "gapsum/singular_series.hpp"

namespace gapsum {

namespace {

using json = nlohmann::ordered_json;

constexpr std::array<std::pair<Claim, std::string_view>, 12> kClaimTags{{
    {Claim::conjecture1, "conjecture1"},
    {Claim::lemma21, "lemma21"},
    {Claim::lemma22, "lemma22"},
    {Claim::sieve_bound14, "sieve_bound14"},
    {Claim::theorem1_index, "theorem1_index"},
    {Claim::theorem1_prime, "theorem1_prime"},
    {Claim::corollary_c, "corollary_c"},
    {Claim::prime_count, "prime_count"},
    {Claim::gap_count, "gap_count"},
    {Claim::singular_pair, "singular_pair"},
    {Claim::singular_tuple, "singular_tuple"},
    {Claim::sandwich, "sandwich"},
}};

void require_loglog(double x) {
    if (!(x >= 16)) throw ValidationError("main terms need X >= 16");
}

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

std::string_view claim_tag(Claim claim) {
    for (const auto& [c, tag] : kClaimTags) {
        if (c == claim) return tag;
    }
    return "unknown";
}

std::optional<Claim> parse_claim(std::string_view tag) {
    for (const auto& [c, t] : kClaimTags) {
        if (t == tag) return c;
    }
    return std::nullopt;
}

VerificationReport make_report(Claim claim, json params, double empirical, double predicted, std::string notes) {
    VerificationReport r;
    r.claim = claim;
    r.params = std::move(params);
    r.empirical = empirical;
    r.predicted = predicted;
    if (predicted != 0 && !std::isnan(predicted)) r.ratio = empirical / predicted;
    r.notes = std::move(notes);
    return r;
}

double main_term_theorem1_index(double x, double alpha) {
    require_loglog(x);
    if (alpha < -1) throw UnsupportedExponentError("alpha below -1 is not supported");
    const double lx = std::log(x);
    const double llx = std::log(lx);
    if (alpha == -1) return x * std::log(llx) / lx;
    return x / lx * std::pow(llx, 1 + alpha) / (1 + alpha);
}

double main_term_theorem1_prime(double x, double alpha) {
    return main_term_theorem1_index(x, alpha) / std::log(x);
}

double main_term_corollary(double x, double c) {
    require_loglog(x);
    const double llx = std::log(std::log(x));
    if (c < 2) return std::pow(llx, 2 - c) / (2 - c);
    if (c == 2) return std::log(llx);
    return std::numeric_limits<double>::quiet_NaN();
}

std::vector<VerificationReport> conjecture1_ratio(std::uint64_t limit, std::span<const std::uint64_t> d_list,
                                                  const EngineConfig& engine) {
    check_limit(limit);
    const double x = static_cast<double>(limit);
    const double log_x = std::log(x);

    std::vector<TupleSpec> tuples;
    std::vector<std::size_t> slot(d_list.size(), SIZE_MAX);
    for (std::size_t i = 0; i < d_list.size(); ++i) {
        const std::uint64_t d = d_list[i];
        if (d == 0 || d % 2 != 0 || static_cast<double>(d) > log_x) continue;
        slot[i] = tuples.size();
        tuples.push_back(TupleSpec{0, d});
    }
    const auto counts = tuple_counts(limit, tuples, engine);

    std::vector<VerificationReport> out;
    for (std::size_t i = 0; i < d_list.size(); ++i) {
        const std::uint64_t d = d_list[i];
        json params{{"X", limit}, {"d", d}};
        if (d == 0 || d % 2 != 0) {
            out.push_back(make_report(Claim::conjecture1, params, 0, 0, "skipped: singular series zero for odd d"));
            continue;
        }
        if (static_cast<double>(d) > log_x) {
            out.push_back(make_report(Claim::conjecture1, params, 0, 0, "skipped: d exceeds log X"));
            continue;
        }
        const SingularValue s = pair_singular(d);
        const double predicted = s.value * x / (log_x * log_x);
        out.push_back(make_report(Claim::conjecture1, params, static_cast<double>(counts[slot[i]]), predicted,
                                  "S=" + fmt_g(s.value)));
    }
    return out;
}

std::vector<VerificationReport> lemma21_error_curve(std::span<const std::uint64_t> grid) {
    const auto states = pair_singular_sum_curve(grid);
    std::vector<VerificationReport> out;
    out.reserve(states.size());
    for (const auto& st : states) {
        const double predicted = std::pow(std::log(static_cast<double>(st.limit)), 2.0 / 3.0);
        out.push_back(make_report(Claim::lemma21, json{{"X", st.limit}}, std::abs(st.error_term), predicted,
                                  "E=" + fmt_g(st.error_term) + " total=" + fmt_g(st.total)));
    }
    return out;
}

std::vector<VerificationReport> lemma22_ratio_curve(std::span<const std::uint64_t> d_list, std::uint64_t cutoff) {
    std::vector<VerificationReport> out;
    for (auto d : d_list) {
        json params{{"d", d}, {"P", cutoff}};
        if (d < 2 || d % 2 != 0) {
            out.push_back(make_report(Claim::lemma22, params, 0, 0, "skipped: d must be even"));
            continue;
        }
        const TripleRowSum row = triple_row_sum(d, cutoff);
        const double predicted = static_cast<double>(d) * pair_singular(d).value;
        std::string notes = "abs_error=" + fmt_g(row.abs_error);
        if (d == 2) notes += "; degenerate: every {0,h,2} is inadmissible";
        out.push_back(make_report(Claim::lemma22, params, row.sum, predicted, notes));
    }
    return out;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> sample_admissible_triples(std::size_t count,
                                                                               std::uint64_t max_d,
                                                                               std::uint64_t seed) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pool;
    for (std::uint64_t d = 2; d <= max_d; ++d) {
        for (std::uint64_t h = 1; h < d; ++h) {
            if (is_admissible(TupleSpec{0, h, d})) pool.emplace_back(h, d);
        }
    }
    if (count > pool.size()) throw ValidationError("not enough admissible triples below max_d");
    std::mt19937_64 rng(seed);
    // Partial Fisher-Yates; std::shuffle's output is not pinned across libraries.
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng() % (pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    return pool;
}

std::vector<VerificationReport> sieve_bound_check(std::uint64_t limit,
                                                  std::span<const std::pair<std::uint64_t, std::uint64_t>> samples,
                                                  std::uint64_t cutoff, const EngineConfig& engine) {
    check_limit(limit);
    const double x = static_cast<double>(limit);
    const double log_x = std::log(x);

    std::vector<TupleSpec> tuples;
    std::vector<double> singular;
    std::vector<std::string> skip(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto [h, d] = samples[i];
        if (!(0 < h && h < d)) {
            skip[i] = "skipped: need 0 < h < d";
            continue;
        }
        const TupleSpec t{0, h, d};
        if (!is_admissible(t)) {
            skip[i] = "skipped: inadmissible, singular series zero";
            continue;
        }
        if (limit < d + 2) {
            skip[i] = "skipped: X too small for the tuple";
            continue;
        }
        tuples.push_back(t);
        singular.push_back(tuple_singular(t, cutoff).value);
    }
    const auto counts = tuple_counts(limit, tuples, engine);

    std::vector<VerificationReport> out;
    std::size_t j = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto [h, d] = samples[i];
        json params{{"X", limit}, {"h", h}, {"d", d}, {"P", cutoff}};
        if (!skip[i].empty()) {
            out.push_back(make_report(Claim::sieve_bound14, params, 0, 0, skip[i]));
            continue;
        }
        // 2^3 * 3! = 48
        const double predicted = 48 * singular[j] * x / (log_x * log_x * log_x);
        out.push_back(make_report(Claim::sieve_bound14, params, static_cast<double>(counts[j]), predicted,
                                  "S=" + fmt_g(singular[j])));
        ++j;
    }
    return out;
}

std::vector<Theorem1Result> theorem1_ratios(std::uint64_t limit, std::span<const double> alphas,
                                            const EngineConfig& engine) {
    const double x = static_cast<double>(limit);
    require_loglog(x);
    std::vector<WeightSpec> weights;
    for (double a : alphas) weights.push_back(WeightSpec{a});
    const GapBatch batch = gap_batch(limit, weights, engine);

    std::vector<Theorem1Result> out;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        const RangeSplit& s = batch.splits[i];
        const double predicted = main_term_theorem1_prime(x, alphas[i]);
        const std::string notes = "low=" + fmt_g(s.low) + " mid=" + fmt_g(s.mid) + " high=" + fmt_g(s.high) +
                                  " low_share=" + fmt_g(s.low / s.total) + " y=" + fmt_g(s.y);
        out.push_back(Theorem1Result{
            make_report(Claim::theorem1_prime, json{{"X", limit}, {"alpha", alphas[i]}, {"mode", "prime"}}, s.total,
                        predicted, notes),
            s});
    }
    return out;
}

Theorem1Result theorem1_ratio(std::uint64_t limit, double alpha, LimitMode mode, const EngineConfig& engine) {
    if (alpha < -1) throw UnsupportedExponentError("alpha below -1 is not supported");
    if (mode == LimitMode::prime) {
        const double a[] = {alpha};
        return theorem1_ratios(limit, a, engine).front();
    }
    const double x = static_cast<double>(limit);
    require_loglog(x);
    SumRunOptions options;
    options.engine = engine;
    options.grid = std::vector<std::uint64_t>{};
    const SumRun run = weighted_gap_sum(WeightSpec{alpha}, GapLimit::index(limit), options);
    const double predicted = main_term_theorem1_index(x, alpha);
    return Theorem1Result{make_report(Claim::theorem1_index,
                                      json{{"X", limit}, {"alpha", alpha}, {"mode", "index"}},
                                      run.final.value, predicted, "terms=" + std::to_string(run.final.terms)),
                          std::nullopt};
}

CorollaryResult corollary_ratio(std::uint64_t index_limit, double c, const SumRunOptions& options) {
    const double x = static_cast<double>(index_limit);
    require_loglog(x);
    SumRun run = erdos_nathanson_sum(index_limit, c, options);
    json params{{"X", index_limit}, {"c", c}};
    const double empirical = run.final.value;
    if (c > 2) {
        // Plateau fit: the constant is estimated by the last value, with the
        // last inter-snapshot increment as its uncertainty.
        double step = std::numeric_limits<double>::quiet_NaN();
        if (run.snapshots.size() >= 2) {
            step = run.snapshots.back().value - run.snapshots[run.snapshots.size() - 2].value;
        }
        const std::string notes = "gamma_c estimate=" + fmt_g(empirical) + " uncertainty=" + fmt_g(step) +
                                  " heuristic tail=" + fmt_g(erdos_nathanson_tail_heuristic(index_limit, c));
        return CorollaryResult{make_report(Claim::corollary_c, params, empirical, empirical, notes), std::move(run)};
    }
    const double predicted = main_term_corollary(x, c);
    return CorollaryResult{make_report(Claim::corollary_c, params, empirical, predicted,
                                       c == 2 ? "main term log log log X" : "main term (log log X)^(2-c)/(2-c)"),
                           std::move(run)};
}

}  // namespace gapsum
