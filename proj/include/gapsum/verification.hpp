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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "gapsum/gap_sums.hpp"
#include "gapsum/prime_engine.hpp"

namespace gapsum {

// Report kinds. The first block compares an empirical quantity against a
// predicted main term; the second block tags plain data rows the CLI emits.
enum class Claim {
    conjecture1,
    lemma21,
    lemma22,
    sieve_bound14,
    theorem1_index,
    theorem1_prime,
    corollary_c,
    prime_count,
    gap_count,
    singular_pair,
    singular_tuple,
    sandwich,
};

std::string_view claim_tag(Claim claim);
std::optional<Claim> parse_claim(std::string_view tag);

struct VerificationReport {
    Claim claim = Claim::conjecture1;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    double empirical = 0;
    double predicted = 0;
    // empirical / predicted; nullopt when predicted is 0.
    std::optional<double> ratio;
    std::string notes;

    friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

VerificationReport make_report(Claim claim, nlohmann::ordered_json params, double empirical, double predicted,
                               std::string notes = {});

// Leading asymptotic terms. All need X >= 16 (log log X > 1).
double main_term_theorem1_index(double x, double alpha);
double main_term_theorem1_prime(double x, double alpha);
// c > 2 has no closed form (the limit is an unknown constant); returns NaN.
double main_term_corollary(double x, double c);

// Empirical brackets used by the acceptance suite. The asymptotic statements
// carry no explicit constants, so every number here is a calibration choice.
struct Thresholds {
    double lemma21_constant = 2.0;
    double lemma22_lo = 0.5;
    double lemma22_hi = 1.5;
    double sieve_bound_slack = 0.1;
    double conjecture1_lo = 0.8;
    double conjecture1_hi = 1.5;
    double theorem1_lo = 0.5;
    double theorem1_hi = 1.5;
    double theorem1_low_share = 0.8;
    double corollary_c3_step = 1e-3;
};

std::vector<VerificationReport> conjecture1_ratio(std::uint64_t limit, std::span<const std::uint64_t> d_list,
                                                  const EngineConfig& engine = {});

std::vector<VerificationReport> lemma21_error_curve(std::span<const std::uint64_t> grid);

std::vector<VerificationReport> lemma22_ratio_curve(std::span<const std::uint64_t> d_list, std::uint64_t cutoff);

// `count` distinct admissible (h, d) with 0 < h < d <= max_d, drawn with a
// fixed-seed generator so runs are reproducible.
std::vector<std::pair<std::uint64_t, std::uint64_t>> sample_admissible_triples(std::size_t count,
                                                                               std::uint64_t max_d,
                                                                               std::uint64_t seed = 20260101);

std::vector<VerificationReport> sieve_bound_check(std::uint64_t limit,
                                                  std::span<const std::pair<std::uint64_t, std::uint64_t>> samples,
                                                  std::uint64_t cutoff = 1000000,
                                                  const EngineConfig& engine = {});

struct Theorem1Result {
    VerificationReport report;
    std::optional<RangeSplit> split;  // prime-limit mode only
};

Theorem1Result theorem1_ratio(std::uint64_t limit, double alpha, LimitMode mode, const EngineConfig& engine = {});
// Several exponents over one stream (prime-limit mode).
std::vector<Theorem1Result> theorem1_ratios(std::uint64_t limit, std::span<const double> alphas,
                                            const EngineConfig& engine = {});

struct CorollaryResult {
    VerificationReport report;
    SumRun run;
};

CorollaryResult corollary_ratio(std::uint64_t index_limit, double c, const SumRunOptions& options = {});

}  // namespace gapsum
