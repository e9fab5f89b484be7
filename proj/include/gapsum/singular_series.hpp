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
#include <span>
#include <vector>

#include "gapsum/prime_engine.hpp"
#include "gapsum/tuple_spec.hpp"

namespace gapsum {

// A singular-series value with a certified enclosure
// [value - abs_error, value + abs_error]. truncation_prime is the Euler
// product cutoff, or 0 when the value is exact relative to stored constants.
struct SingularValue {
    double value = 0;
    double abs_error = 0;
    std::uint64_t truncation_prime = 0;
};

// C_2 = prod_{p>2} (1 - 1/(p-1)^2), 38 digits.
inline constexpr long double kTwinPrimeConstant = 0.66016181584686957392781211001455577843L;

// Number of residue classes mod p hit by the tuple. Throws ValidationError
// when p is not prime.
std::uint64_t residue_count(const TupleSpec& tuple, std::uint64_t p);

// v(p) < p for every prime p <= k.
bool is_admissible(const TupleSpec& tuple);

// Distinct odd prime divisors of n, ascending.
std::vector<std::uint64_t> odd_prime_divisors(std::uint64_t n);

enum class TailMode {
    // Plain truncated product; bound from sum_{p>P} 1/(p(p-2)) <= 1/(2(P-1)).
    truncated,
    // Truncated product times an enclosure of the tail built from explicit
    // prime-counting bounds; needs P >= 355991.
    enclosed,
};

// prod_{2<p<=P} (1 - 1/(p-1)^2) with a certified error for the full product.
SingularValue twin_prime_product(std::uint64_t cutoff, TailMode mode, const EngineConfig& config = {});

// Certified C_2 with abs_error <= target_error, cached per target. Throws
// PrecisionError below what double output and the cutoff ladder can certify.
SingularValue twin_prime_constant(double target_error);

// The stored constant as a SingularValue (exact relative to storage).
SingularValue stored_twin_prime_constant();

// S({0,d}): 0 for odd d, 2 C_2 prod_{p|d,p>2} (p-1)/(p-2) for even d.
SingularValue pair_singular(std::uint64_t d);

// Euler product over p <= P (and primes dividing a difference of the tuple)
// with a certified bound for the remaining tail.
SingularValue tuple_singular(const TupleSpec& tuple, std::uint64_t cutoff);

struct PairSumState {
    std::uint64_t limit = 0;
    double total = 0;        // sum_{d<=X} S({0,d})
    double error_term = 0;   // total - X + (log X)/2
};

PairSumState pair_singular_sum(std::uint64_t limit);
// One sweep up to max(grid); grid need not be sorted.
std::vector<PairSumState> pair_singular_sum_curve(std::span<const std::uint64_t> grid);

struct TripleRowSum {
    double sum = 0;
    double ratio = 0;
    double abs_error = 0;
};

// sum_{h=1}^{d-1} S({0,h,d}) and its ratio to d S({0,d}).
TripleRowSum triple_row_sum(std::uint64_t d, std::uint64_t cutoff);

}  // namespace gapsum
