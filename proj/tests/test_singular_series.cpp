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

#include "doctest.h"

#include <cmath>
#include <random>

#include "gapsum/errors.hpp"
#include "gapsum/singular_series.hpp"
#include "oracle.hpp"

using namespace gapsum;

namespace {

const double kC2 = static_cast<double>(kTwinPrimeConstant);

// prod_{p<=P} (1 - v/p)(1 - 1/p)^-k over every prime, no tail.
long double naive_truncated(const std::vector<std::uint64_t>& offsets, const std::vector<std::uint64_t>& primes) {
    const long double k = static_cast<long double>(offsets.size());
    long double prod = 1;
    for (auto p : primes) {
        const long double v = static_cast<long double>(oracle::residue_count(offsets, p));
        prod *= (1 - v / p) * std::pow(1 - 1.0L / p, -k);
    }
    return prod;
}

const std::vector<std::uint64_t>& primes_to_1e6() {
    static const auto ps = oracle::primes(1000000);
    return ps;
}

}  // namespace

TEST_SUITE("singular_series") {

TEST_CASE("residue counts") {
    CHECK(residue_count(TupleSpec{0, 2, 6}, 5) == 3);
    CHECK(residue_count(TupleSpec{0, 2, 4}, 3) == 3);
    CHECK(residue_count(TupleSpec{0, 2}, 2) == 1);
    CHECK_THROWS_AS(residue_count(TupleSpec{0, 2}, 4), ValidationError);
    CHECK_THROWS_AS(residue_count(TupleSpec{0, 2}, 1), ValidationError);
}

TEST_CASE("admissibility") {
    CHECK(is_admissible(TupleSpec{0, 2, 6}));
    CHECK_FALSE(is_admissible(TupleSpec{0, 2, 4}));
    CHECK(is_admissible(TupleSpec{0, 2}));
    CHECK_FALSE(is_admissible(TupleSpec{0, 1}));
    CHECK(is_admissible(TupleSpec{0}));
    CHECK(is_admissible(TupleSpec{0, 2, 6, 8, 12}));
    CHECK_FALSE(is_admissible(TupleSpec{0, 2, 6, 8, 10}));
}

TEST_CASE("admissibility matches residue enumeration") {
    std::mt19937_64 rng(11);
    const auto small = oracle::primes(20);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<std::uint64_t> off{0};
        const int k = 2 + static_cast<int>(rng() % 4);
        while (static_cast<int>(off.size()) < k) off.push_back(off.back() + 1 + rng() % 8);
        bool expect = true;
        for (auto p : small) expect = expect && oracle::residue_count(off, p) < p;
        CHECK(is_admissible(TupleSpec(off)) == expect);
    }
}

TEST_CASE("odd prime divisors") {
    CHECK(odd_prime_divisors(1).empty());
    CHECK(odd_prime_divisors(64).empty());
    CHECK(odd_prime_divisors(30030) == std::vector<std::uint64_t>{3, 5, 7, 11, 13});
    CHECK(odd_prime_divisors(2ULL * 4294967291ULL) == std::vector<std::uint64_t>{4294967291ULL});
    CHECK(odd_prime_divisors(4294967291ULL * 4294967279ULL) == std::vector<std::uint64_t>{4294967279ULL, 4294967291ULL});
    CHECK(odd_prime_divisors(18446744030759878681ULL) == std::vector<std::uint64_t>{4294967291ULL});
}

TEST_CASE("twin prime constant, coarse target") {
    const SingularValue c = twin_prime_constant(1e-3);
    CHECK(std::abs(c.value - kC2) <= 1e-3);
    CHECK(c.abs_error <= 1e-3);
    CHECK(c.truncation_prime > 0);

    // Two truncation orders agree within their summed bounds.
    const SingularValue a = twin_prime_product(c.truncation_prime, TailMode::truncated);
    const SingularValue b = twin_prime_product(10 * c.truncation_prime, TailMode::truncated);
    CHECK(std::abs(a.value - b.value) <= a.abs_error + b.abs_error);
}

TEST_CASE("twin prime product decreases with the cutoff") {
    const double v4 = twin_prime_product(10000, TailMode::truncated).value;
    const double v5 = twin_prime_product(100000, TailMode::truncated).value;
    const double v6 = twin_prime_product(1000000, TailMode::truncated).value;
    CHECK(v4 >= v5);
    CHECK(v5 >= v6);
    CHECK(v6 > kC2);
}

TEST_CASE("twin prime enclosures contain the constant") {
    for (std::uint64_t cutoff : {1000ULL, 100000ULL, 10000000ULL}) {
        const SingularValue t = twin_prime_product(cutoff, TailMode::truncated);
        CHECK(std::abs(t.value - kC2) <= t.abs_error);
    }
    for (std::uint64_t cutoff : {400000ULL, 4000000ULL}) {
        const SingularValue e = twin_prime_product(cutoff, TailMode::enclosed);
        CHECK(std::abs(e.value - kC2) <= e.abs_error);
        CHECK(e.abs_error < twin_prime_product(cutoff, TailMode::truncated).abs_error);
    }
    CHECK_THROWS_AS(twin_prime_product(1000, TailMode::enclosed), ValidationError);
    CHECK_THROWS_AS(twin_prime_product(2, TailMode::truncated), ValidationError);
}

TEST_CASE("twin prime constant against the Mobius prime-zeta oracle") {
    const long double oracle_c2 = oracle::twin_prime_constant_mobius();
    CHECK(std::abs(static_cast<double>(oracle_c2 - kTwinPrimeConstant)) < 1e-15);

    const SingularValue c = twin_prime_constant(1e-10);
    CHECK(c.abs_error <= 1e-10);
    CHECK(std::abs(c.value - static_cast<double>(oracle_c2)) <= c.abs_error + 1e-15);
    // cached
    CHECK(twin_prime_constant(1e-10).value == c.value);
}

TEST_CASE("twin prime constant precision limits") {
    CHECK_THROWS_AS(twin_prime_constant(1e-17), PrecisionError);
    CHECK_THROWS_AS(twin_prime_constant(0), ValidationError);
    CHECK_THROWS_AS(twin_prime_constant(-1), ValidationError);
    const SingularValue s = stored_twin_prime_constant();
    CHECK(s.value == kC2);
    CHECK(s.truncation_prime == 0);
}

TEST_CASE("pair singular series") {
    CHECK(pair_singular(1).value == 0);
    CHECK(pair_singular(1).abs_error == 0);
    CHECK(pair_singular(9).value == 0);
    CHECK(pair_singular(6).value == 2 * pair_singular(2).value);
    CHECK(pair_singular(2).value == pair_singular(4).value);
    CHECK(pair_singular(2).value == pair_singular(8).value);
    CHECK(pair_singular(2).value == doctest::Approx(2 * kC2).epsilon(1e-15));
    CHECK(pair_singular(30).value == doctest::Approx(2 * kC2 * 2 * 4.0 / 3).epsilon(1e-15));
    CHECK_THROWS_AS(pair_singular(0), ValidationError);
}

TEST_CASE("pair singular series depends only on the radical of the odd part") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 500; ++i) {
        const std::uint64_t d = 2 * (1 + rng() % 100000);
        std::uint64_t rad = 2;
        for (auto p : odd_prime_divisors(d)) rad *= p;
        CAPTURE(d);
        CHECK(pair_singular(d).value == pair_singular(rad).value);
        CHECK(pair_singular(d).value == pair_singular(4 * d).value);
    }
}

TEST_CASE("tuple singular series basics") {
    const SingularValue bad = tuple_singular(TupleSpec{0, 2, 4}, 1000);
    CHECK(bad.value == 0);
    CHECK(bad.abs_error == 0);
    CHECK(tuple_singular(TupleSpec{0, 1}, 1000).value == 0);
    CHECK_THROWS_AS(tuple_singular(TupleSpec{0, 2, 6, 8, 12}, 3), ValidationError);
    const SingularValue one = tuple_singular(TupleSpec{0}, 1000);
    CHECK(one.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("tuple singular pair agrees with pair singular") {
    for (std::uint64_t d : {2ULL, 6ULL, 10ULL, 30ULL, 210ULL}) {
        const SingularValue t = tuple_singular(TupleSpec{0, d}, 1000000);
        const SingularValue p = pair_singular(d);
        CAPTURE(d);
        CHECK(std::abs(t.value - p.value) <= t.abs_error + p.abs_error);
        CHECK(t.abs_error < 1e-4);
    }
}

TEST_CASE("tuple singular series against a naive product") {
    const auto& ps = primes_to_1e6();
    for (const auto& off : std::vector<std::vector<std::uint64_t>>{{0, 2, 6}, {0, 4, 6}, {0, 6, 12}, {0, 2, 6, 8}}) {
        const long double naive = naive_truncated(off, ps);
        const double k = static_cast<double>(off.size());
        const double naive_tail = static_cast<double>(naive) * k * (k + 1) / 1e6;
        for (std::uint64_t cutoff : {100ULL, 10000ULL}) {
            const SingularValue s = tuple_singular(TupleSpec(off), cutoff);
            CAPTURE(TupleSpec(off).to_string());
            CAPTURE(cutoff);
            CHECK(std::abs(s.value - static_cast<double>(naive)) <= s.abs_error + naive_tail);
            CHECK(s.abs_error > 0);
        }
    }
    // Prime triplet constant 2.8582485957...
    const SingularValue t = tuple_singular(TupleSpec{0, 2, 6}, 1000000);
    CHECK(std::abs(t.value - 2.8582485957192) <= t.abs_error + 1e-12);
}

TEST_CASE("tuple singular error shrinks with the cutoff") {
    const TupleSpec t{0, 2, 6};
    const double e1 = tuple_singular(t, 1000).abs_error;
    const double e2 = tuple_singular(t, 100000).abs_error;
    CHECK(e2 < e1);
}

TEST_CASE("tuple singular reflection symmetry") {
    for (std::uint64_t d = 2; d <= 60; d += 2) {
        for (std::uint64_t h = 1; h < d; ++h) {
            CAPTURE(d);
            CAPTURE(h);
            CHECK(tuple_singular(TupleSpec{0, h, d}, 1000).value == tuple_singular(TupleSpec{0, d - h, d}, 1000).value);
        }
    }
}

TEST_CASE("pair singular sum small cases") {
    CHECK(pair_singular_sum(3).total == doctest::Approx(2 * kC2).epsilon(1e-15));
    CHECK(pair_singular_sum(7).total == doctest::Approx(8 * kC2).epsilon(1e-15));
    const PairSumState two = pair_singular_sum(2);
    CHECK(two.error_term == doctest::Approx(2 * kC2 - 2 + std::log(2.0) / 2).epsilon(1e-14));
    CHECK(two.error_term == doctest::Approx(-0.333103).epsilon(1e-5));
    CHECK_THROWS_AS(pair_singular_sum(1), EmptyDomainError);
}

TEST_CASE("pair singular sum matches termwise sum") {
    const std::uint64_t x = 20000;
    long double naive = 0;
    for (std::uint64_t d = 1; d <= x; ++d) naive += pair_singular(d).value;
    const PairSumState s = pair_singular_sum(x);
    CHECK(s.total == doctest::Approx(static_cast<double>(naive)).epsilon(1e-13));
    CHECK(s.error_term == doctest::Approx(s.total - x + std::log(20000.0) / 2).epsilon(1e-12));
}

TEST_CASE("pair singular sum curve is non-decreasing and bounded") {
    const std::vector<std::uint64_t> grid{1000000, 10, 1000, 100000, 100};
    const auto curve = pair_singular_sum_curve(grid);
    REQUIRE(curve.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(curve[i].limit == grid[i]);
        CHECK(curve[i].total == doctest::Approx(pair_singular_sum(grid[i]).total).epsilon(1e-15));
    }
    CHECK(curve[0].total >= curve[3].total);
    CHECK(std::abs(curve[0].error_term) <= 2 * std::pow(std::log(1e6), 2.0 / 3.0));
}

TEST_CASE("triple row sums") {
    const TripleRowSum two = triple_row_sum(2, 1000);
    CHECK(two.sum == 0);
    CHECK(two.ratio == 0);

    const TripleRowSum six = triple_row_sum(6, 1000);
    const double s26 = tuple_singular(TupleSpec{0, 2, 6}, 1000).value;
    const double s46 = tuple_singular(TupleSpec{0, 4, 6}, 1000).value;
    CHECK(six.sum == doctest::Approx(s26 + s46).epsilon(1e-15));
    CHECK(six.ratio == doctest::Approx(six.sum / (6 * pair_singular(6).value)).epsilon(1e-15));

    for (std::uint64_t d : {30ULL, 64ULL, 210ULL}) {
        long double naive = 0, err = 0;
        for (std::uint64_t h = 1; h < d; ++h) {
            const SingularValue s = tuple_singular(TupleSpec{0, h, d}, 10000);
            naive += s.value;
            err += s.abs_error;
        }
        const TripleRowSum r = triple_row_sum(d, 10000);
        CAPTURE(d);
        CHECK(r.sum == doctest::Approx(static_cast<double>(naive)).epsilon(1e-12));
        CHECK(r.abs_error >= static_cast<double>(err) * 0.999);
    }
    CHECK_THROWS_AS(triple_row_sum(7, 1000), ValidationError);
    CHECK_THROWS_AS(triple_row_sum(0, 1000), ValidationError);
}

}  // TEST_SUITE
