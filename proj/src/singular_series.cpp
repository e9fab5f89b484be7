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

#include "gapsum/singular_series.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

#include "gapsum/compensated_sum.hpp"
#include "gapsum/errors.hpp"

namespace gapsum {

namespace {

constexpr long double kLdEps = LDBL_EPSILON;               // 2^-63
constexpr long double kDoubleRound = 0x1p-53L;             // final rounding to double
constexpr std::uint64_t kDusartThreshold = 355991;         // both prime-counting bounds valid past here
constexpr std::uint64_t kMaxCutoff = std::uint64_t{1} << 34;

// ---------------------------------------------------------------------------
// factoring helpers

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pollard_rho(std::uint64_t n) {
    for (std::uint64_t c = 1;; ++c) {
        std::uint64_t x = 2, y = 2, d = 1;
        auto f = [&](std::uint64_t v) { return (mulmod(v, v, n) + c) % n; };
        while (d == 1) {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x > y ? x - y : y - x, n);
        }
        if (d != n) return d;
    }
}

void factor_into(std::uint64_t n, std::vector<std::uint64_t>& out) {
    if (n == 1) return;
    if (is_prime_u64(n)) {
        out.push_back(n);
        return;
    }
    const std::uint64_t f = pollard_rho(n);
    factor_into(f, out);
    factor_into(n / f, out);
}

// ---------------------------------------------------------------------------
// twin prime constant

// Explicit prime-counting bounds, valid for x >= 355991 (upper) and
// x >= 88789 (lower).
long double pi_upper(long double x, long double log_x) {
    return x / log_x * (1 + 1 / log_x + 2.51L / (log_x * log_x));
}

long double pi_lower(long double x, long double log_x) {
    return x / log_x * (1 + 1 / log_x + 2 / (log_x * log_x));
}

// -log(1 - 1/(x-1)^2), decreasing for x > 2.
long double twin_log_term(long double x) {
    const long double t = x - 1;
    return -std::log1p(-1 / (t * t));
}

// Upper bound on sum_{p>P} -log(1 - 1/(p-1)^2), via -log(1-u) <= u/(1-u)
// = 1/(p(p-2)) telescoped over odd integers.
long double twin_tail_naive(std::uint64_t cutoff) {
    const std::uint64_t first_odd = (cutoff + 1) | 1;
    return 1 / (2 * static_cast<long double>(first_odd - 2));
}

struct Interval {
    long double lower = 0;
    long double upper = 0;
};

// Enclosure of sum_{p>P} g(p) by Abel summation over geometric blocks, with
// pi(x) replaced by explicit bounds at the block ends and pi(P) exact.
Interval twin_tail_enclosure(std::uint64_t cutoff, std::uint64_t pi_cutoff) {
    const long double ratio = 1 + 1e-4L;
    const long double x0 = static_cast<long double>(cutoff);
    const long double top = x0 * 0x1p30L;
    const long double pi0 = static_cast<long double>(pi_cutoff);

    BasicCompensatedSum<long double> lower, upper;
    long double magnitude = 0;

    long double g_prev = twin_log_term(x0);
    long double x = x0 * ratio;
    long double g_x = twin_log_term(x);
    std::uint64_t blocks = 1;

    lower.add(-pi0 * g_x);
    upper.add(-pi0 * g_prev);
    magnitude += pi0 * (g_x + g_prev);

    // Interior breakpoints x_1 .. x_{m-1}.
    while (x * ratio < top) {
        const long double next = x * ratio;
        const long double g_next = twin_log_term(next);
        const long double log_x = std::log(x);
        const long double lo_term = pi_lower(x, log_x) * (g_x - g_next);
        const long double hi_term = pi_upper(x, log_x) * (g_prev - g_x);
        lower.add(lo_term);
        upper.add(hi_term);
        magnitude += lo_term + hi_term;
        g_prev = g_x;
        x = next;
        g_x = g_next;
        ++blocks;
    }
    // x is now x_m = Y, g_prev = g(x_{m-1}).
    const long double log_top = std::log(x);
    const long double lo_end = pi_lower(x, log_top) * g_x;
    const long double hi_end = pi_upper(x, log_top) * g_prev;
    lower.add(lo_end);
    upper.add(hi_end);
    upper.add(twin_tail_naive(static_cast<std::uint64_t>(x)));
    magnitude += lo_end + hi_end;

    const long double slack = 16 * static_cast<long double>(blocks) * kLdEps * magnitude;
    Interval out{lower.value() - slack, upper.value() + slack};
    out.lower = std::max<long double>(out.lower, 0);
    return out;
}

// Running log of prod_{2<p<=P} (1 - 1/(p-1)^2). Each term is tiny, so the
// compensated sum keeps the absolute error near 2^-63 |sum|.
struct TwinLogProduct {
    BasicCompensatedSum<long double> log_sum;
    std::uint64_t factors = 0;

    void add_prime(std::uint64_t q) {
        log_sum.add(-twin_log_term(static_cast<long double>(q)));
        ++factors;
    }
};

SingularValue finish_twin(const TwinLogProduct& acc, std::uint64_t cutoff, TailMode mode) {
    const long double log_product = acc.log_sum.value();
    const long double product = std::exp(log_product);
    // log1p and argument rounding: <= 4 ulp per term; summation and exp: a few ulp overall.
    const long double rounding = 4 * kLdEps * (-log_product) + 8 * kLdEps;
    long double value = 0;
    long double err = 0;
    if (mode == TailMode::truncated) {
        const long double delta = twin_tail_naive(cutoff);
        value = product;
        err = product * -std::expm1(-delta);
    } else {
        const Interval tail = twin_tail_enclosure(cutoff, acc.factors + 1);
        value = product * std::exp(-(tail.lower + tail.upper) / 2);
        err = product * (std::exp(-tail.lower) - std::exp(-tail.upper)) / 2;
    }
    err += product * (rounding + kDoubleRound);
    return SingularValue{static_cast<double>(value), static_cast<double>(err * (1 + 1e-6L)), cutoff};
}

// ---------------------------------------------------------------------------
// generic tuple factors

struct GenericTable {
    std::uint64_t covered = 0;
    std::vector<std::uint32_t> primes;
    std::map<std::size_t, std::vector<long double>> prefix;  // by k; prefix[i] sums primes[0..i)
};

std::mutex g_table_mutex;
std::shared_ptr<const GenericTable> g_table;

std::shared_ptr<const GenericTable> generic_table(std::uint64_t cutoff, std::size_t k) {
    std::lock_guard lock(g_table_mutex);
    if (g_table && g_table->covered >= cutoff && g_table->prefix.count(k) != 0) return g_table;
    auto table = std::make_shared<GenericTable>();
    if (g_table) *table = *g_table;
    if (table->covered < cutoff) {
        if (cutoff > std::numeric_limits<std::uint32_t>::max()) throw CapacityError("truncation prime too large");
        const std::uint64_t covered = std::max<std::uint64_t>(cutoff, 2 * table->covered);
        table->primes = small_primes_up_to(static_cast<std::uint32_t>(
            std::min<std::uint64_t>(covered, std::numeric_limits<std::uint32_t>::max())));
        table->covered = covered;
        table->prefix.clear();
        if (g_table) {
            for (const auto& [kk, unused] : g_table->prefix) table->prefix[kk];
        }
    }
    table->prefix[k];
    for (auto& [kk, pre] : table->prefix) {
        if (pre.size() == table->primes.size() + 1) continue;
        pre.assign(table->primes.size() + 1, 0);
        BasicCompensatedSum<long double> acc;
        const long double kl = static_cast<long double>(kk);
        for (std::size_t i = 0; i < table->primes.size(); ++i) {
            const long double p = table->primes[i];
            if (table->primes[i] > kk) acc.add(std::log1p(-kl / p) - kl * std::log1p(-1 / p));
            pre[i + 1] = acc.value();
        }
    }
    g_table = table;
    return g_table;
}

std::size_t primes_at_most(const GenericTable& table, std::uint64_t x) {
    return static_cast<std::size_t>(std::upper_bound(table.primes.begin(), table.primes.end(), x) -
                                    table.primes.begin());
}

std::uint64_t residues_mod(std::span<const std::uint64_t> offsets, std::uint64_t p) {
    if (offsets.size() == 3) {
        const std::uint64_t a = offsets[1] % p;
        const std::uint64_t b = offsets[2] % p;
        return 1 + (a != 0) + (b != 0 && b != a);
    }
    std::vector<std::uint64_t> r;
    r.reserve(offsets.size());
    for (auto h : offsets) r.push_back(h % p);
    std::sort(r.begin(), r.end());
    return static_cast<std::uint64_t>(std::unique(r.begin(), r.end()) - r.begin());
}

}  // namespace

std::uint64_t residue_count(const TupleSpec& tuple, std::uint64_t p) {
    if (!is_prime_u64(p)) throw ValidationError("residue_count modulus " + std::to_string(p) + " is not prime");
    return residues_mod(tuple.offsets(), p);
}

bool is_admissible(const TupleSpec& tuple) {
    for (auto p : small_primes_up_to(static_cast<std::uint32_t>(tuple.k()))) {
        if (residues_mod(tuple.offsets(), p) == p) return false;
    }
    return true;
}

std::vector<std::uint64_t> odd_prime_divisors(std::uint64_t n) {
    if (n == 0) throw ValidationError("0 has no prime factorisation");
    while ((n & 1) == 0) n >>= 1;
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = 3; p < 1000 && p * p <= n; p += 2) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    factor_into(n, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

SingularValue twin_prime_product(std::uint64_t cutoff, TailMode mode, const EngineConfig& config) {
    if (cutoff < 3) throw ValidationError("twin prime product needs a cutoff of at least 3");
    if (cutoff >= kMaxLimit) throw CapacityError("cutoff exceeds the supported range");
    if (mode == TailMode::enclosed && cutoff < kDusartThreshold) {
        throw ValidationError("enclosed tail needs a cutoff of at least 355991");
    }
    TwinLogProduct acc;
    PrimeEngine(config).scan(3, cutoff, 0, [&](const SieveSegment& seg) {
        seg.for_each_prime([&](std::uint64_t q) { acc.add_prime(q); });
        return true;
    });
    return finish_twin(acc, cutoff, mode);
}

SingularValue twin_prime_constant(double target_error) {
    if (!(target_error > 0)) throw ValidationError("target error must be positive");
    if (target_error < 2e-16) throw PrecisionError("target error below double resolution of C_2");

    static std::mutex cache_mutex;
    static std::map<double, SingularValue> cache;
    {
        std::lock_guard lock(cache_mutex);
        if (auto it = cache.find(target_error); it != cache.end()) return it->second;
    }

    std::vector<std::uint64_t> ladder;
    for (std::uint64_t p = 256; p <= kMaxCutoff; p *= 2) ladder.push_back(p);

    TwinLogProduct acc;
    std::size_t rung = 0;
    bool found = false;
    SingularValue best;

    auto evaluate = [&](std::uint64_t cutoff) {
        SingularValue v = finish_twin(acc, cutoff, TailMode::truncated);
        if (cutoff >= kDusartThreshold) {
            SingularValue e = finish_twin(acc, cutoff, TailMode::enclosed);
            if (e.abs_error < v.abs_error) v = e;
        }
        if (v.abs_error <= target_error) {
            best = v;
            found = true;
        }
    };

    PrimeEngine(EngineConfig{}).scan(3, kMaxCutoff, 0, [&](const SieveSegment& seg) {
        seg.for_each_prime([&](std::uint64_t q) {
            if (found) return;
            while (rung < ladder.size() && q > ladder[rung] && !found) evaluate(ladder[rung++]);
            if (found) return;
            acc.add_prime(q);
        });
        return !found;
    });
    while (!found && rung < ladder.size()) evaluate(ladder[rung++]);
    if (!found) throw PrecisionError("cannot certify C_2 to the requested error within the cutoff ladder");

    std::lock_guard lock(cache_mutex);
    cache.emplace(target_error, best);
    return best;
}

SingularValue stored_twin_prime_constant() {
    const double v = static_cast<double>(kTwinPrimeConstant);
    return SingularValue{v, v * static_cast<double>(kDoubleRound), 0};
}

SingularValue pair_singular(std::uint64_t d) {
    if (d == 0) throw ValidationError("pair singular series needs d >= 1");
    if (d % 2 != 0) return SingularValue{0, 0, 0};
    const auto divisors = odd_prime_divisors(d);
    unsigned __int128 num = 1;
    unsigned __int128 den = 1;
    bool exact = true;
    long double fallback = 1;
    constexpr unsigned __int128 kCap = static_cast<unsigned __int128>(1) << 126;
    for (auto p : divisors) {
        fallback *= static_cast<long double>(p - 1) / static_cast<long double>(p - 2);
        if (exact && num < kCap / p && den < kCap / p) {
            num *= p - 1;
            den *= p - 2;
        } else {
            exact = false;
        }
    }
    long double value = 2 * kTwinPrimeConstant;
    long double rel = 2 * kLdEps;
    if (exact) {
        value = value * static_cast<long double>(num) / static_cast<long double>(den);
        rel += 4 * kLdEps;
    } else {
        value *= fallback;
        rel += (2 * static_cast<long double>(divisors.size()) + 2) * kLdEps;
    }
    const double out = static_cast<double>(value);
    return SingularValue{out, static_cast<double>(value * (rel + kDoubleRound)), 0};
}

SingularValue tuple_singular(const TupleSpec& tuple, std::uint64_t cutoff) {
    const std::size_t k = tuple.k();
    if (cutoff < k) throw ValidationError("truncation prime must be at least k");
    if (!is_admissible(tuple)) return SingularValue{0, 0, cutoff};

    const std::uint64_t h_max = tuple.span_width();
    const std::uint64_t eff = std::max<std::uint64_t>(cutoff, 2 * k);
    const auto table = generic_table(std::max(eff, h_max), k);
    const auto offsets = tuple.offsets();
    const long double kl = static_cast<long double>(k);

    // Exact factors: every p <= min(eff, h_max), plus p in (eff, h_max] that
    // divide a difference (v < k). Primes above h_max never divide one.
    long double exact = 1;
    std::uint64_t factors = 0;
    const std::size_t n_exact = primes_at_most(*table, h_max);
    for (std::size_t i = 0; i < n_exact; ++i) {
        const std::uint64_t p = table->primes[i];
        const std::uint64_t v = residues_mod(offsets, p);
        if (p > eff && v == k) continue;
        const long double pl = static_cast<long double>(p);
        long double f = (pl - static_cast<long double>(v)) / pl;
        const long double inv = pl / (pl - 1);
        for (std::size_t j = 0; j < k; ++j) f *= inv;
        exact *= f;
        ++factors;
    }
    long double generic = 1;
    if (eff > h_max) {
        const auto& pre = table->prefix.at(k);
        generic = std::exp(pre[primes_at_most(*table, eff)] - pre[n_exact]);
    }
    const long double value = exact * generic;
    // Each remaining log-factor lies in [-k(k+1)/p^2, 0]; sum_{p>P} p^-2 <= 1/(P-1).
    const long double tail = kl * (kl + 1) / static_cast<long double>(eff - 1);
    const long double rounding = ((kl + 3) * static_cast<long double>(factors) +
                                  4 * static_cast<long double>(primes_at_most(*table, eff))) * kLdEps + kDoubleRound;
    const long double err = value * (-std::expm1(-tail) + rounding);
    return SingularValue{static_cast<double>(value), static_cast<double>(err), cutoff};
}

std::vector<PairSumState> pair_singular_sum_curve(std::span<const std::uint64_t> grid) {
    if (grid.empty()) return {};
    for (auto x : grid) {
        if (x < 2) throw EmptyDomainError("pair singular sum needs X >= 2");
        if (x >= kMaxLimit) throw CapacityError("limit exceeds the supported range");
    }
    std::vector<std::uint64_t> order(grid.begin(), grid.end());
    std::sort(order.begin(), order.end());
    order.erase(std::unique(order.begin(), order.end()), order.end());

    // Even d = 2m; S({0,2m}) = 2 C_2 f(m), f(m) = prod_{p|m, p>2} (p-1)/(p-2).
    const std::uint64_t m_max = order.back() / 2;
    const auto small = small_primes_up_to(static_cast<std::uint32_t>(std::sqrt(static_cast<double>(m_max)) + 2));
    constexpr std::uint64_t kBlock = 1 << 16;
    std::vector<std::uint64_t> rem(kBlock);
    std::vector<double> f(kBlock);
    CompensatedSum acc;
    std::map<std::uint64_t, double> at_m;  // m -> sum f over 1..m
    std::size_t next = 0;

    for (std::uint64_t lo = 1; lo <= m_max; lo += kBlock) {
        const std::uint64_t hi = std::min(lo + kBlock - 1, m_max);
        const std::uint64_t len = hi - lo + 1;
        for (std::uint64_t i = 0; i < len; ++i) {
            std::uint64_t m = lo + i;
            m >>= std::countr_zero(m);
            rem[i] = m;
            f[i] = 1;
        }
        for (auto p32 : small) {
            const std::uint64_t p = p32;
            if (p == 2) continue;
            if (p * p > hi) break;
            const double r = static_cast<double>(p - 1) / static_cast<double>(p - 2);
            for (std::uint64_t m = (lo + p - 1) / p * p; m <= hi; m += p) {
                const std::uint64_t i = m - lo;
                f[i] *= r;
                do rem[i] /= p;
                while (rem[i] % p == 0);
            }
        }
        for (std::uint64_t i = 0; i < len; ++i) {
            if (rem[i] > 1) f[i] *= static_cast<double>(rem[i] - 1) / static_cast<double>(rem[i] - 2);
            acc.add(f[i]);
            const std::uint64_t m = lo + i;
            while (next < order.size() && order[next] / 2 == m) {
                at_m[m] = acc.value();
                ++next;
            }
        }
    }

    std::vector<PairSumState> out;
    out.reserve(grid.size());
    for (auto x : grid) {
        const long double s = at_m.at(x / 2);
        const double total = static_cast<double>(2 * kTwinPrimeConstant * s);
        const double e = total - static_cast<double>(x) + std::log(static_cast<double>(x)) / 2;
        out.push_back(PairSumState{x, total, e});
    }
    return out;
}

PairSumState pair_singular_sum(std::uint64_t limit) {
    const std::uint64_t grid[] = {limit};
    return pair_singular_sum_curve(grid).front();
}

TripleRowSum triple_row_sum(std::uint64_t d, std::uint64_t cutoff) {
    if (d < 2 || d % 2 != 0) throw ValidationError("triple row sum needs an even d >= 2");
    if (d == 2) return TripleRowSum{0, 0, 0};
    // Odd h leaves v(2) = 2; h and d - h give bitwise-equal values.
    BasicCompensatedSum<long double> sum;
    long double err = 0;
    for (std::uint64_t h = 2; 2 * h <= d; h += 2) {
        const SingularValue v = tuple_singular(TupleSpec{0, h, d}, cutoff);
        const long double mult = (2 * h == d) ? 1 : 2;
        sum.add(mult * v.value);
        err += mult * v.abs_error;
    }
    const double total = static_cast<double>(sum.value());
    const double ratio = total / (static_cast<double>(d) * pair_singular(d).value);
    return TripleRowSum{total, ratio, static_cast<double>(err)};
}

}  // namespace gapsum
