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

// Slow, obviously-correct reference implementations. Nothing here calls the
// library.

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

namespace oracle {

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q = 2; q * q <= n; ++q) {
        if (n % q == 0) return false;
    }
    return true;
}

inline std::vector<std::uint64_t> primes(std::uint64_t limit) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = 2; n <= limit; ++n) {
        if (is_prime(n)) out.push_back(n);
    }
    return out;
}

// First `count` primes by trial division.
inline std::vector<std::uint64_t> first_primes(std::size_t count) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = 2; out.size() < count; ++n) {
        if (is_prime(n)) out.push_back(n);
    }
    return out;
}

// Plain byte-per-number Eratosthenes; a second implementation for limits
// where trial division is too slow.
inline std::uint64_t simple_sieve_count(std::uint64_t limit) {
    if (limit < 2) return 0;
    std::vector<bool> composite(limit + 1, false);
    std::uint64_t count = 0;
    for (std::uint64_t n = 2; n <= limit; ++n) {
        if (composite[n]) continue;
        ++count;
        for (std::uint64_t m = n * n; m <= limit; m += n) composite[m] = true;
    }
    return count;
}

struct Gap {
    std::uint64_t n, p, q, d;
};

// Prime-limit gaps: all n with p_{n+1} <= limit.
inline std::vector<Gap> gaps_prime_limit(std::uint64_t limit) {
    const auto ps = primes(limit);
    std::vector<Gap> out;
    for (std::size_t i = 0; i + 1 < ps.size(); ++i) out.push_back({i + 1, ps[i], ps[i + 1], ps[i + 1] - ps[i]});
    return out;
}

inline std::vector<Gap> gaps_index_limit(std::uint64_t n) {
    const auto ps = first_primes(n + 1);
    std::vector<Gap> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back({i + 1, ps[i], ps[i + 1], ps[i + 1] - ps[i]});
    return out;
}

inline std::uint64_t tuple_count(std::uint64_t limit, const std::vector<std::uint64_t>& offsets) {
    std::uint64_t count = 0;
    const std::uint64_t width = offsets.back();
    for (std::uint64_t n = 2; n + width <= limit; ++n) {
        bool all = true;
        for (auto h : offsets) {
            if (!is_prime(n + h)) {
                all = false;
                break;
            }
        }
        if (all) ++count;
    }
    return count;
}

inline std::map<std::uint64_t, std::uint64_t> gap_histogram(std::uint64_t limit) {
    std::map<std::uint64_t, std::uint64_t> h;
    for (const auto& g : gaps_prime_limit(limit)) ++h[g.d];
    return h;
}

// Naive long-double sums.
inline long double weighted_sum(const std::vector<Gap>& gaps, double alpha, std::uint64_t start) {
    long double s = 0;
    for (const auto& g : gaps) {
        if (g.n < start) continue;
        const long double d = g.d;
        s += std::pow(std::log(d), static_cast<long double>(alpha)) / d;
    }
    return s;
}

inline long double en_sum(std::uint64_t n_max, double c) {
    long double s = 0;
    for (const auto& g : gaps_index_limit(n_max)) {
        if (g.n < 3) continue;
        const long double n = g.n;
        s += 1.0L / (g.d * n * std::pow(std::log(std::log(n)), static_cast<long double>(c)));
    }
    return s;
}

inline std::uint64_t residue_count(const std::vector<std::uint64_t>& offsets, std::uint64_t p) {
    std::vector<bool> hit(p, false);
    std::uint64_t v = 0;
    for (auto h : offsets) {
        if (!hit[h % p]) {
            hit[h % p] = true;
            ++v;
        }
    }
    return v;
}

// ---------------------------------------------------------------------------
// C_2 by a route that never multiplies Euler factors beyond a small cutoff:
//
//   log(1 - 1/(p-1)^2) = -sum_{k>=2} (2^k - 2)/k p^{-k}
//   log C_2 = sum_{2<p<=Q} log(1 - 1/(p-1)^2) - sum_{k>=2} (2^k-2)/k P_Q(k)
//   P_Q(s) = sum_{p>Q} p^{-s} = sum_{m>=1} mu(m)/m log zeta_Q(m s)
//   zeta_Q(s) = zeta(s) prod_{p<=Q} (1 - p^{-s})
//
// zeta by Euler-Maclaurin in long double.

inline long double zeta(long double s) {
    constexpr int kN = 24;
    long double sum = 0;
    for (int n = 1; n < kN; ++n) sum += std::pow(static_cast<long double>(n), -s);
    const long double N = kN;
    sum += std::pow(N, 1 - s) / (s - 1) + std::pow(N, -s) / 2;
    // B_{2j}/(2j)!
    static constexpr long double kB[] = {1.0L / 12, -1.0L / 720, 1.0L / 30240, -1.0L / 1209600, 1.0L / 47900160,
                                         -691.0L / 1307674368000};
    long double rising = s;  // s (s+1) ... (s+2j-2)
    long double power = std::pow(N, -s - 1);
    for (int j = 0; j < 6; ++j) {
        sum += kB[j] * rising * power;
        rising *= (s + 2 * j + 1) * (s + 2 * j + 2);
        power /= N * N;
    }
    return sum;
}

inline int mobius(int m) {
    int mu = 1;
    for (int q = 2; q * q <= m; ++q) {
        if (m % q != 0) continue;
        m /= q;
        if (m % q == 0) return 0;
        mu = -mu;
    }
    if (m > 1) mu = -mu;
    return mu;
}

inline long double twin_prime_constant_mobius() {
    constexpr std::uint64_t kQ = 100;
    const auto small = primes(kQ);

    auto log_zeta_q = [&](long double s) {
        // Direct rough-number sum once zeta_Q(s) - 1 underflows the product.
        if (s > 12) {
            long double t = 0;
            for (std::uint64_t n = kQ + 1; n < 2000; ++n) {
                bool rough = true;
                for (auto p : small) {
                    if (n % p == 0) {
                        rough = false;
                        break;
                    }
                }
                if (rough) t += std::pow(static_cast<long double>(n), -s);
            }
            return std::log1p(t);
        }
        long double z = zeta(s);
        for (auto p : small) z *= 1 - std::pow(static_cast<long double>(p), -s);
        return std::log(z);
    };

    auto prime_zeta_q = [&](int k) {
        long double total = 0;
        for (int m = 1; m * k <= 400; ++m) {
            const int mu = mobius(m);
            if (mu == 0) continue;
            total += mu * log_zeta_q(static_cast<long double>(m) * k) / m;
        }
        return total;
    };

    long double log_c2 = 0;
    for (auto p : small) {
        if (p == 2) continue;
        const long double q = static_cast<long double>(p) - 1;
        log_c2 += std::log1p(-1 / (q * q));
    }
    for (int k = 2; k <= 40; ++k) log_c2 -= (std::ldexp(1.0L, k) - 2) / k * prime_zeta_q(k);
    return std::exp(log_c2);
}

}  // namespace oracle
