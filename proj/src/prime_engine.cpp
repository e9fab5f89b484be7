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

#include "gapsum/prime_engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <condition_variable>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "gapsum/errors.hpp"

namespace gapsum {

namespace {

// Pre-sieve pattern for 3, 5, 7, 11, 13 over global odd slots (slot g is
// 2g + 1). Period 15015 slots; stored over lcm(15015, 64) bits so that word
// boundaries line up on wrap.
constexpr std::uint64_t kPresievePeriodBits = 15015 * 64;
constexpr std::uint64_t kPresieveWords = 15015;
constexpr std::uint32_t kPresievePrimes[] = {3, 5, 7, 11, 13};

const std::vector<std::uint64_t>& presieve_pattern() {
    static const std::vector<std::uint64_t> pattern = [] {
        std::vector<std::uint64_t> words(kPresieveWords + 1, 0);
        for (std::uint64_t g = 0; g < kPresievePeriodBits; ++g) {
            const std::uint64_t n = 2 * g + 1;
            for (auto p : kPresievePrimes) {
                if (n % p == 0) {
                    words[g >> 6] |= std::uint64_t{1} << (g & 63);
                    break;
                }
            }
        }
        words[kPresieveWords] = words[0];
        return words;
    }();
    return pattern;
}

std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1;
    a %= m;
    while (e != 0) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

class SegmentSieve {
  public:
    SegmentSieve(std::uint64_t lo0, std::uint64_t limit, std::uint64_t slots_per_segment,
                 std::uint64_t pad_slots, const std::vector<std::uint32_t>& base_primes)
        : lo0_(lo0),
          limit_(limit),
          span_(2 * slots_per_segment),
          pad_slots_(pad_slots),
          base_primes_(base_primes) {}

    std::uint64_t segment_count() const { return (limit_ + 1 - lo0_ + span_ - 1) / span_; }

    void fill(std::uint64_t index, std::uint64_t& lo, std::uint64_t& hi, std::uint64_t& slots,
              std::uint64_t& padded_slots, std::vector<std::uint64_t>& bits) const {
        lo = lo0_ + index * span_;
        hi = std::min(lo + span_, limit_ + 1);
        slots = (hi - lo) / 2;
        const std::uint64_t padded_end = std::min(hi + 2 * pad_slots_, limit_ + 1);
        padded_slots = (padded_end - lo) / 2;

        const std::uint64_t words = (padded_slots + 63) / 64;
        bits.assign(words + 2, ~std::uint64_t{0});

        const auto& pattern = presieve_pattern();
        const std::uint64_t offset = (lo / 2) % kPresievePeriodBits;
        std::uint64_t q = offset >> 6;
        const unsigned r = offset & 63;
        for (std::uint64_t w = 0; w < words; ++w) {
            std::uint64_t v = pattern[q] >> r;
            if (r != 0) v |= pattern[q + 1] << (64 - r);
            bits[w] = v;
            if (++q == kPresieveWords) q = 0;
        }
        if ((padded_slots & 63) != 0) bits[words - 1] |= ~std::uint64_t{0} << (padded_slots & 63);

        const std::uint64_t first = lo + 1;
        const std::uint64_t last = lo + 2 * padded_slots - 1;
        for (auto p : kPresievePrimes) {
            if (p >= first && p <= last) clear(bits, (p - first) / 2);
        }
        if (first == 1 && padded_slots > 0) set(bits, 0);

        for (std::uint32_t p32 : base_primes_) {
            const std::uint64_t p = p32;
            if (p <= 13) continue;
            const std::uint64_t sq = p * p;
            if (sq > last) break;
            std::uint64_t m = sq;
            if (m < first) {
                m = (first + p - 1) / p * p;
                if ((m & 1) == 0) m += p;
            }
            for (std::uint64_t s = (m - first) / 2; s < padded_slots; s += p) set(bits, s);
        }
    }

  private:
    static void set(std::vector<std::uint64_t>& bits, std::uint64_t s) {
        bits[s >> 6] |= std::uint64_t{1} << (s & 63);
    }
    static void clear(std::vector<std::uint64_t>& bits, std::uint64_t s) {
        bits[s >> 6] &= ~(std::uint64_t{1} << (s & 63));
    }

    std::uint64_t lo0_;
    std::uint64_t limit_;
    std::uint64_t span_;
    std::uint64_t pad_slots_;
    const std::vector<std::uint32_t>& base_primes_;
};

}  // namespace

[[noreturn]] void throw_gap_domain(const char* what) { throw EmptyDomainError(what); }

unsigned EngineConfig::effective_workers() const {
    if (workers != 0) return workers;
    return std::max(1u, std::thread::hardware_concurrency());
}

void EngineConfig::validate() const {
    if (segment_slots < 64 || !std::has_single_bit(segment_slots)) {
        throw ValidationError("segment size must be a power of two of at least 64 slots");
    }
    if (segment_slots > (std::uint64_t{1} << 32)) throw CapacityError("segment size too large");
}

std::uint64_t SieveSegment::count_primes() const {
    const std::uint64_t words = slots_ / 64;
    std::uint64_t n = 0;
    for (std::uint64_t w = 0; w < words; ++w) n += std::popcount(~composite_[w]);
    if ((slots_ & 63) != 0) {
        n += std::popcount(~composite_[words] & ((std::uint64_t{1} << (slots_ & 63)) - 1));
    }
    return n;
}

PrimeEngine::PrimeEngine(EngineConfig config) : config_(config) { config_.validate(); }

void PrimeEngine::scan(std::uint64_t start, std::uint64_t limit, std::uint64_t pad_slots,
                       const Consumer& consumer) const {
    check_limit(limit);
    if (start > limit) return;
    const std::uint64_t lo0 = start & ~std::uint64_t{1};
    const auto base_primes = small_primes_up_to(static_cast<std::uint32_t>(isqrt(limit)));
    const SegmentSieve sieve(lo0, limit, config_.segment_slots, pad_slots, base_primes);
    const std::uint64_t nseg = sieve.segment_count();

    auto fill = [&](std::uint64_t s, SieveSegment& seg) {
        sieve.fill(s, seg.lo_, seg.hi_, seg.slots_, seg.padded_slots_, seg.composite_);
    };

    const std::uint64_t workers = std::min<std::uint64_t>(config_.effective_workers(), nseg);
    if (workers <= 1) {
        SieveSegment seg;
        for (std::uint64_t s = 0; s < nseg; ++s) {
            fill(s, seg);
            if (!consumer(seg)) return;
        }
        return;
    }

    struct Slot {
        SieveSegment seg;
        std::uint64_t index = 0;
        bool ready = false;
    };
    const std::uint64_t ring = 2 * workers;
    std::vector<Slot> slots(ring);
    std::mutex mu;
    std::condition_variable cv;
    std::uint64_t next = 0;
    std::uint64_t consumed = 0;
    bool stop = false;
    std::exception_ptr worker_error;

    auto work = [&] {
        for (;;) {
            std::uint64_t s = 0;
            {
                std::unique_lock lock(mu);
                cv.wait(lock, [&] { return stop || next >= nseg || next < consumed + ring; });
                if (stop || next >= nseg) return;
                s = next++;
            }
            Slot& slot = slots[s % ring];
            try {
                fill(s, slot.seg);
            } catch (...) {
                std::lock_guard lock(mu);
                worker_error = std::current_exception();
                stop = true;
                cv.notify_all();
                return;
            }
            {
                std::lock_guard lock(mu);
                slot.index = s;
                slot.ready = true;
            }
            cv.notify_all();
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(workers);
    auto shutdown = [&] {
        {
            std::lock_guard lock(mu);
            stop = true;
        }
        cv.notify_all();
        for (auto& t : threads) t.join();
        threads.clear();
    };
    for (std::uint64_t i = 0; i < workers; ++i) threads.emplace_back(work);

    try {
        for (std::uint64_t s = 0; s < nseg; ++s) {
            Slot& slot = slots[s % ring];
            {
                std::unique_lock lock(mu);
                cv.wait(lock, [&] { return stop || (slot.ready && slot.index == s); });
                if (stop) break;
            }
            const bool keep = consumer(slot.seg);
            {
                std::lock_guard lock(mu);
                slot.ready = false;
                ++consumed;
                if (!keep) stop = true;
            }
            cv.notify_all();
            if (!keep) break;
        }
    } catch (...) {
        shutdown();
        throw;
    }
    shutdown();
    if (worker_error) std::rethrow_exception(worker_error);
}

void check_limit(std::uint64_t limit) {
    if (limit < 2) throw EmptyDomainError("limit must be at least 2");
    if (limit >= kMaxLimit) throw CapacityError("limit exceeds the supported range 2^63");
}

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::vector<std::uint32_t> small_primes_up_to(std::uint32_t limit) {
    std::vector<std::uint32_t> primes;
    if (limit < 2) return primes;
    primes.push_back(2);
    const std::uint32_t half = (limit - 1) / 2;  // odd numbers 3..limit
    std::vector<char> composite(half + 1, 0);
    for (std::uint64_t i = 1; i <= half; ++i) {
        if (composite[i]) continue;
        const std::uint64_t p = 2 * i + 1;
        primes.push_back(static_cast<std::uint32_t>(p));
        for (std::uint64_t j = (p * p - 1) / 2; j <= half; j += p) composite[j] = 1;
    }
    return primes;
}

PrimeCursor for_each_prime(std::uint64_t limit, const std::function<void(std::uint64_t)>& sink,
                           const EngineConfig& config, PrimeCursor from) {
    check_limit(limit);
    PrimeCursor cur = from;
    if (cur.last_prime == 0) {
        sink(2);
        cur = PrimeCursor{3, 2, 1};
    }
    const std::uint64_t start = std::max<std::uint64_t>(cur.next_lo, 3);
    PrimeEngine(config).scan(start, limit, 0, [&](const SieveSegment& seg) {
        seg.for_each_prime([&](std::uint64_t q) {
            if (q <= cur.last_prime) return;
            sink(q);
            cur.last_prime = q;
            ++cur.n;
        });
        cur.next_lo = seg.hi();
        return true;
    });
    return cur;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit, const EngineConfig& config) {
    std::vector<std::uint64_t> out;
    for_each_prime(limit, [&](std::uint64_t p) { out.push_back(p); }, config);
    return out;
}

std::uint64_t prime_count(std::uint64_t limit, const EngineConfig& config) {
    check_limit(limit);
    std::uint64_t count = 1;
    PrimeEngine(config).scan(3, limit, 0, [&](const SieveSegment& seg) {
        count += seg.count_primes();
        return true;
    });
    return count;
}

std::uint64_t nth_prime_upper_bound(std::uint64_t n) {
    if (n < 6) return 13;
    // p_n < n (ln n + ln ln n) for n >= 6.
    const long double x = static_cast<long double>(n);
    const long double bound = x * (std::log(x) + std::log(std::log(x)));
    if (bound >= static_cast<long double>(kMaxLimit)) throw CapacityError("index limit exceeds the supported range");
    return static_cast<std::uint64_t>(bound) + 1;
}

GapStreamResult gap_stream_fn(GapLimit limit, const std::function<void(const GapRecord&)>& on_record,
                              const EngineConfig& config, GapCursor from, const SegmentHook& on_segment) {
    return gap_stream(limit, on_record, config, from, on_segment);
}

std::vector<GapRecord> gap_records(GapLimit limit, const EngineConfig& config) {
    std::vector<GapRecord> out;
    gap_stream(limit, [&](const GapRecord& r) { out.push_back(r); }, config);
    return out;
}

std::vector<std::uint64_t> tuple_counts(std::uint64_t limit, std::span<const TupleSpec> tuples,
                                        const EngineConfig& config) {
    check_limit(limit);
    std::vector<std::uint64_t> counts(tuples.size(), 0);
    std::vector<std::vector<std::uint64_t>> halves;  // per even tuple, offsets / 2
    std::vector<std::size_t> even_index;
    std::uint64_t pad = 0;
    for (std::size_t t = 0; t < tuples.size(); ++t) {
        const TupleSpec& tuple = tuples[t];
        if (limit < tuple.span_width() + 2) {
            throw ValidationError("limit must be at least h_{k-1} + 2 for tuple " + tuple.to_string());
        }
        // n = 2 is the only even candidate.
        bool two_fits = 2 + tuple.span_width() <= limit;
        for (auto h : tuple.offsets()) two_fits = two_fits && is_prime_u64(2 + h);
        if (two_fits) counts[t] = 1;
        if (tuple.all_even()) {
            std::vector<std::uint64_t> hv;
            for (std::size_t i = 1; i < tuple.k(); ++i) hv.push_back(tuple.offsets()[i] / 2);
            pad = std::max(pad, tuple.span_width() / 2);
            halves.push_back(std::move(hv));
            even_index.push_back(t);
        }
    }
    if (even_index.empty() || limit < 3) return counts;

    PrimeEngine(config).scan(3, limit, pad, [&](const SieveSegment& seg) {
        const std::uint64_t slots = seg.slots();
        const std::uint64_t words = (slots + 63) / 64;
        const std::uint64_t tail_mask =
            (slots & 63) == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << (slots & 63)) - 1;
        for (std::size_t e = 0; e < even_index.size(); ++e) {
            const auto& hv = halves[e];
            std::uint64_t c = 0;
            for (std::uint64_t w = 0; w < words; ++w) {
                std::uint64_t acc = seg.prime_bits(64 * w);
                for (auto h : hv) acc &= seg.prime_bits(64 * w + h);
                if (w == words - 1) acc &= tail_mask;
                c += static_cast<std::uint64_t>(std::popcount(acc));
            }
            counts[even_index[e]] += c;
        }
        return true;
    });
    return counts;
}

std::uint64_t tuple_count(std::uint64_t limit, const TupleSpec& tuple, const EngineConfig& config) {
    return tuple_counts(limit, std::span<const TupleSpec>(&tuple, 1), config).front();
}

std::uint64_t GapHistogram::total() const {
    std::uint64_t n = 0;
    for (const auto& [d, c] : counts) n += c;
    return n;
}

GapHistogram consecutive_gap_counts(std::uint64_t limit, const EngineConfig& config) {
    if (limit < 3) throw EmptyDomainError("gap histogram needs a limit of at least 3");
    std::vector<std::uint64_t> by_gap(64, 0);
    gap_stream(
        GapLimit::prime(limit),
        [&](const GapRecord& r) {
            if (r.d >= by_gap.size()) by_gap.resize(2 * r.d, 0);
            ++by_gap[r.d];
        },
        config);
    GapHistogram hist;
    hist.limit = limit;
    for (std::uint64_t d = 0; d < by_gap.size(); ++d) {
        if (by_gap[d] != 0) hist.counts.emplace(d, by_gap[d]);
    }
    return hist;
}

}  // namespace gapsum
