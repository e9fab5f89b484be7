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

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "gapsum/tuple_spec.hpp"

namespace gapsum {

// Declared capacity of the prime domain.
inline constexpr std::uint64_t kMaxLimit = std::uint64_t{1} << 63;
inline constexpr std::uint64_t kDefaultSegmentSlots = std::uint64_t{1} << 18;

struct EngineConfig {
    // 0 selects std::thread::hardware_concurrency().
    unsigned workers = 0;
    // Odd integers per segment; power of two, at least 64.
    std::uint64_t segment_slots = kDefaultSegmentSlots;

    unsigned effective_workers() const;
    void validate() const;
};

// One sieved block of odd integers. Slot i stands for lo + 1 + 2i. The body
// covers [lo, hi); the trailing pad slots are sieved as lookahead so tuple
// patterns can be matched across the boundary.
class SieveSegment {
  public:
    std::uint64_t lo() const { return lo_; }
    std::uint64_t hi() const { return hi_; }
    std::uint64_t slots() const { return slots_; }
    std::uint64_t padded_slots() const { return padded_slots_; }
    std::uint64_t number_at(std::uint64_t slot) const { return lo_ + 1 + 2 * slot; }

    bool composite_slot(std::uint64_t slot) const {
        return (composite_[slot >> 6] >> (slot & 63)) & 1;
    }

    // n must be odd and inside the padded range.
    bool is_prime(std::uint64_t n) const { return !composite_slot((n - lo_ - 1) / 2); }

    // Primality of slots [slot, slot + 64) as a word; slots past the padded
    // range read as composite.
    std::uint64_t prime_bits(std::uint64_t slot) const {
        const std::uint64_t q = slot >> 6;
        const unsigned r = slot & 63;
        std::uint64_t w = composite_[q] >> r;
        if (r != 0) w |= composite_[q + 1] << (64 - r);
        return ~w;
    }

    // Odd primes of the body, ascending.
    template <typename F>
    void for_each_prime(F&& f) const {
        const std::uint64_t words = (slots_ + 63) / 64;
        for (std::uint64_t w = 0; w < words; ++w) {
            std::uint64_t bits = ~composite_[w];
            if (w == words - 1 && (slots_ & 63) != 0) bits &= (std::uint64_t{1} << (slots_ & 63)) - 1;
            const std::uint64_t base = lo_ + 1 + 128 * w;
            while (bits != 0) {
                f(base + 2 * static_cast<std::uint64_t>(std::countr_zero(bits)));
                bits &= bits - 1;
            }
        }
    }

    std::uint64_t count_primes() const;

    std::span<const std::uint64_t> composite_words() const { return composite_; }

  private:
    friend class PrimeEngine;
    std::uint64_t lo_ = 0;
    std::uint64_t hi_ = 0;
    std::uint64_t slots_ = 0;
    std::uint64_t padded_slots_ = 0;
    // Bit set = composite. Two all-ones guard words follow the padded range.
    std::vector<std::uint64_t> composite_;
};

class PrimeEngine {
  public:
    using Consumer = std::function<bool(const SieveSegment&)>;

    explicit PrimeEngine(EngineConfig config = {});

    const EngineConfig& config() const { return config_; }

    // Sieves the odd integers of [start, limit] and hands segments to
    // `consumer` in increasing order on the calling thread, whatever the
    // worker count. Returning false from the consumer stops the scan.
    void scan(std::uint64_t start, std::uint64_t limit, std::uint64_t pad_slots,
              const Consumer& consumer) const;

  private:
    EngineConfig config_;
};

// Checks 2 <= limit < 2^63.
void check_limit(std::uint64_t limit);

// Deterministic for all 64-bit n.
bool is_prime_u64(std::uint64_t n);

// Simple non-segmented sieve, used for base primes and small tables.
std::vector<std::uint32_t> small_primes_up_to(std::uint32_t limit);

// Restart point for a prime stream: the next segment starts at next_lo,
// last_prime is the largest prime already emitted and n its index.
struct PrimeCursor {
    std::uint64_t next_lo = 0;
    std::uint64_t last_prime = 0;
    std::uint64_t n = 0;
};

// Emits every prime in (cursor.last_prime, limit] in order. Returns the
// cursor after the last completed segment.
PrimeCursor for_each_prime(std::uint64_t limit, const std::function<void(std::uint64_t)>& sink,
                           const EngineConfig& config = {}, PrimeCursor from = {});
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit, const EngineConfig& config = {});
std::uint64_t prime_count(std::uint64_t limit, const EngineConfig& config = {});

struct GapRecord {
    std::uint64_t n = 0;
    std::uint64_t p = 0;
    std::uint64_t p_next = 0;
    std::uint64_t d = 0;

    friend bool operator==(const GapRecord&, const GapRecord&) = default;
};

enum class LimitMode : std::uint8_t { prime = 0, index = 1 };

struct GapLimit {
    LimitMode mode = LimitMode::prime;
    std::uint64_t value = 0;

    static GapLimit prime(std::uint64_t x) { return {LimitMode::prime, x}; }
    static GapLimit index(std::uint64_t n) { return {LimitMode::index, n}; }
};

// Upper bound on p_{n} used to size index-limit scans.
std::uint64_t nth_prime_upper_bound(std::uint64_t n);

using GapCursor = PrimeCursor;

// Callback after each fully consumed segment; return false to halt (the
// cursor is then a valid resume point).
using SegmentHook = std::function<bool(const GapCursor&)>;

struct GapStreamResult {
    GapCursor cursor;
    bool completed = false;
};

// Streams consecutive-prime records in increasing n. Prime-limit mode emits
// records with p_{n+1} <= X; index-limit mode emits n = 1..N.
template <typename OnRecord>
GapStreamResult gap_stream(GapLimit limit, OnRecord&& on_record, const EngineConfig& config = {},
                           GapCursor from = {}, const SegmentHook& on_segment = {});

GapStreamResult gap_stream_fn(GapLimit limit, const std::function<void(const GapRecord&)>& on_record,
                              const EngineConfig& config = {}, GapCursor from = {},
                              const SegmentHook& on_segment = {});

std::vector<GapRecord> gap_records(GapLimit limit, const EngineConfig& config = {});

// pi(X; H): n with n + h_{k-1} <= X and every n + h_i prime.
std::uint64_t tuple_count(std::uint64_t limit, const TupleSpec& tuple, const EngineConfig& config = {});
// Same for many tuples in one sieve pass.
std::vector<std::uint64_t> tuple_counts(std::uint64_t limit, std::span<const TupleSpec> tuples,
                                        const EngineConfig& config = {});

struct GapHistogram {
    std::uint64_t limit = 0;
    std::map<std::uint64_t, std::uint64_t> counts;

    std::uint64_t count(std::uint64_t d) const {
        auto it = counts.find(d);
        return it == counts.end() ? 0 : it->second;
    }
    std::uint64_t total() const;
};

GapHistogram consecutive_gap_counts(std::uint64_t limit, const EngineConfig& config = {});

// ---------------------------------------------------------------------------

[[noreturn]] void throw_gap_domain(const char* what);

template <typename OnRecord>
GapStreamResult gap_stream(GapLimit limit, OnRecord&& on_record, const EngineConfig& config, GapCursor from,
                           const SegmentHook& on_segment) {
    std::uint64_t scan_limit = 0;
    std::uint64_t target_n = 0;
    if (limit.mode == LimitMode::prime) {
        if (limit.value < 3) throw_gap_domain("prime limit must be at least 3");
        check_limit(limit.value);
        scan_limit = limit.value;
    } else {
        if (limit.value < 1) throw_gap_domain("index limit must be at least 1");
        target_n = limit.value;
        scan_limit = nth_prime_upper_bound(target_n + 1);
        check_limit(scan_limit);
    }

    GapCursor cur = from;
    if (cur.last_prime == 0) cur = GapCursor{3, 2, 1};
    // Records emitted so far: cur.n - 1.
    if (limit.mode == LimitMode::index && cur.n - 1 > target_n) throw_gap_domain("cursor is past the index limit");
    bool done = limit.mode == LimitMode::index && cur.n - 1 == target_n;
    if (done) return {cur, true};

    const std::uint64_t start = cur.next_lo < 3 ? 3 : cur.next_lo;
    if (start > scan_limit) return {cur, true};

    bool halted = false;
    PrimeEngine engine(config);
    engine.scan(start, scan_limit, 0, [&](const SieveSegment& seg) {
        seg.for_each_prime([&](std::uint64_t q) {
            if (done || q <= cur.last_prime) return;
            GapRecord rec{cur.n, cur.last_prime, q, q - cur.last_prime};
            on_record(static_cast<const GapRecord&>(rec));
            cur.last_prime = q;
            ++cur.n;
            if (limit.mode == LimitMode::index && rec.n == target_n) done = true;
        });
        if (done) return false;
        cur.next_lo = seg.hi();
        if (on_segment && !on_segment(cur)) {
            halted = true;
            return false;
        }
        return true;
    });
    if (limit.mode == LimitMode::index && !done && !halted) throw_gap_domain("index scan ended early");
    return {cur, !halted};
}

}  // namespace gapsum
