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
#include <filesystem>
#include <string>
#include <string_view>

#include "gapsum/gap_sums.hpp"

namespace gapsum {

// On-disk layout, all integers little-endian, reals as IEEE-754 bit patterns:
//
//   offset  size  field
//   0       4     magic "GSCK"
//   4       4     u32 format version (kCheckpointVersion)
//   8       1     u8  limit mode (0 prime, 1 index)
//   9       7     zero padding
//   16      8     u64 config hash
//   24      8     u64 limit value
//   32      8     u64 cursor.next_lo (first number of the next segment)
//   40      8     u64 cursor.last_prime (boundary prime)
//   48      8     u64 cursor.n (index of the next gap)
//   56      8     u64 terms
//   64      8     f64 accumulator sum
//   72      8     f64 accumulator carry
//   80      8     u64 snapshot count S
//   88      32*S  snapshots: u64 limit_reached, f64 value, u64 terms, f64 compensation
//   ...     8     u64 FNV-1a 64 of every preceding byte
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
    LimitMode mode = LimitMode::prime;
    std::uint64_t config_hash = 0;
    std::uint64_t limit = 0;
    StreamState state;
};

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

std::string encode_checkpoint(const Checkpoint& cp);
// Throws ValidationError on bad magic, version, size or checksum.
Checkpoint decode_checkpoint(std::string_view bytes);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& cp);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace gapsum
