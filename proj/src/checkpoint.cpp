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

#include "gapsum/checkpoint.hpp"

#include <bit>
#include <fstream>
#include <iterator>

#include "gapsum/errors.hpp"
#include "gapsum/report_io.hpp"

namespace gapsum {

namespace {

constexpr std::string_view kMagic = "GSCK";
constexpr std::size_t kHeaderBytes = 88;
constexpr std::size_t kSnapshotBytes = 32;

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}

void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

class Reader {
  public:
    explicit Reader(std::string_view bytes) : bytes_(bytes) {}

    std::uint64_t u64() { return take(8); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(take(4)); }
    std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)); }
    double f64() { return std::bit_cast<double>(u64()); }
    void skip(std::size_t n) { pos_ += n; }

  private:
    std::uint64_t take(int n) {
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i) {
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        }
        pos_ += n;
        return v;
    }

    std::string_view bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string encode_checkpoint(const Checkpoint& cp) {
    std::string out;
    out.reserve(kHeaderBytes + kSnapshotBytes * cp.state.snapshots.size() + 8);
    out += kMagic;
    put_u32(out, kCheckpointVersion);
    out += static_cast<char>(cp.mode);
    out.append(7, '\0');
    put_u64(out, cp.config_hash);
    put_u64(out, cp.limit);
    put_u64(out, cp.state.cursor.next_lo);
    put_u64(out, cp.state.cursor.last_prime);
    put_u64(out, cp.state.cursor.n);
    put_u64(out, cp.state.terms);
    put_f64(out, cp.state.acc.sum);
    put_f64(out, cp.state.acc.carry);
    put_u64(out, cp.state.snapshots.size());
    for (const auto& s : cp.state.snapshots) {
        put_u64(out, s.limit_reached);
        put_f64(out, s.value);
        put_u64(out, s.terms);
        put_f64(out, s.compensation);
    }
    put_u64(out, fnv1a64(out));
    return out;
}

Checkpoint decode_checkpoint(std::string_view bytes) {
    if (bytes.size() < kHeaderBytes + 8) throw ValidationError("checkpoint is truncated");
    if (bytes.substr(0, 4) != kMagic) throw ValidationError("not a checkpoint file (bad magic)");

    Reader tail(bytes.substr(bytes.size() - 8));
    if (tail.u64() != fnv1a64(bytes.substr(0, bytes.size() - 8))) {
        throw ValidationError("checkpoint checksum mismatch (file is corrupt)");
    }

    Reader in(bytes);
    in.skip(4);
    const std::uint32_t version = in.u32();
    if (version != kCheckpointVersion) {
        throw ValidationError("unsupported checkpoint version " + std::to_string(version));
    }
    Checkpoint cp;
    const std::uint8_t mode = in.u8();
    if (mode > 1) throw ValidationError("checkpoint has an invalid limit mode");
    cp.mode = static_cast<LimitMode>(mode);
    in.skip(7);
    cp.config_hash = in.u64();
    cp.limit = in.u64();
    cp.state.cursor.next_lo = in.u64();
    cp.state.cursor.last_prime = in.u64();
    cp.state.cursor.n = in.u64();
    cp.state.terms = in.u64();
    cp.state.acc.sum = in.f64();
    cp.state.acc.carry = in.f64();
    const std::uint64_t count = in.u64();
    if (count > (bytes.size() - kHeaderBytes - 8) / kSnapshotBytes ||
        bytes.size() != kHeaderBytes + kSnapshotBytes * count + 8) {
        throw ValidationError("checkpoint size does not match its snapshot count");
    }
    for (std::uint64_t i = 0; i < count; ++i) {
        SumSnapshot s;
        s.mode = cp.mode;
        s.limit_reached = in.u64();
        s.value = in.f64();
        s.terms = in.u64();
        s.compensation = in.f64();
        cp.state.snapshots.push_back(s);
    }
    return cp;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& cp) {
    write_file_atomic(path, encode_checkpoint(cp));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot open checkpoint '" + path.string() + "'");
    const std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return decode_checkpoint(bytes);
}

}  // namespace gapsum
