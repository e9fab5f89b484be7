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
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gapsum::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 1,
    kExitCapacity = 2,
};

// "1000000", "1_000_000", "1e6", "2.5e3". Must denote an exact non-negative
// integer below 2^64.
std::uint64_t parse_count(std::string_view text);

// "1e3:1e7:log" (decades from start to stop) or a comma list "10,300,1e4".
std::vector<std::uint64_t> parse_grid(std::string_view text);

// "2:6,4:10" -> {(2,6),(4,10)}
std::vector<std::pair<std::uint64_t, std::uint64_t>> parse_pairs(std::string_view text);

struct RunConfig {
    std::string command;
    std::uint64_t limit = 0;
    double alpha = 0;
    std::vector<double> alphas;
    double c = 2;
    std::uint64_t d = 0;
    std::vector<std::uint64_t> d_list;
    std::string offsets;
    std::uint64_t cutoff = 1000000;
    unsigned workers = 0;
    std::uint64_t segment_size = std::uint64_t{1} << 18;
    std::string format = "csv";
    std::string output;
    std::string checkpoint_dir;
    bool resume = false;
    std::string mode = "prime";
    std::string grid;
    std::string samples;
    std::uint64_t halt_after_segments = 0;

    // Lines for the '#' header of CSV output.
    std::vector<std::string> describe() const;
    // FNV-1a over the fields that determine a streamed result; excludes
    // workers, segment size, output options and the checkpoint location.
    std::uint64_t stream_hash() const;
};

// Parses argv and runs one command. The report goes to --output (summary to
// `out`) or, without --output, to `out` (summary to `err`).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gapsum::cli
