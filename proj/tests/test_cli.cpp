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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gapsum/checkpoint.hpp"
#include "gapsum/cli.hpp"
#include "gapsum/errors.hpp"
#include "gapsum/gap_sums.hpp"
#include "gapsum/report_io.hpp"
#include "gapsum/singular_series.hpp"

using namespace gapsum;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "gapsum");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::filesystem::path scratch(const char* name) {
    auto dir = std::filesystem::temp_directory_path() / ("gapsum_cli_" + std::string(name));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("number parsing") {
    CHECK(cli::parse_count("1e9") == 1000000000ULL);
    CHECK(cli::parse_count("1_000_000") == 1000000ULL);
    CHECK(cli::parse_count("2.5e3") == 2500ULL);
    CHECK(cli::parse_count("1E+2") == 100ULL);
    CHECK(cli::parse_count("120e-1") == 12ULL);
    CHECK(cli::parse_count("18446744073709551615") == 18446744073709551615ULL);
    CHECK_THROWS_AS(cli::parse_count("1.5"), ValidationError);
    CHECK_THROWS_AS(cli::parse_count("-3"), ValidationError);
    CHECK_THROWS_AS(cli::parse_count("1e20"), ValidationError);
    CHECK_THROWS_AS(cli::parse_count("abc"), ValidationError);
    CHECK_THROWS_AS(cli::parse_count(""), ValidationError);
    CHECK_THROWS_AS(cli::parse_count("1e"), ValidationError);
}

TEST_CASE("grid parsing") {
    CHECK(cli::parse_grid("1e3:1e7:log") == std::vector<std::uint64_t>{1000, 10000, 100000, 1000000, 10000000});
    CHECK(cli::parse_grid("10,300,1e4") == std::vector<std::uint64_t>{10, 300, 10000});
    CHECK_THROWS_AS(cli::parse_grid("1e3:1e2:log"), ValidationError);
    CHECK_THROWS_AS(cli::parse_grid("1:10:lin"), ValidationError);
    CHECK_THROWS_AS(cli::parse_grid("10,5"), ValidationError);
    CHECK(cli::parse_pairs("2:6, 4:10") == std::vector<std::pair<std::uint64_t, std::uint64_t>>{{2, 6}, {4, 10}});
    CHECK_THROWS_AS(cli::parse_pairs("2-6"), ValidationError);
}

TEST_CASE("weighted-sum csv matches the library") {
    const Result r = run_cli({"weighted-sum", "--limit", "1e6", "--alpha", "0", "--mode", "prime", "--format", "csv"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("# gapsum run\n# command=weighted-sum\n", 0) == 0);
    const auto rows = read_snapshots_csv(r.out);
    const SumRun lib = weighted_gap_sum(WeightSpec{0}, GapLimit::prime(1000000));
    REQUIRE(rows.size() == lib.snapshots.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].limit_reached == lib.snapshots[i].limit_reached);
        CHECK(rows[i].value == lib.snapshots[i].value);
        CHECK(rows[i].terms == lib.snapshots[i].terms);
    }
    CHECK(r.err.find("value=") != std::string::npos);
}

TEST_CASE("singular-pair row") {
    const Result r = run_cli({"singular-pair", "--d", "6"});
    REQUIRE(r.code == 0);
    const auto rows = read_reports_csv(r.out);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].params["d"] == 6);
    CHECK(rows[0].empirical == 2 * pair_singular(2).value);
}

TEST_CASE("verify-lemma21 json") {
    const Result r = run_cli({"verify-lemma21", "--grid", "1e3:1e5:log", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 3);
    CHECK(j[0]["claim"] == "lemma21");
    CHECK(j[2]["params"]["X"] == 100000);
}

TEST_CASE("other commands run") {
    CHECK(run_cli({"sieve-stats", "--limit", "1000"}).code == 0);
    CHECK(run_cli({"gaps-histogram", "--limit", "1000"}).code == 0);
    CHECK(run_cli({"en-sum", "--limit", "1000", "--c", "3"}).code == 0);
    CHECK(run_cli({"singular-tuple", "--offsets", "0,2,6", "--P", "1e4"}).code == 0);
    CHECK(run_cli({"verify-lemma22", "--d-list", "30,210", "--P", "1e4"}).code == 0);
    CHECK(run_cli({"verify-conjecture1", "--limit", "1e5", "--d-list", "2,4,3"}).code == 0);
    CHECK(run_cli({"verify-sieve-bound", "--limit", "1e5", "--samples", "2:6,2:4"}).code == 0);
    CHECK(run_cli({"verify-theorem1", "--limit", "1e5", "--alpha", "-1,0,1"}).code == 0);
    CHECK(run_cli({"verify-theorem1", "--limit", "1e5", "--alpha", "1", "--mode", "index"}).code == 0);
    CHECK(run_cli({"verify-corollary", "--limit", "1e5", "--c", "2"}).code == 0);

    const Result s = run_cli({"sandwich", "--limit", "1e4", "--d-list", "2,4,6,8"});
    REQUIRE(s.code == 0);
    for (const auto& row : read_reports_csv(s.out)) CHECK(row.notes == "ok");

    const Result h = run_cli({"gaps-histogram", "--limit", "20"});
    const auto rows = read_reports_csv(h.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].params["d"] == 2);
    CHECK(rows[1].empirical == 4);
}

TEST_CASE("exit codes") {
    CHECK(run_cli({}).code == 1);
    CHECK(run_cli({"frobnicate"}).code == 1);
    const Result bad = run_cli({"weighted-sum", "--limit", "100", "--bogus"});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("Usage") != std::string::npos);
    CHECK(run_cli({"weighted-sum", "--limit", "100", "--alpha", "-2"}).code == 1);
    CHECK(run_cli({"weighted-sum", "--limit", "abc"}).code == 1);
    CHECK(run_cli({"weighted-sum"}).code == 1);
    CHECK(run_cli({"en-sum", "--limit", "2", "--c", "1"}).code == 1);
    CHECK(run_cli({"sieve-stats", "--limit", "1"}).code == 1);
    CHECK(run_cli({"sieve-stats", "--limit", "1e19"}).code == 2);
    CHECK(run_cli({"singular-pair", "--d", "0"}).code == 1);
    CHECK(run_cli({"sieve-stats", "--limit", "100", "--segment-size", "100"}).code == 1);
    CHECK(run_cli({"sieve-stats", "--limit", "100", "--format", "xml"}).code == 1);
    CHECK(run_cli({"weighted-sum", "--help"}).code == 0);
}

TEST_CASE("no partial output on failure") {
    const auto dir = scratch("partial");
    const auto path = dir / "out.csv";
    CHECK(run_cli({"weighted-sum", "--limit", "100", "--alpha", "-2", "--output", path.string()}).code == 1);
    CHECK_FALSE(std::filesystem::exists(path));
    const Result ok = run_cli({"weighted-sum", "--limit", "100", "--output", path.string()});
    CHECK(ok.code == 0);
    CHECK(std::filesystem::exists(path));
    CHECK(ok.out.find("wrote") != std::string::npos);
    CHECK(read_snapshots_csv(slurp(path)).back().limit_reached == 100);
}

TEST_CASE("GAPSUM_WORKERS overrides --workers") {
    ::setenv("GAPSUM_WORKERS", "3", 1);
    const Result r = run_cli({"sieve-stats", "--limit", "1e6", "--workers", "1"});
    CHECK(r.code == 0);
    CHECK(r.out.find("# workers=3") != std::string::npos);
    ::setenv("GAPSUM_WORKERS", "zero", 1);
    CHECK(run_cli({"sieve-stats", "--limit", "100"}).code == 1);
    ::unsetenv("GAPSUM_WORKERS");
}

TEST_CASE("halt, resume and refusal") {
    const auto dir = scratch("resume");
    const std::string ck = (dir / "ck").string();
    const std::string full = (dir / "full.csv").string();
    const std::string part = (dir / "part.csv").string();
    const std::string rest = (dir / "rest.csv").string();

    REQUIRE(run_cli({"weighted-sum", "--limit", "3e6", "--alpha", "0.5", "--output", full}).code == 0);

    const Result halted = run_cli({"weighted-sum", "--limit", "3e6", "--alpha", "0.5", "--checkpoint-dir", ck,
                                   "--halt-after-segments", "2", "--segment-size", "4096", "--output", part});
    CHECK(halted.code == 0);
    CHECK(halted.out.find("halted") != std::string::npos);
    CHECK_FALSE(std::filesystem::exists(part));
    REQUIRE(std::filesystem::exists(dir / "ck" / "weighted-sum.gsck"));
    CHECK(load_checkpoint(dir / "ck" / "weighted-sum.gsck").state.cursor.n > 1);

    // Different alpha: refused.
    CHECK(run_cli({"weighted-sum", "--limit", "3e6", "--alpha", "1", "--checkpoint-dir", ck, "--resume"}).code == 1);
    // Different worker count and segment size: allowed.
    REQUIRE(run_cli({"weighted-sum", "--limit", "3e6", "--alpha", "0.5", "--checkpoint-dir", ck, "--resume",
                     "--workers", "4", "--output", rest})
                .code == 0);
    CHECK(read_snapshots_csv(slurp(full)) == read_snapshots_csv(slurp(rest)));

    // Corrupt checkpoint: refused.
    {
        std::fstream f(dir / "ck" / "weighted-sum.gsck", std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(40);
        f.put('\x7f');
    }
    const Result corrupt =
        run_cli({"weighted-sum", "--limit", "3e6", "--alpha", "0.5", "--checkpoint-dir", ck, "--resume"});
    CHECK(corrupt.code == 1);
    CHECK(corrupt.err.find("corrupt") != std::string::npos);

    CHECK(run_cli({"weighted-sum", "--limit", "3e6", "--resume"}).code == 1);
    CHECK(run_cli({"en-sum", "--limit", "1000", "--c", "3", "--checkpoint-dir", (dir / "none").string(), "--resume"})
              .code == 1);
}

TEST_CASE("config hash ignores parallelism") {
    cli::RunConfig a;
    a.command = "weighted-sum";
    a.limit = 100;
    cli::RunConfig b = a;
    b.workers = 7;
    b.segment_size = 1024;
    b.output = "x";
    CHECK(a.stream_hash() == b.stream_hash());
    b.alpha = 1;
    CHECK(a.stream_hash() != b.stream_hash());
    cli::RunConfig c = a;
    c.mode = "index";
    CHECK(a.stream_hash() != c.stream_hash());
}

}  // TEST_SUITE
