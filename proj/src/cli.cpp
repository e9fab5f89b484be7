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

#include "gapsum/cli.hpp"

#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <ostream>

#include "CLI11.hpp"

#include "gapsum/checkpoint.hpp"
#include "gapsum/errors.hpp"
#include "gapsum/gap_sums.hpp"
#include "gapsum/prime_engine.hpp"
#include "gapsum/report_io.hpp"
#include "gapsum/singular_series.hpp"
#include "gapsum/verification.hpp"

namespace gapsum::cli {

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string real_text(double v) { return format_real(v); }

std::string join_u64(const std::vector<std::uint64_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(v[i]);
    }
    return s;
}

// Everything a command produces: either snapshot rows or report rows, plus
// human-readable summary lines.
struct Output {
    bool snapshots = false;
    std::vector<SumSnapshot> snapshot_rows;
    std::vector<VerificationReport> report_rows;
    std::vector<std::string> summary;
    bool halted = false;
};

class Runner {
  public:
    explicit Runner(const RunConfig& cfg) : cfg_(cfg) {
        engine_.workers = cfg.workers;
        engine_.segment_slots = cfg.segment_size;
        engine_.validate();
    }

    Output run() {
        static const std::map<std::string, Output (Runner::*)()> table{
            {"sieve-stats", &Runner::sieve_stats},
            {"gaps-histogram", &Runner::gaps_histogram},
            {"weighted-sum", &Runner::weighted_sum},
            {"en-sum", &Runner::en_sum},
            {"singular-pair", &Runner::singular_pair},
            {"singular-tuple", &Runner::singular_tuple},
            {"verify-lemma21", &Runner::verify_lemma21},
            {"verify-lemma22", &Runner::verify_lemma22},
            {"verify-conjecture1", &Runner::verify_conjecture1},
            {"verify-sieve-bound", &Runner::verify_sieve_bound},
            {"verify-theorem1", &Runner::verify_theorem1},
            {"verify-corollary", &Runner::verify_corollary},
            {"sandwich", &Runner::sandwich},
        };
        return (this->*table.at(cfg_.command))();
    }

  private:
    std::uint64_t need_limit() const {
        if (cfg_.limit == 0) throw ValidationError(cfg_.command + " needs --limit");
        return cfg_.limit;
    }

    std::vector<std::uint64_t> d_values(std::vector<std::uint64_t> fallback) const {
        if (!cfg_.d_list.empty()) return cfg_.d_list;
        if (cfg_.d != 0) return {cfg_.d};
        if (fallback.empty()) throw ValidationError(cfg_.command + " needs --d or --d-list");
        return fallback;
    }

    LimitMode mode() const { return cfg_.mode == "index" ? LimitMode::index : LimitMode::prime; }

    static void describe_reports(Output& o) {
        for (const auto& r : o.report_rows) {
            std::string line = std::string(claim_tag(r.claim)) + " " + r.params.dump() +
                               " empirical=" + real_text(r.empirical) + " predicted=" + real_text(r.predicted);
            line += " ratio=" + (r.ratio ? real_text(*r.ratio) : std::string("-"));
            if (!r.notes.empty()) line += " (" + r.notes + ")";
            o.summary.push_back(std::move(line));
        }
    }

    Output sieve_stats() {
        const std::uint64_t x = need_limit();
        const auto t0 = Clock::now();
        Output o;
        const double xd = static_cast<double>(x);
        if (x < 3) {
            const std::uint64_t pi = prime_count(x, engine_);
            o.report_rows.push_back(make_report(Claim::prime_count, json{{"X", x}}, static_cast<double>(pi),
                                                x >= 2 ? xd / std::log(xd) : 0, "predicted = X/log X"));
        } else {
            const GapHistogram h = consecutive_gap_counts(x, engine_);
            const std::uint64_t pi = h.total() + 1;
            o.report_rows.push_back(make_report(Claim::prime_count, json{{"X", x}}, static_cast<double>(pi),
                                                xd / std::log(xd), "predicted = X/log X"));
            const auto& [max_d, max_count] = *h.counts.rbegin();
            o.report_rows.push_back(make_report(Claim::gap_count, json{{"X", x}, {"d", max_d}},
                                                static_cast<double>(max_count), 0, "largest gap"));
        }
        const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        describe_reports(o);
        char buf[96];
        std::snprintf(buf, sizeof buf, "elapsed %.3f s with %u worker(s)", secs, engine_.effective_workers());
        o.summary.emplace_back(buf);
        return o;
    }

    Output gaps_histogram() {
        const std::uint64_t x = need_limit();
        const GapHistogram h = consecutive_gap_counts(x, engine_);
        Output o;
        for (const auto& [d, n] : h.counts) {
            o.report_rows.push_back(
                make_report(Claim::gap_count, json{{"X", x}, {"d", d}}, static_cast<double>(n), 0));
        }
        o.summary.push_back("gaps with p_{n+1} <= " + std::to_string(x) + ": " + std::to_string(h.total()) +
                            " over " + std::to_string(h.counts.size()) + " distinct sizes");
        return o;
    }

    std::filesystem::path checkpoint_path() const {
        return std::filesystem::path(cfg_.checkpoint_dir) / (cfg_.command + ".gsck");
    }

    // Shared driver for the two streamed sums: grid, checkpoint, resume, halt.
    Output streamed(GapLimit limit, const std::function<SumRun(const SumRunOptions&)>& go) {
        SumRunOptions options;
        options.engine = engine_;
        if (!cfg_.grid.empty()) options.grid = parse_grid(cfg_.grid);

        const std::uint64_t hash = cfg_.stream_hash();
        if (cfg_.resume) {
            if (cfg_.checkpoint_dir.empty()) throw ValidationError("--resume needs --checkpoint-dir");
            Checkpoint cp = load_checkpoint(checkpoint_path());
            if (cp.config_hash != hash || cp.mode != limit.mode || cp.limit != limit.value) {
                throw ValidationError("checkpoint was written by a different configuration; refusing to resume");
            }
            options.resume = std::move(cp.state);
        }

        std::uint64_t segments = 0;
        if (!cfg_.checkpoint_dir.empty() || cfg_.halt_after_segments != 0) {
            if (!cfg_.checkpoint_dir.empty()) std::filesystem::create_directories(cfg_.checkpoint_dir);
            options.on_segment = [&](const StreamState& st) {
                if (!cfg_.checkpoint_dir.empty()) {
                    save_checkpoint(checkpoint_path(), Checkpoint{limit.mode, hash, limit.value, st});
                }
                ++segments;
                return cfg_.halt_after_segments == 0 || segments < cfg_.halt_after_segments;
            };
        }

        const auto t0 = Clock::now();
        const SumRun run = go(options);
        const double secs = std::chrono::duration<double>(Clock::now() - t0).count();

        Output o;
        o.snapshots = true;
        if (!run.completed) {
            o.halted = true;
            o.summary.push_back("halted after " + std::to_string(segments) + " segment(s) at n = " +
                                std::to_string(run.state.cursor.n) +
                                (cfg_.checkpoint_dir.empty() ? "" : "; checkpoint " + checkpoint_path().string()));
            return o;
        }
        o.snapshot_rows = run.snapshots;
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s limit=%s (%s) value=%s terms=%llu elapsed %.3f s", cfg_.command.c_str(),
                      std::to_string(limit.value).c_str(), limit.mode == LimitMode::prime ? "prime" : "index",
                      real_text(run.final.value).c_str(), static_cast<unsigned long long>(run.final.terms), secs);
        o.summary.emplace_back(buf);
        return o;
    }

    Output weighted_sum() {
        const GapLimit limit{mode(), need_limit()};
        const WeightSpec weight{cfg_.alpha};
        return streamed(limit, [&](const SumRunOptions& opt) { return weighted_gap_sum(weight, limit, opt); });
    }

    Output en_sum() {
        const std::uint64_t n = need_limit();
        return streamed(GapLimit::index(n),
                        [&](const SumRunOptions& opt) { return erdos_nathanson_sum(n, cfg_.c, opt); });
    }

    Output singular_pair() {
        Output o;
        for (auto d : d_values({})) {
            const SingularValue s = pair_singular(d);
            o.report_rows.push_back(make_report(Claim::singular_pair, json{{"d", d}}, s.value, 0,
                                                "abs_error=" + real_text(s.abs_error)));
        }
        describe_reports(o);
        return o;
    }

    Output singular_tuple() {
        if (cfg_.offsets.empty()) throw ValidationError("singular-tuple needs --offsets");
        const TupleSpec t = TupleSpec::parse(cfg_.offsets);
        const SingularValue s = tuple_singular(t, cfg_.cutoff);
        Output o;
        o.report_rows.push_back(make_report(
            Claim::singular_tuple, json{{"offsets", t.to_string()}, {"P", cfg_.cutoff}}, s.value, 0,
            "abs_error=" + real_text(s.abs_error) + " truncation_prime=" + std::to_string(s.truncation_prime)));
        describe_reports(o);
        return o;
    }

    Output reports(std::vector<VerificationReport> rows) {
        Output o;
        o.report_rows = std::move(rows);
        describe_reports(o);
        return o;
    }

    Output verify_lemma21() {
        const auto grid = parse_grid(cfg_.grid.empty() ? "1e3:1e7:log" : cfg_.grid);
        return reports(lemma21_error_curve(grid));
    }

    Output verify_lemma22() {
        return reports(lemma22_ratio_curve(d_values({30, 210, 2310, 30030}), cfg_.cutoff));
    }

    Output verify_conjecture1() {
        return reports(conjecture1_ratio(need_limit(), d_values({2, 4, 6, 10, 12}), engine_));
    }

    Output verify_sieve_bound() {
        const auto samples = cfg_.samples.empty() ? sample_admissible_triples(20, 50) : parse_pairs(cfg_.samples);
        return reports(sieve_bound_check(need_limit(), samples, cfg_.cutoff, engine_));
    }

    Output verify_theorem1() {
        const std::uint64_t x = need_limit();
        std::vector<double> alphas = cfg_.alphas.empty() ? std::vector<double>{cfg_.alpha} : cfg_.alphas;
        std::vector<VerificationReport> rows;
        if (mode() == LimitMode::prime) {
            for (auto& r : theorem1_ratios(x, alphas, engine_)) rows.push_back(std::move(r.report));
        } else {
            for (double a : alphas) rows.push_back(theorem1_ratio(x, a, LimitMode::index, engine_).report);
        }
        return reports(std::move(rows));
    }

    Output verify_corollary() {
        SumRunOptions options;
        options.engine = engine_;
        if (!cfg_.grid.empty()) options.grid = parse_grid(cfg_.grid);
        return reports({corollary_ratio(need_limit(), cfg_.c, options).report});
    }

    Output sandwich() {
        const std::uint64_t x = need_limit();
        Output o;
        for (auto d : d_values({})) {
            const Sandwich s = sandwich_check(x, d, engine_);
            o.report_rows.push_back(make_report(Claim::sandwich,
                                                json{{"X", x}, {"d", d}, {"lower", s.lower}, {"upper", s.upper}},
                                                static_cast<double>(s.middle), static_cast<double>(s.upper),
                                                s.ok ? "ok" : "VIOLATION: lower <= middle <= upper fails"));
        }
        describe_reports(o);
        return o;
    }

    const RunConfig& cfg_;
    EngineConfig engine_;
};

struct Command {
    const char* name;
    const char* help;
    // Option set, one letter each:
    // L limit, A alpha, C c, D d/d-list, O offsets, P truncation prime,
    // M mode, G grid, S samples, K checkpoint/resume
    const char* opts;
};

constexpr Command kCommands[] = {
    {"sieve-stats", "count primes up to --limit and report the largest gap", "L"},
    {"gaps-histogram", "histogram of consecutive prime gaps with p_{n+1} <= --limit", "L"},
    {"weighted-sum", "sum of (log d_n)^alpha / d_n, with snapshots", "LAMGK"},
    {"en-sum", "sum of 1/(d_n n (log log n)^c) for 3 <= n <= --limit", "LCGK"},
    {"singular-pair", "singular series of the pair {0,d}", "D"},
    {"singular-tuple", "truncated singular series of a tuple", "OP"},
    {"verify-lemma21", "error term of the pair singular series average", "G"},
    {"verify-lemma22", "triple singular series row sums against d S({0,d})", "DP"},
    {"verify-conjecture1", "pair counts against S({0,d}) X / log^2 X", "LD"},
    {"verify-sieve-bound", "triple counts against the sieve upper bound", "LSP"},
    {"verify-theorem1", "weighted gap sums against their main term", "LAM"},
    {"verify-corollary", "Erdos-Nathanson sum against its main term", "LCG"},
    {"sandwich", "inclusion-exclusion bracket for gaps of size d", "LD"},
};

bool has(const char* opts, char c) { return std::string_view(opts).find(c) != std::string_view::npos; }

unsigned parse_workers_env(const char* text) {
    unsigned v = 0;
    const std::string_view s(text);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || v == 0) {
        throw ValidationError("GAPSUM_WORKERS must be a positive integer");
    }
    return v;
}

}  // namespace

std::uint64_t parse_count(std::string_view text) {
    std::string s;
    for (char ch : text) {
        if (ch != '_') s += ch;
    }
    if (s.empty()) throw ValidationError("empty number");
    const auto bad = [&] { return ValidationError("not a non-negative integer: '" + std::string(text) + "'"); };

    std::string mant = s;
    long long exp10 = 0;
    if (const auto e = s.find_first_of("eE"); e != std::string::npos) {
        mant = s.substr(0, e);
        const std::string es = s.substr(e + 1);
        const char* b = es.data() + (!es.empty() && es[0] == '+' ? 1 : 0);
        auto [ptr, ec] = std::from_chars(b, es.data() + es.size(), exp10);
        if (ec != std::errc{} || ptr != es.data() + es.size() || b == es.data() + es.size()) throw bad();
    }
    std::string digits = mant;
    if (const auto dot = mant.find('.'); dot != std::string::npos) {
        digits = mant.substr(0, dot) + mant.substr(dot + 1);
        exp10 -= static_cast<long long>(mant.size() - dot - 1);
    }
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) throw bad();
    while (exp10 < 0 && digits.size() > 1 && digits.back() == '0') {
        digits.pop_back();
        ++exp10;
    }
    if (exp10 < 0) {
        if (digits.find_first_not_of('0') == std::string::npos) return 0;
        throw bad();
    }
    unsigned __int128 v = 0;
    const unsigned __int128 cap = std::numeric_limits<std::uint64_t>::max();
    for (char ch : digits) {
        v = v * 10 + static_cast<unsigned>(ch - '0');
        if (v > cap) throw ValidationError("number too large: '" + std::string(text) + "'");
    }
    for (long long i = 0; i < exp10 && v != 0; ++i) {
        v *= 10;
        if (v > cap) throw ValidationError("number too large: '" + std::string(text) + "'");
    }
    return static_cast<std::uint64_t>(v);
}

std::vector<std::uint64_t> parse_grid(std::string_view text) {
    std::vector<std::uint64_t> out;
    const auto parts = split(text, ':');
    if (parts.size() == 3) {
        if (parts[2] != "log") throw ValidationError("grid spacing must be 'log'");
        const std::uint64_t start = parse_count(parts[0]);
        const std::uint64_t stop = parse_count(parts[1]);
        if (start == 0 || stop < start) throw ValidationError("grid needs 0 < start <= stop");
        for (std::uint64_t v = start; v <= stop; v *= 10) {
            out.push_back(v);
            if (v > stop / 10) break;
        }
        return out;
    }
    if (parts.size() != 1) throw ValidationError("grid is start:stop:log or a comma list");
    for (const auto& p : split(text, ',')) out.push_back(parse_count(p));
    for (std::size_t i = 1; i < out.size(); ++i) {
        if (out[i] <= out[i - 1]) throw ValidationError("grid must be strictly increasing");
    }
    return out;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> parse_pairs(std::string_view text) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    for (const auto& item : split(text, ',')) {
        const auto hd = split(item, ':');
        if (hd.size() != 2) throw ValidationError("sample '" + item + "' is not h:d");
        out.emplace_back(parse_count(hd[0]), parse_count(hd[1]));
    }
    return out;
}

std::vector<std::string> RunConfig::describe() const {
    std::vector<std::string> lines;
    lines.push_back("gapsum run");
    lines.push_back("command=" + command);
    lines.push_back("limit=" + std::to_string(limit));
    lines.push_back("mode=" + mode);
    lines.push_back("alpha=" + format_real(alpha));
    if (!alphas.empty()) {
        std::string s;
        for (std::size_t i = 0; i < alphas.size(); ++i) s += (i ? "," : "") + format_real(alphas[i]);
        lines.push_back("alphas=" + s);
    }
    lines.push_back("c=" + format_real(c));
    lines.push_back("d=" + std::to_string(d));
    lines.push_back("d_list=" + join_u64(d_list));
    lines.push_back("offsets=" + offsets);
    lines.push_back("P=" + std::to_string(cutoff));
    lines.push_back("grid=" + grid);
    lines.push_back("samples=" + samples);
    lines.push_back("workers=" + std::to_string(workers));
    lines.push_back("segment_size=" + std::to_string(segment_size));
    lines.push_back("format=" + format);
    lines.push_back("output=" + output);
    lines.push_back("checkpoint_dir=" + checkpoint_dir);
    lines.push_back(std::string("resume=") + (resume ? "true" : "false"));
    return lines;
}

std::uint64_t RunConfig::stream_hash() const {
    std::string key = "v1;command=" + command + ";limit=" + std::to_string(limit) + ";mode=" + mode;
    key += ";alpha=" + std::to_string(std::bit_cast<std::uint64_t>(alpha));
    key += ";c=" + std::to_string(std::bit_cast<std::uint64_t>(c));
    key += ";grid=" + grid;
    return fnv1a64(key);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    std::string limit_text, d_text, d_list_text, cutoff_text, segment_text;
    std::string alpha_text;

    CLI::App app{"Prime gap reciprocal sums and Hardy-Littlewood singular series", "gapsum"};
    app.require_subcommand(1);
    for (const auto& cmd : kCommands) {
        CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
        if (has(cmd.opts, 'L')) sub->add_option("--limit", limit_text, "X or N; accepts 1e9 and 1_000_000");
        if (has(cmd.opts, 'A')) {
            sub->add_option("--alpha", alpha_text, "exponent alpha >= -1 (comma list for verify-theorem1)");
        }
        if (has(cmd.opts, 'C')) sub->add_option("--c", cfg.c, "exponent c");
        if (has(cmd.opts, 'D')) {
            sub->add_option("--d", d_text, "gap size d");
            sub->add_option("--d-list", d_list_text, "comma-separated gap sizes");
        }
        if (has(cmd.opts, 'O')) sub->add_option("--offsets", cfg.offsets, "tuple offsets, e.g. 0,2,6");
        if (has(cmd.opts, 'P')) sub->add_option("--P", cutoff_text, "Euler product truncation prime (default 1e6)");
        if (has(cmd.opts, 'M')) {
            sub->add_option("--mode", cfg.mode, "prime (p_{n+1} <= X) or index (n <= X)")
                ->check(CLI::IsMember({"prime", "index"}));
        }
        if (has(cmd.opts, 'G')) sub->add_option("--grid", cfg.grid, "start:stop:log or comma list");
        if (has(cmd.opts, 'S')) sub->add_option("--samples", cfg.samples, "h:d pairs, comma separated");
        if (has(cmd.opts, 'K')) {
            sub->add_option("--checkpoint-dir", cfg.checkpoint_dir, "save a checkpoint after every segment");
            sub->add_flag("--resume", cfg.resume, "continue from the checkpoint in --checkpoint-dir");
            sub->add_option("--halt-after-segments", cfg.halt_after_segments)->group("");
        }
        sub->add_option("--workers", cfg.workers, "sieve threads (default: all cores; GAPSUM_WORKERS overrides)");
        sub->add_option("--segment-size", segment_text, "odd slots per segment, power of two (default 2^18)");
        sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--output", cfg.output, "report file (default: standard output)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "gapsum: " << e.what() << "\n\n" << app.help();
        return kExitValidation;
    }

    const bool to_file = !cfg.output.empty();
    std::ostream& summary = to_file ? out : err;
    try {
        cfg.command = app.get_subcommands().front()->get_name();
        if (!limit_text.empty()) cfg.limit = parse_count(limit_text);
        if (!d_text.empty()) cfg.d = parse_count(d_text);
        if (!d_list_text.empty()) {
            for (const auto& p : split(d_list_text, ',')) cfg.d_list.push_back(parse_count(p));
        }
        if (!cutoff_text.empty()) cfg.cutoff = parse_count(cutoff_text);
        if (!segment_text.empty()) cfg.segment_size = parse_count(segment_text);
        if (!alpha_text.empty()) {
            const auto parts = split(alpha_text, ',');
            for (const auto& p : parts) cfg.alphas.push_back(parse_real(p));
            cfg.alpha = cfg.alphas.front();
            if (parts.size() == 1) cfg.alphas.clear();
            if (parts.size() > 1 && cfg.command != "verify-theorem1") {
                throw ValidationError("--alpha takes a single value for " + cfg.command);
            }
        }
        if (const char* env = std::getenv("GAPSUM_WORKERS"); env != nullptr && *env != '\0') {
            cfg.workers = parse_workers_env(env);
        }

        Runner runner(cfg);
        const Output result = runner.run();
        for (const auto& line : result.summary) summary << line << '\n';
        if (result.halted) return kExitOk;

        std::string text;
        if (cfg.format == "json") {
            text = result.snapshots ? snapshots_json(result.snapshot_rows) : reports_json(result.report_rows);
        } else {
            const auto comments = cfg.describe();
            text = result.snapshots ? snapshots_csv(result.snapshot_rows, comments)
                                    : reports_csv(result.report_rows, comments);
        }
        if (to_file) {
            write_file_atomic(cfg.output, text);
            summary << "wrote " << cfg.output << '\n';
        } else {
            out << text;
        }
        return kExitOk;
    } catch (const ValidationError& e) {
        err << "gapsum: " << e.what() << '\n';
        return kExitValidation;
    } catch (const Error& e) {
        err << "gapsum: " << e.what() << '\n';
        return kExitCapacity;
    } catch (const std::exception& e) {
        err << "gapsum: " << e.what() << '\n';
        return kExitCapacity;
    }
}

}  // namespace gapsum::cli
