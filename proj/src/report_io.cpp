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

#include "gapsum/report_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "gapsum/errors.hpp"

namespace gapsum {

namespace {

constexpr std::string_view kSnapshotHeader = "limit,value,terms";
constexpr std::string_view kReportHeader = "claim,params_json,empirical,predicted,ratio,notes";

void append_field(std::string& out, std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
        out += field;
        return;
    }
    out += '"';
    for (char ch : field) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
}

void append_comments(std::string& out, const CommentLines& comments) {
    for (const auto& line : comments) {
        out += "# ";
        out += line;
        out += '\n';
    }
}

std::uint64_t parse_u64(std::string_view s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ValidationError("not an unsigned integer: '" + std::string(s) + "'");
    }
    return v;
}

}  // namespace

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    (void)ec;
    return std::string(buf, ptr);
}

double parse_real(std::string_view s) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ValidationError("not a real number: '" + std::string(s) + "'");
    }
    return v;
}

std::string snapshots_csv(const std::vector<SumSnapshot>& rows, const CommentLines& comments) {
    std::string out;
    append_comments(out, comments);
    out += kSnapshotHeader;
    out += '\n';
    for (const auto& r : rows) {
        out += std::to_string(r.limit_reached);
        out += ',';
        out += format_real(r.value);
        out += ',';
        out += std::to_string(r.terms);
        out += '\n';
    }
    return out;
}

std::string reports_csv(const std::vector<VerificationReport>& rows, const CommentLines& comments) {
    std::string out;
    append_comments(out, comments);
    out += kReportHeader;
    out += '\n';
    for (const auto& r : rows) {
        append_field(out, claim_tag(r.claim));
        out += ',';
        append_field(out, r.params.dump());
        out += ',';
        out += format_real(r.empirical);
        out += ',';
        out += format_real(r.predicted);
        out += ',';
        if (r.ratio) out += format_real(*r.ratio);
        out += ',';
        append_field(out, r.notes);
        out += '\n';
    }
    return out;
}

std::string snapshots_json(const std::vector<SumSnapshot>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        arr.push_back({{"limit", r.limit_reached}, {"value", r.value}, {"terms", r.terms}});
    }
    return arr.dump(2) + "\n";
}

std::string reports_json(const std::vector<VerificationReport>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json o;
        o["claim"] = claim_tag(r.claim);
        o["params"] = r.params;
        o["empirical"] = r.empirical;
        o["predicted"] = r.predicted;
        o["ratio"] = r.ratio ? nlohmann::ordered_json(*r.ratio) : nlohmann::ordered_json(nullptr);
        o["notes"] = r.notes;
        arr.push_back(std::move(o));
    }
    return arr.dump(2) + "\n";
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size() && text[i] == '#') {
        const auto nl = text.find('\n', i);
        i = nl == std::string_view::npos ? text.size() : nl + 1;
    }

    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool any = false;
    for (; i < text.size(); ++i) {
        const char ch = text[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += ch;
            }
            continue;
        }
        any = true;
        if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            record.push_back(std::move(field));
            field.clear();
        } else if (ch == '\n' || ch == '\r') {
            if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            record.push_back(std::move(field));
            field.clear();
            records.push_back(std::move(record));
            record.clear();
            any = false;
        } else {
            field += ch;
        }
    }
    if (quoted) throw ValidationError("unterminated quoted CSV field");
    if (any) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
    }
    return records;
}

std::vector<SumSnapshot> read_snapshots_csv(std::string_view text) {
    const auto records = parse_csv(text);
    if (records.empty() || records[0] != std::vector<std::string>{"limit", "value", "terms"}) {
        throw ValidationError("missing snapshot CSV header");
    }
    std::vector<SumSnapshot> out;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& r = records[i];
        if (r.size() != 3) throw ValidationError("snapshot row needs 3 fields");
        SumSnapshot s;
        s.limit_reached = parse_u64(r[0]);
        s.value = parse_real(r[1]);
        s.terms = parse_u64(r[2]);
        out.push_back(s);
    }
    return out;
}

std::vector<VerificationReport> read_reports_csv(std::string_view text) {
    const auto records = parse_csv(text);
    const std::vector<std::string> header{"claim", "params_json", "empirical", "predicted", "ratio", "notes"};
    if (records.empty() || records[0] != header) throw ValidationError("missing report CSV header");
    std::vector<VerificationReport> out;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& r = records[i];
        if (r.size() != 6) throw ValidationError("report row needs 6 fields");
        VerificationReport rep;
        const auto claim = parse_claim(r[0]);
        if (!claim) throw ValidationError("unknown claim tag '" + r[0] + "'");
        rep.claim = *claim;
        try {
            rep.params = nlohmann::ordered_json::parse(r[1]);
        } catch (const nlohmann::json::parse_error& e) {
            throw ValidationError(std::string("bad params_json: ") + e.what());
        }
        rep.empirical = parse_real(r[2]);
        rep.predicted = parse_real(r[3]);
        if (!r[4].empty()) rep.ratio = parse_real(r[4]);
        rep.notes = r[5];
        out.push_back(std::move(rep));
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
    std::error_code ec;
    const auto status = std::filesystem::status(path, ec);
    if (!ec && std::filesystem::exists(status) && !std::filesystem::is_regular_file(status)) {
        // Devices and pipes (/dev/stdout, /dev/null) are written in place.
        std::ofstream f(path, std::ios::binary);
        f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!f) throw ValidationError("write to '" + path.string() + "' failed");
        return;
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ValidationError("cannot open '" + tmp.string() + "' for writing");
        f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        f.flush();
        if (!f) throw ValidationError("write to '" + tmp.string() + "' failed");
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw ValidationError("cannot rename into '" + path.string() + "'");
    }
}

}  // namespace gapsum
