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
#include <utility>
#include <vector>

#include "gapsum/gap_sums.hpp"
#include "gapsum/verification.hpp"

namespace gapsum {

// Shortest form that carries 17 significant digits; "nan"/"inf" for
// non-finite values. Locale independent.
std::string format_real(double v);
double parse_real(std::string_view s);

// Comment lines written ahead of the header, without the leading "# ".
using CommentLines = std::vector<std::string>;

// Schema: limit,value,terms
std::string snapshots_csv(const std::vector<SumSnapshot>& rows, const CommentLines& comments = {});
// Schema: claim,params_json,empirical,predicted,ratio,notes
std::string reports_csv(const std::vector<VerificationReport>& rows, const CommentLines& comments = {});

std::string snapshots_json(const std::vector<SumSnapshot>& rows);
std::string reports_json(const std::vector<VerificationReport>& rows);

// RFC 4180 records; '#' lines before the header are skipped.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

// Snapshot rows carry no mode or compensation; those come back as defaults.
std::vector<SumSnapshot> read_snapshots_csv(std::string_view text);
std::vector<VerificationReport> read_reports_csv(std::string_view text);

// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace gapsum
