// Copyright 2026 The xner Authors
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

#include <string>
#include <string_view>
#include <vector>

namespace xner::text {

/// Unicode full lowercasing (root locale) of UTF-8 text.
std::string to_lower(std::string_view utf8);

/// Canonical composition (NFC) of UTF-8 text.
std::string nfc(std::string_view utf8);

std::u32string decode_utf8(std::string_view utf8);
std::string encode_utf8(std::u32string_view code_points);

/// Splits on ASCII whitespace, dropping empty fields.
std::vector<std::string_view> split_fields(std::string_view line);

/// Strips a trailing '\r' (CRLF input).
std::string_view chomp(std::string_view line);

/// Splits into lines; a trailing newline does not produce an empty last line.
std::vector<std::string_view> split_lines(std::string_view content);

bool is_printable_ascii(std::string_view s);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double value);

/// Strict decimal real parse of the whole field.
bool parse_double(std::string_view field, double& out);

}  // namespace xner::text
