// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace orig::strings {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);

// Collapses every run of ASCII whitespace to a single space and trims the
// ends. Used for content-identity normalization of text evidence.
std::string collapse_whitespace(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);

// Whitespace token count; the offline fallback for token accounting when a
// backend does not report usage.
std::int64_t approx_token_count(std::string_view s);

// Replaces invalid UTF-8 sequences with U+FFFD so downstream JSON
// serialization never sees malformed input.
std::string sanitize_utf8(std::string_view s);

// Printable single-line ASCII preview, truncated to max_chars. Non-ASCII and
// control bytes become '?'. Used for human-readable request digests.
std::string ascii_preview(std::string_view s, std::size_t max_chars);

bool starts_with(std::string_view s, std::string_view prefix);

}  // namespace orig::strings
