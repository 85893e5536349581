// SPDX-License-Identifier: Apache-2.0
#include "orig/common/strings.hpp"

#include <cctype>

namespace orig::strings {

namespace {

bool is_space(unsigned char c) { return std::isspace(c) != 0; }

}  // namespace

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && is_space(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && is_space(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string collapse_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool in_ws = true;  // leading whitespace dropped
    for (char c : s) {
        if (is_space(static_cast<unsigned char>(c))) {
            if (!in_ws) out.push_back(' ');
            in_ws = true;
        } else {
            out.push_back(c);
            in_ws = false;
        }
    }
    if (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.emplace_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

std::int64_t approx_token_count(std::string_view s) {
    std::int64_t n = 0;
    bool in_tok = false;
    for (char c : s) {
        if (is_space(static_cast<unsigned char>(c))) {
            in_tok = false;
        } else if (!in_tok) {
            ++n;
            in_tok = true;
        }
    }
    return n;
}

std::string sanitize_utf8(std::string_view s) {
    static constexpr std::string_view kReplacement = "\xEF\xBF\xBD";  // U+FFFD
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    const auto cont = [&](std::size_t k) {
        return i + k < s.size() && (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
    };
    while (i < s.size()) {
        const auto c = static_cast<unsigned char>(s[i]);
        if (c < 0x80) {
            out.push_back(s[i]);
            i += 1;
        } else if ((c & 0xE0) == 0xC0 && c >= 0xC2 && cont(1)) {
            out.append(s.substr(i, 2));
            i += 2;
        } else if ((c & 0xF0) == 0xE0 && cont(1) && cont(2)) {
            const auto c1 = static_cast<unsigned char>(s[i + 1]);
            const bool overlong = c == 0xE0 && c1 < 0xA0;
            const bool surrogate = c == 0xED && c1 >= 0xA0;
            if (!overlong && !surrogate) {
                out.append(s.substr(i, 3));
                i += 3;
                continue;
            }
            out.append(kReplacement);
            i += 1;
        } else if ((c & 0xF8) == 0xF0 && c <= 0xF4 && cont(1) && cont(2) && cont(3)) {
            const auto c1 = static_cast<unsigned char>(s[i + 1]);
            const bool overlong = c == 0xF0 && c1 < 0x90;
            const bool too_big = c == 0xF4 && c1 >= 0x90;
            if (!overlong && !too_big) {
                out.append(s.substr(i, 4));
                i += 4;
                continue;
            }
            out.append(kReplacement);
            i += 1;
        } else {
            out.append(kReplacement);
            i += 1;
        }
    }
    return out;
}

std::string ascii_preview(std::string_view s, std::size_t max_chars) {
    std::string out;
    out.reserve(std::min(s.size(), max_chars));
    for (char c : s) {
        if (out.size() >= max_chars) break;
        const auto u = static_cast<unsigned char>(c);
        out.push_back(u >= 0x20 && u < 0x7F ? c : '?');
    }
    return out;
}

bool starts_with(std::string_view s, std::string_view prefix) {
    return s.substr(0, prefix.size()) == prefix;
}

}  // namespace orig::strings
