#pragma once

// Shared tokenizer for the line-oriented fixture formats.

#include "msflow/error.hpp"

#include <charconv>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace msflow::detail {

inline std::string_view strip_comment(std::string_view line) {
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
        line = line.substr(0, hash);
    }
    return line;
}

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_words(std::string_view s) {
    std::vector<std::string_view> words;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
        const std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
        if (i > start) {
            words.push_back(s.substr(start, i - start));
        }
    }
    return words;
}

/// Parses a decimal integer (optional leading '-'); rejects trailing junk.
inline long parse_integer(std::string_view word, std::size_t line, std::string_view what) {
    long value = 0;
    const char* first = word.data();
    const char* last = word.data() + word.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (word.empty() || ec != std::errc{} || ptr != last) {
        throw ParseError(line, "expected " + std::string(what) + ", got '" + std::string(word) + "'");
    }
    return value;
}

/// Calls fn(line_number, words) for every non-blank line after stripping
/// comments. Also passes the trimmed raw content for free-text directives.
template <typename Fn>
void for_each_directive(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        ++line_no;
        const auto content = trim(strip_comment(raw));
        if (!content.empty()) {
            fn(line_no, split_words(content), content);
        }
        if (nl == std::string_view::npos) {
            break;
        }
        pos = nl + 1;
    }
}

} // namespace msflow::detail
