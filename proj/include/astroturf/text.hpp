#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace astroturf::text {

// Token characters are ASCII letters/digits and every byte of a multi-byte
// UTF-8 sequence, so "grüne" stays one token. Everything else separates.
inline bool is_token_byte(unsigned char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

// Lowercases ASCII and the Latin-1 supplement block (Ä -> ä etc).
std::string to_lower(std::string_view s);

// Lowercased tokens in order of appearance.
std::vector<std::string> tokenize(std::string_view s);

// Hashtags written in the text ('#' followed by word characters), lowercased
// and without the '#'.
std::vector<std::string> extract_hashtags(std::string_view s);

// Number of Unicode code points in a UTF-8 string.
std::size_t utf8_length(std::string_view s);

// Host part of a URL, lowercased, without port. Empty if none.
std::string url_host(std::string_view url);

// 64-bit FNV-1a.
constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string trim(std::string_view s);

}  // namespace astroturf::text
