#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace navigator::utf8 {

/// Decodes the code point starting at `at`. On success `width` holds its byte
/// length; malformed sequences yield nullopt with `width` = 1.
inline std::optional<char32_t> decode(std::string_view s, std::size_t at, std::size_t& width) {
    width = 1;
    if (at >= s.size()) return std::nullopt;
    const auto b0 = static_cast<unsigned char>(s[at]);
    if (b0 < 0x80) return b0;
    std::size_t n = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        n = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        n = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        n = 4;
        cp = b0 & 0x07;
    } else {
        return std::nullopt;
    }
    if (at + n > s.size()) return std::nullopt;
    for (std::size_t i = 1; i < n; ++i) {
        const auto b = static_cast<unsigned char>(s[at + i]);
        if ((b & 0xC0) != 0x80) return std::nullopt;
        cp = (cp << 6) | (b & 0x3F);
    }
    width = n;
    return cp;
}

/// Number of code points; malformed bytes count as one each.
inline std::size_t length(std::string_view s) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < s.size();) {
        std::size_t w = 1;
        decode(s, i, w);
        i += w;
        ++n;
    }
    return n;
}

/// Letters usable inside identifiers beyond ASCII: Latin-1/Extended letters,
/// Greek, subscripts, letterlike symbols and mathematical alphanumerics.
inline bool is_identifier_letter(char32_t cp) {
    return (cp >= 0x00C0 && cp <= 0x024F && cp != 0x00D7 && cp != 0x00F7) || (cp >= 0x0370 && cp <= 0x03FF) ||
           (cp >= 0x2080 && cp <= 0x209C) || (cp >= 0x2100 && cp <= 0x214F) || (cp >= 0x1D400 && cp <= 0x1D7FF);
}

}  // namespace navigator::utf8
