#ifndef LEXCONTRAST_UNICODE_HPP
#define LEXCONTRAST_UNICODE_HPP

#include <lexcontrast/error.hpp>

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>

namespace lexcontrast::unicode {

inline bool is_ascii(std::string_view s)
{
    return std::all_of(s.begin(), s.end(), [](char c) { return static_cast<unsigned char>(c) < 0x80; });
}

inline bool is_space(char c)
{
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && is_space(s.front()))
        s.remove_prefix(1);
    while (!s.empty() && is_space(s.back()))
        s.remove_suffix(1);
    return s;
}

inline std::string nfc(std::string_view s)
{
    if (is_ascii(s))
        return std::string(s);
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status))
        throw Error("unicode: NFC normalizer unavailable");
    icu::UnicodeString src = icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
    icu::UnicodeString dst = norm->normalize(src, status);
    if (U_FAILURE(status))
        throw Error("unicode: NFC normalization failed");
    std::string out;
    dst.toUTF8String(out);
    return out;
}

/// NFC + surrounding whitespace trimmed; the key used for every name comparison.
inline std::string normalize_name(std::string_view s) { return nfc(trim(s)); }

inline std::string to_lower(std::string_view s)
{
    if (is_ascii(s)) {
        std::string out(s);
        for (char& c : out)
            if (c >= 'A' && c <= 'Z')
                c = static_cast<char>(c - 'A' + 'a');
        return out;
    }
    icu::UnicodeString u = icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
    u.toLower(icu::Locale::getRoot());
    std::string out;
    u.toUTF8String(out);
    return out;
}

/// Decodes the code point starting at byte `i`; advances `i`. Malformed bytes decode to U+FFFD.
inline UChar32 next_code_point(std::string_view s, std::size_t& i)
{
    int32_t pos = static_cast<int32_t>(i);
    UChar32 c;
    U8_NEXT(reinterpret_cast<const uint8_t*>(s.data()), pos, static_cast<int32_t>(s.size()), c);
    i = static_cast<std::size_t>(pos);
    return c < 0 ? 0xFFFD : c;
}

/// Byte length of the white-space code point at `i`, or 0 when there is none.
inline std::size_t space_width(std::string_view s, std::size_t i)
{
    if (static_cast<unsigned char>(s[i]) < 0x80)
        return is_space(s[i]) ? 1 : 0;
    std::size_t next = i;
    UChar32 c = next_code_point(s, next);
    return u_isUWhiteSpace(c) ? next - i : 0;
}

/// Letters and digits count as word characters; everything else is strippable at token edges.
inline bool is_word_char(UChar32 c)
{
    if (c < 0x80)
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
    return u_isalnum(c) != 0 || u_hasBinaryProperty(c, UCHAR_ALPHABETIC) != 0;
}

} // namespace lexcontrast::unicode

#endif
