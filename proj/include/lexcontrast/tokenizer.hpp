#ifndef LEXCONTRAST_TOKENIZER_HPP
#define LEXCONTRAST_TOKENIZER_HPP

#include <lexcontrast/unicode.hpp>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace lexcontrast {

struct TokenizerConfig {
    /// Remove parenthesised spans such as "(Laughter)" or "(Applause)" before splitting.
    bool strip_stage_directions = true;
    /// Keep "well-known" as one token; when false hyphens split tokens.
    bool keep_hyphenated = true;
};

/// Lowercased word tokens. No token is empty or contains whitespace.
struct TokenSequence {
    std::vector<std::string> tokens;

    std::size_t size() const noexcept { return tokens.size(); }
    bool empty() const noexcept { return tokens.empty(); }
    auto begin() const noexcept { return tokens.begin(); }
    auto end() const noexcept { return tokens.end(); }
    const std::string& operator[](std::size_t i) const { return tokens[i]; }

    friend bool operator==(const TokenSequence&, const TokenSequence&) = default;
};

namespace detail {

// Blanks out every balanced (...) span, nested ones included. Unbalanced parens are kept.
inline std::string strip_parentheticals(std::string_view text)
{
    std::string out(text);
    std::vector<std::size_t> open;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i] == '(') {
            open.push_back(i);
        } else if (out[i] == ')' && !open.empty()) {
            for (std::size_t j = open.back(); j <= i; ++j)
                out[j] = ' ';
            open.pop_back();
        }
    }
    return out;
}

inline bool is_dash_at(std::string_view s, std::size_t i, bool split_hyphen, std::size_t& width)
{
    if (s.compare(i, 2, "--") == 0) {
        width = 2;
        return true;
    }
    if (s.compare(i, 3, "\xE2\x80\x94") == 0 || s.compare(i, 3, "\xE2\x80\x93") == 0) { // em/en dash
        width = 3;
        return true;
    }
    if (split_hyphen && s[i] == '-') {
        width = 1;
        return true;
    }
    return false;
}

inline std::string normalize_apostrophes(std::string_view raw)
{
    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw.compare(i, 3, "\xE2\x80\x99") == 0 || raw.compare(i, 3, "\xE2\x80\x98") == 0) {
            out.push_back('\'');
            i += 2;
        } else {
            out.push_back(raw[i]);
        }
    }
    return out;
}

inline std::string_view strip_edges(std::string_view s)
{
    std::size_t begin = 0;
    while (begin < s.size()) {
        std::size_t next = begin;
        if (unicode::is_word_char(unicode::next_code_point(s, next)))
            break;
        begin = next;
    }
    std::size_t end = begin;
    std::size_t i = begin;
    while (i < s.size()) {
        if (unicode::is_word_char(unicode::next_code_point(s, i)))
            end = i;
    }
    return s.substr(begin, end - begin);
}

inline void emit(std::string_view raw, std::vector<std::string>& out)
{
    std::string norm = normalize_apostrophes(raw);
    std::string_view core = strip_edges(norm);
    if (!core.empty())
        out.push_back(unicode::to_lower(core));
}

} // namespace detail

inline TokenSequence tokenize(std::string_view text, const TokenizerConfig& rules = {})
{
    std::string buffer;
    if (rules.strip_stage_directions) {
        buffer = detail::strip_parentheticals(text);
        text = buffer;
    }
    TokenSequence seq;
    std::size_t start = 0;
    bool in_token = false;
    for (std::size_t i = 0; i < text.size();) {
        std::size_t width = 0;
        if (std::size_t sw = unicode::space_width(text, i)) {
            width = sw;
        } else if (!detail::is_dash_at(text, i, !rules.keep_hyphenated, width)) {
            if (!in_token) {
                start = i;
                in_token = true;
            }
            ++i;
            continue;
        }
        if (in_token) {
            detail::emit(text.substr(start, i - start), seq.tokens);
            in_token = false;
        }
        i += width;
    }
    if (in_token)
        detail::emit(text.substr(start), seq.tokens);
    return seq;
}

} // namespace lexcontrast

#endif
