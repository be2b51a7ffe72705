#ifndef LEXCONTRAST_LEXICON_HPP
#define LEXCONTRAST_LEXICON_HPP

// LIWC-format category lexicon.
//
//   %
//   1	pronoun
//   2	posemo
//   %
//   we	1
//   friendli*	2	31
//
// Literal entries match whole tokens. An entry ending in '*' is a stem and matches
// any token it prefixes. A literal match wins over stems; among stems the longest
// one wins. A match counts once for every category the entry lists.

#include <lexcontrast/csv.hpp>
#include <lexcontrast/error.hpp>
#include <lexcontrast/tokenizer.hpp>
#include <lexcontrast/unicode.hpp>

#include <charconv>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lexcontrast {

struct LexiconEntry {
    std::string pattern; ///< lowercased; stems keep their trailing '*'
    std::vector<int> categories;

    bool is_stem() const { return !pattern.empty() && pattern.back() == '*'; }
    std::string_view stem() const { return std::string_view(pattern).substr(0, pattern.size() - (is_stem() ? 1 : 0)); }
};

class Lexicon {
public:
    struct Category {
        int id;
        std::string name;
    };

    Lexicon() = default;
    Lexicon(std::vector<Category> categories, std::vector<LexiconEntry> entries)
        : categories_(std::move(categories)), entries_(std::move(entries))
    {
        index();
    }

    const std::vector<Category>& categories() const noexcept { return categories_; }
    const std::vector<LexiconEntry>& entries() const noexcept { return entries_; }

    std::vector<std::string> category_names() const
    {
        std::vector<std::string> names;
        for (const auto& c : categories_)
            names.push_back(c.name);
        return names;
    }

    /// Position of a category id in `categories()`, or -1.
    int slot(int id) const
    {
        auto it = slot_.find(id);
        return it == slot_.end() ? -1 : it->second;
    }

    /// The entry a token matches under literal-then-longest-stem precedence.
    const LexiconEntry* match(std::string_view token) const
    {
        if (auto it = literal_.find(std::string(token)); it != literal_.end())
            return &entries_[it->second];
        for (std::size_t len = std::min(token.size(), max_stem_); len > 0; --len) {
            if (auto it = stems_.find(std::string(token.substr(0, len))); it != stems_.end())
                return &entries_[it->second];
        }
        // a bare "*" stem matches everything
        if (auto it = stems_.find(std::string()); it != stems_.end())
            return &entries_[it->second];
        return nullptr;
    }

    /// A few literal words (or stems) of a category, in file order.
    std::vector<std::string> examples(int id, std::size_t limit = 3) const
    {
        std::vector<std::string> out;
        for (const auto& e : entries_) {
            if (out.size() >= limit)
                break;
            if (std::find(e.categories.begin(), e.categories.end(), id) != e.categories.end())
                out.push_back(e.pattern);
        }
        return out;
    }

private:
    void index()
    {
        for (std::size_t i = 0; i < categories_.size(); ++i)
            slot_[categories_[i].id] = static_cast<int>(i);
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            const auto& e = entries_[i];
            if (e.is_stem()) {
                stems_.emplace(std::string(e.stem()), i);
                max_stem_ = std::max(max_stem_, e.stem().size());
            } else {
                literal_.emplace(e.pattern, i);
            }
        }
    }

    std::vector<Category> categories_;
    std::vector<LexiconEntry> entries_;
    std::unordered_map<int, int> slot_;
    std::unordered_map<std::string, std::size_t> literal_;
    std::unordered_map<std::string, std::size_t> stems_;
    std::size_t max_stem_ = 0;
};

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> out;
    bool tabbed = line.find('\t') != std::string_view::npos;
    std::size_t i = 0;
    while (i < line.size()) {
        if (tabbed ? line[i] == '\t' : unicode::is_space(line[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < line.size() && !(tabbed ? line[j] == '\t' : unicode::is_space(line[j])))
            ++j;
        auto field = unicode::trim(line.substr(i, j - i));
        if (!field.empty())
            out.push_back(field);
        i = j;
    }
    return out;
}

inline int parse_id(std::string_view s, std::size_t line)
{
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError("lexicon: invalid category id '" + std::string(s) + "'", line);
    return v;
}

} // namespace detail

/// Parses a LIWC-format dictionary. Errors carry the 1-based line number.
inline Lexicon parse_lexicon(std::string_view content)
{
    std::vector<Lexicon::Category> categories;
    std::vector<LexiconEntry> entries;
    std::map<std::string, std::size_t> by_pattern;
    std::istringstream in{std::string(content)};
    std::string raw;
    std::size_t line_no = 0;
    int section = 0; // 0 before header, 1 in header, 2 in entries

    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (line_no == 1 && line.substr(0, 3) == "\xEF\xBB\xBF")
            line.remove_prefix(3);
        line = unicode::trim(line);
        if (line.empty())
            continue;
        if (line == "%") {
            if (section == 2)
                throw ParseError("lexicon: unexpected third '%' marker", line_no);
            ++section;
            continue;
        }
        if (section == 0)
            throw ParseError("lexicon: file must start with a '%' header marker", line_no);
        auto fields = detail::split_fields(line);
        if (section == 1) {
            if (fields.size() != 2)
                throw ParseError("lexicon: header lines must be '<id> <name>'", line_no);
            int id = detail::parse_id(fields[0], line_no);
            for (const auto& c : categories)
                if (c.id == id)
                    throw ParseError("lexicon: duplicate category id " + std::to_string(id), line_no);
            categories.push_back({id, std::string(fields[1])});
            continue;
        }
        if (fields.size() < 2)
            throw ParseError("lexicon: entry without categories", line_no);
        std::string pattern = unicode::to_lower(fields[0]);
        auto star = pattern.find('*');
        if (star != std::string::npos && star + 1 != pattern.size())
            throw ParseError("lexicon: '*' allowed only as the last character of '" + pattern + "'", line_no);
        LexiconEntry entry{pattern, {}};
        for (std::size_t f = 1; f < fields.size(); ++f) {
            int id = detail::parse_id(fields[f], line_no);
            bool declared = std::any_of(categories.begin(), categories.end(), [&](const auto& c) { return c.id == id; });
            if (!declared)
                throw ParseError("lexicon: entry '" + pattern + "' cites undeclared category " + std::to_string(id), line_no);
            if (std::find(entry.categories.begin(), entry.categories.end(), id) == entry.categories.end())
                entry.categories.push_back(id);
        }
        // repeated patterns merge their categories
        if (auto it = by_pattern.find(pattern); it != by_pattern.end()) {
            auto& cats = entries[it->second].categories;
            for (int id : entry.categories)
                if (std::find(cats.begin(), cats.end(), id) == cats.end())
                    cats.push_back(id);
            continue;
        }
        by_pattern.emplace(pattern, entries.size());
        entries.push_back(std::move(entry));
    }
    if (section < 2)
        throw ParseError("lexicon: malformed header (expected two '%' markers)", line_no);
    return Lexicon(std::move(categories), std::move(entries));
}

inline Lexicon load_lexicon(const std::string& path) { return parse_lexicon(csv::read_file(path)); }

/// Per-category counts for one document, in `lexicon.categories()` order.
inline std::vector<std::int64_t> categorize_counts(const TokenSequence& tokens, const Lexicon& lexicon)
{
    std::vector<std::int64_t> counts(lexicon.categories().size(), 0);
    for (const auto& tok : tokens) {
        if (const auto* e = lexicon.match(tok))
            for (int id : e->categories)
                ++counts[static_cast<std::size_t>(lexicon.slot(id))];
    }
    return counts;
}

} // namespace lexcontrast

#endif
