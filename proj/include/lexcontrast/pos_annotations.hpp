#ifndef LEXCONTRAST_POS_ANNOTATIONS_HPP
#define LEXCONTRAST_POS_ANNOTATIONS_HPP

// Reader for pre-tagged documents:
//
//   # doc talk_001
//   the	DET
//   cat	NOUN
//   <blank line ends the document>
//
// Tags come from the 19-tag universal inventory used by spaCy.

#include <lexcontrast/csv.hpp>
#include <lexcontrast/error.hpp>
#include <lexcontrast/unicode.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace lexcontrast {

inline constexpr std::array<std::string_view, 19> pos_tags{
    "ADJ", "ADP", "ADV", "AUX", "CONJ", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X", "SPACE"};

inline std::optional<std::size_t> pos_tag_index(std::string_view tag)
{
    for (std::size_t i = 0; i < pos_tags.size(); ++i)
        if (pos_tags[i] == tag)
            return i;
    return std::nullopt;
}

using PosCounts = std::array<std::int64_t, pos_tags.size()>;

struct PosAnnotations {
    std::vector<std::string> doc_order;        ///< documents in file order
    std::map<std::string, PosCounts> counts;   ///< doc_id -> per-tag counts
    std::vector<std::string> warnings;
};

/// Parses an annotation file. When `known_docs` is given, blocks for other doc ids
/// are skipped with a warning.
inline PosAnnotations parse_pos_annotations(std::string_view content,
                                            const std::set<std::string>* known_docs = nullptr)
{
    PosAnnotations out;
    std::istringstream in{std::string(content)};
    std::string raw;
    std::size_t line_no = 0;
    PosCounts* current = nullptr;
    bool skipping = false;

    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r')
            raw.pop_back();
        std::string_view line = raw;
        if (unicode::trim(line).empty()) {
            current = nullptr;
            skipping = false;
            continue;
        }
        if (line.substr(0, 5) == "# doc") {
            std::string id(unicode::trim(line.substr(5)));
            if (id.empty())
                throw ParseError("pos annotations: document header without id", line_no);
            if (known_docs && !known_docs->count(id)) {
                out.warnings.push_back("line " + std::to_string(line_no) + ": doc '" + id + "' not in corpus; skipped");
                current = nullptr;
                skipping = true;
                continue;
            }
            skipping = false;
            auto [it, inserted] = out.counts.try_emplace(id, PosCounts{});
            if (inserted)
                out.doc_order.push_back(id);
            current = &it->second;
            continue;
        }
        if (line.front() == '#')
            continue; // other comments
        auto tab = line.rfind('\t');
        if (tab == std::string_view::npos)
            throw ParseError("pos annotations: expected '<token>\\t<TAG>'", line_no);
        auto tag = unicode::trim(line.substr(tab + 1));
        auto idx = pos_tag_index(tag);
        if (!idx)
            throw ParseError("pos annotations: unknown tag '" + std::string(tag) + "'", line_no);
        if (skipping)
            continue;
        if (!current)
            throw ParseError("pos annotations: token outside a '# doc' block", line_no);
        ++(*current)[*idx];
    }
    return out;
}

inline PosAnnotations ingest_pos_annotations(const std::string& path, const std::set<std::string>* known_docs = nullptr)
{
    return parse_pos_annotations(csv::read_file(path), known_docs);
}

} // namespace lexcontrast

#endif
