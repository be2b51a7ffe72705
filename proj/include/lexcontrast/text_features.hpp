#ifndef LEXCONTRAST_TEXT_FEATURES_HPP
#define LEXCONTRAST_TEXT_FEATURES_HPP

#include <lexcontrast/corpus.hpp>
#include <lexcontrast/error.hpp>
#include <lexcontrast/mv_stats.hpp>
#include <lexcontrast/tokenizer.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lexcontrast {

/// A corpus after tokenization, aligned with the source documents.
struct TokenizedCorpus {
    std::vector<std::string> doc_ids;
    std::vector<std::string> labels;
    std::vector<TokenSequence> docs;

    std::size_t size() const noexcept { return docs.size(); }
};

inline TokenizedCorpus tokenize_corpus(const AnnotatedCorpus& corpus, const TokenizerConfig& rules = {})
{
    TokenizedCorpus out;
    out.doc_ids.reserve(corpus.size());
    out.labels.reserve(corpus.size());
    out.docs.reserve(corpus.size());
    for (const auto& d : corpus.documents) {
        out.doc_ids.push_back(d.transcript.talk_id);
        out.labels.push_back(group_label(d));
        out.docs.push_back(tokenize(d.transcript.text, rules));
    }
    return out;
}

/// Canonical group order: male, female, then any other label alphabetically.
inline std::vector<std::string> ordered_groups(const std::vector<std::string>& labels)
{
    std::vector<std::string> out;
    for (const char* known : {"male", "female"})
        if (std::find(labels.begin(), labels.end(), known) != labels.end())
            out.emplace_back(known);
    std::vector<std::string> rest;
    for (const auto& l : labels)
        if (l != "male" && l != "female" && std::find(rest.begin(), rest.end(), l) == rest.end())
            rest.push_back(l);
    std::sort(rest.begin(), rest.end());
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

struct GroupWordCounts {
    std::string group;
    stats::Descriptive stats;
};

/// Per-group mean/min/max/sd of document token counts, groups in canonical order.
inline std::vector<GroupWordCounts> word_count_stats(const TokenizedCorpus& corpus)
{
    std::vector<GroupWordCounts> out;
    for (const auto& g : ordered_groups(corpus.labels)) {
        std::vector<double> counts;
        for (std::size_t i = 0; i < corpus.size(); ++i)
            if (corpus.labels[i] == g)
                counts.push_back(static_cast<double>(corpus.docs[i].size()));
        out.push_back({g, stats::descriptive_stats(counts)});
    }
    return out;
}

inline std::vector<GroupWordCounts> word_count_stats(const AnnotatedCorpus& corpus, const TokenizerConfig& rules = {})
{
    return word_count_stats(tokenize_corpus(corpus, rules));
}

/// Group-wise n-gram counts. `counts[term][k]` is the count in `groups[k]`.
struct FrequencyTable {
    int n = 1;
    std::vector<std::string> groups;
    std::map<std::string, std::vector<std::int64_t>> counts;

    std::int64_t pooled(const std::string& term) const
    {
        auto it = counts.find(term);
        if (it == counts.end())
            return 0;
        std::int64_t s = 0;
        for (auto c : it->second)
            s += c;
        return s;
    }

    std::int64_t group_total(std::size_t k) const
    {
        std::int64_t s = 0;
        for (const auto& [term, c] : counts)
            s += c[k];
        return s;
    }

    std::size_t group_index(const std::string& name) const
    {
        auto it = std::find(groups.begin(), groups.end(), name);
        if (it == groups.end())
            throw Error("frequency table has no group '" + name + "'");
        return static_cast<std::size_t>(it - groups.begin());
    }
};

inline std::string ngram_at(const TokenSequence& doc, std::size_t i, int n)
{
    std::string term = doc[i];
    for (int k = 1; k < n; ++k) {
        term.push_back(' ');
        term += doc[i + static_cast<std::size_t>(k)];
    }
    return term;
}

/// Contiguous n-gram counts per group (n = 1 or 2). N-grams never span documents.
inline FrequencyTable ngram_frequencies(const TokenizedCorpus& corpus, int n)
{
    if (n != 1 && n != 2)
        throw Error("ngram order must be 1 or 2");
    FrequencyTable table;
    table.n = n;
    table.groups = ordered_groups(corpus.labels);
    const std::size_t g = table.groups.size();
    for (std::size_t d = 0; d < corpus.size(); ++d) {
        std::size_t k = table.group_index(corpus.labels[d]);
        const auto& doc = corpus.docs[d];
        if (doc.size() < static_cast<std::size_t>(n))
            continue;
        for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= doc.size(); ++i) {
            auto& slot = table.counts[ngram_at(doc, i, n)];
            if (slot.empty())
                slot.assign(g, 0);
            ++slot[k];
        }
    }
    return table;
}

inline FrequencyTable ngram_frequencies(const AnnotatedCorpus& corpus, int n, const TokenizerConfig& rules = {})
{
    return ngram_frequencies(tokenize_corpus(corpus, rules), n);
}

/// Terms counted in both of the first two groups, with their counts.
struct SharedFrequencies {
    std::vector<std::string> terms;
    std::vector<double> group_a;
    std::vector<double> group_b;
};

inline SharedFrequencies shared_terms(const FrequencyTable& table)
{
    if (table.groups.size() < 2)
        throw Error("shared terms need two groups");
    SharedFrequencies s;
    for (const auto& [term, c] : table.counts) {
        if (c[0] > 0 && c[1] > 0) {
            s.terms.push_back(term);
            s.group_a.push_back(static_cast<double>(c[0]));
            s.group_b.push_back(static_cast<double>(c[1]));
        }
    }
    return s;
}

/// Pearson correlation of the two groups' frequencies over shared terms.
inline stats::Correlation frequency_correlation(const FrequencyTable& table, double confidence = 0.95)
{
    auto s = shared_terms(table);
    return stats::pearson_correlation(s.group_a, s.group_b, confidence);
}

} // namespace lexcontrast

#endif
