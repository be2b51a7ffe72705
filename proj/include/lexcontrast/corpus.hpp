#ifndef LEXCONTRAST_CORPUS_HPP
#define LEXCONTRAST_CORPUS_HPP

// Transcript loading, speaker metadata join, one-talk-per-speaker dedup and the
// known-gender filter.

#include <lexcontrast/csv.hpp>
#include <lexcontrast/error.hpp>
#include <lexcontrast/tokenizer.hpp>
#include <lexcontrast/unicode.hpp>

#include <json.hpp>

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace lexcontrast {

enum class Gender { Male, Female, Unknown };

inline std::string_view to_string(Gender g)
{
    switch (g) {
    case Gender::Male: return "male";
    case Gender::Female: return "female";
    default: return "unknown";
    }
}

/// Case-insensitive {male, female, m, f}; anything else is Unknown.
inline Gender parse_gender(std::string_view s)
{
    std::string v = unicode::to_lower(unicode::trim(s));
    if (v == "male" || v == "m")
        return Gender::Male;
    if (v == "female" || v == "f")
        return Gender::Female;
    return Gender::Unknown;
}

struct Transcript {
    std::string talk_id;
    std::string speaker_name;
    std::string text;
    std::optional<std::string> published; // ISO-8601 date, compared lexicographically
    std::optional<double> duration_seconds;

    friend bool operator==(const Transcript&, const Transcript&) = default;
};

struct SpeakerRecord {
    std::string speaker_name;
    Gender gender = Gender::Unknown;
    std::optional<std::string> origin;

    friend bool operator==(const SpeakerRecord&, const SpeakerRecord&) = default;
};

struct Document {
    Transcript transcript;
    SpeakerRecord speaker;

    friend bool operator==(const Document&, const Document&) = default;
};

struct AnnotatedCorpus {
    std::vector<Document> documents;
    std::string group_field = "gender";

    std::size_t size() const noexcept { return documents.size(); }
    bool empty() const noexcept { return documents.empty(); }

    friend bool operator==(const AnnotatedCorpus&, const AnnotatedCorpus&) = default;
};

enum class TranscriptFormat { csv, jsonl };
enum class DedupPolicy { first, longest, earliest_published };

inline DedupPolicy parse_dedup_policy(std::string_view s)
{
    if (s == "first") return DedupPolicy::first;
    if (s == "longest") return DedupPolicy::longest;
    if (s == "earliest_published") return DedupPolicy::earliest_published;
    throw Error("unknown dedup policy: " + std::string(s));
}

inline std::string_view to_string(DedupPolicy p)
{
    switch (p) {
    case DedupPolicy::longest: return "longest";
    case DedupPolicy::earliest_published: return "earliest_published";
    default: return "first";
    }
}

inline TranscriptFormat parse_transcript_format(std::string_view s)
{
    if (s == "csv") return TranscriptFormat::csv;
    if (s == "jsonl") return TranscriptFormat::jsonl;
    throw Error("unknown transcript format: " + std::string(s));
}

/// Join key for speaker names: the first listed name of a multi-speaker credit,
/// NFC-normalised and trimmed.
inline std::string speaker_key(std::string_view name)
{
    std::size_t cut = name.find_first_of("+&;");
    return unicode::normalize_name(name.substr(0, cut));
}

namespace detail {

inline void check_transcript(const Transcript& t, std::size_t record)
{
    if (unicode::trim(t.text).empty())
        throw ParseError("transcript '" + t.talk_id + "' has empty text", record);
    if (t.talk_id.empty())
        throw ParseError("transcript record has empty talk_id", record);
    if (t.duration_seconds && *t.duration_seconds < 0)
        throw ParseError("transcript '" + t.talk_id + "' has negative duration", record);
}

inline std::optional<double> parse_optional_number(const std::string& s, std::size_t record)
{
    auto v = unicode::trim(s);
    if (v.empty())
        return std::nullopt;
    try {
        std::size_t used = 0;
        double d = std::stod(std::string(v), &used);
        if (used != v.size())
            throw std::invalid_argument("trailing");
        return d;
    } catch (const std::exception&) {
        throw ParseError("invalid number '" + std::string(v) + "'", record);
    }
}

inline std::vector<Transcript> parse_transcripts_csv(std::string_view content)
{
    auto rows = csv::parse(content);
    if (rows.empty())
        return {};
    const auto& header = rows.front();
    auto col = [&](std::string_view name) { return csv::column_index(header, name); };
    const std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t id_col = col("talk_id"), name_col = col("speaker_name"), text_col = col("text");
    std::size_t pub_col = col("published"), dur_col = col("duration_seconds");
    if (id_col == npos || name_col == npos || text_col == npos)
        throw ParseError("transcript csv: header must contain talk_id, speaker_name, text", 0);

    std::vector<Transcript> out;
    out.reserve(rows.size() - 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() == 1 && row[0].empty())
            continue; // blank line
        auto field = [&](std::size_t c) -> const std::string* { return c < row.size() ? &row[c] : nullptr; };
        if (!field(id_col) || !field(name_col) || !field(text_col))
            throw ParseError("transcript csv: record is missing a required field", r);
        Transcript t;
        t.talk_id = *field(id_col);
        t.speaker_name = *field(name_col);
        t.text = *field(text_col);
        if (pub_col != npos && field(pub_col) && !unicode::trim(*field(pub_col)).empty())
            t.published = std::string(unicode::trim(*field(pub_col)));
        if (dur_col != npos && field(dur_col))
            t.duration_seconds = parse_optional_number(*field(dur_col), r);
        check_transcript(t, r);
        out.push_back(std::move(t));
    }
    return out;
}

inline std::vector<Transcript> parse_transcripts_jsonl(std::string_view content)
{
    std::vector<Transcript> out;
    std::istringstream in{std::string(content)};
    std::string line;
    std::size_t record = 0;
    while (std::getline(in, line)) {
        if (unicode::trim(line).empty())
            continue;
        ++record;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("transcript jsonl: ") + e.what(), record);
        }
        for (const char* key : {"talk_id", "speaker_name", "text"})
            if (!j.contains(key) || !j[key].is_string())
                throw ParseError(std::string("transcript jsonl: missing field '") + key + "'", record);
        Transcript t;
        t.talk_id = j["talk_id"].get<std::string>();
        t.speaker_name = j["speaker_name"].get<std::string>();
        t.text = j["text"].get<std::string>();
        if (j.contains("published") && j["published"].is_string())
            t.published = j["published"].get<std::string>();
        if (j.contains("duration_seconds") && j["duration_seconds"].is_number())
            t.duration_seconds = j["duration_seconds"].get<double>();
        check_transcript(t, record);
        out.push_back(std::move(t));
    }
    return out;
}

} // namespace detail

/// Parses transcripts from memory. Records keep file order; talk ids must be unique.
inline std::vector<Transcript> parse_transcripts(std::string_view content, TranscriptFormat format)
{
    auto out = format == TranscriptFormat::csv ? detail::parse_transcripts_csv(content)
                                               : detail::parse_transcripts_jsonl(content);
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < out.size(); ++i)
        if (!seen.insert(out[i].talk_id).second)
            throw ParseError("duplicate talk_id '" + out[i].talk_id + "'", i + 1);
    return out;
}

inline std::vector<Transcript> load_transcripts(const std::string& path, TranscriptFormat format)
{
    return parse_transcripts(csv::read_file(path), format);
}

/// Metadata CSV: speaker_name, gender[, origin].
inline std::vector<SpeakerRecord> parse_speaker_metadata(std::string_view content)
{
    auto rows = csv::parse(content);
    if (rows.empty())
        return {};
    const auto& header = rows.front();
    const std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t name_col = csv::column_index(header, "speaker_name");
    std::size_t gender_col = csv::column_index(header, "gender");
    std::size_t origin_col = csv::column_index(header, "origin");
    if (name_col == npos)
        throw ParseError("metadata csv: header must contain speaker_name", 0);

    std::vector<SpeakerRecord> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() == 1 && row[0].empty())
            continue;
        if (name_col >= row.size() || unicode::trim(row[name_col]).empty())
            throw ParseError("metadata csv: empty speaker_name", r);
        SpeakerRecord rec;
        rec.speaker_name = row[name_col];
        if (gender_col != npos && gender_col < row.size())
            rec.gender = parse_gender(row[gender_col]);
        if (origin_col != npos && origin_col < row.size() && !unicode::trim(row[origin_col]).empty())
            rec.origin = std::string(unicode::trim(row[origin_col]));
        out.push_back(std::move(rec));
    }
    return out;
}

inline std::vector<SpeakerRecord> load_speaker_metadata(const std::string& path)
{
    return parse_speaker_metadata(csv::read_file(path));
}

/// Pairs every transcript with the metadata record of the same (normalised) speaker
/// name. Transcripts without a match get gender Unknown. Output size equals input size.
inline AnnotatedCorpus join_speaker_metadata(const std::vector<Transcript>& transcripts,
                                             const std::vector<SpeakerRecord>& metadata)
{
    std::unordered_map<std::string, const SpeakerRecord*> by_name;
    std::set<std::string> conflicts;
    for (const auto& rec : metadata) {
        auto key = unicode::normalize_name(rec.speaker_name);
        auto [it, inserted] = by_name.emplace(key, &rec);
        if (!inserted && it->second->gender != rec.gender)
            conflicts.insert(key);
    }
    if (!conflicts.empty()) {
        std::string names;
        for (const auto& n : conflicts)
            names += (names.empty() ? "" : ", ") + n;
        throw Error("conflicting gender for speaker(s): " + names);
    }

    AnnotatedCorpus corpus;
    corpus.documents.reserve(transcripts.size());
    for (const auto& t : transcripts) {
        Document doc{t, {}};
        auto key = speaker_key(t.speaker_name);
        if (auto it = by_name.find(key); it != by_name.end())
            doc.speaker = *it->second;
        else
            doc.speaker.speaker_name = t.speaker_name;
        corpus.documents.push_back(std::move(doc));
    }
    return corpus;
}

/// Keeps exactly one document per speaker. Ties under `longest` and
/// `earliest_published` resolve to file order; talks without a date sort last.
inline AnnotatedCorpus dedup_one_per_speaker(const AnnotatedCorpus& corpus, DedupPolicy policy,
                                             const TokenizerConfig& tokenizer = {})
{
    std::unordered_map<std::string, std::size_t> chosen; // key -> document index
    std::vector<std::string> order;
    std::vector<std::size_t> lengths;
    if (policy == DedupPolicy::longest) {
        lengths.reserve(corpus.size());
        for (const auto& d : corpus.documents)
            lengths.push_back(tokenize(d.transcript.text, tokenizer).size());
    }
    auto better = [&](std::size_t cand, std::size_t cur) {
        const auto& a = corpus.documents[cand].transcript;
        const auto& b = corpus.documents[cur].transcript;
        switch (policy) {
        case DedupPolicy::longest:
            return lengths[cand] > lengths[cur];
        case DedupPolicy::earliest_published:
            if (!a.published)
                return false;
            return !b.published || *a.published < *b.published;
        default:
            return false;
        }
    };
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        auto key = speaker_key(corpus.documents[i].transcript.speaker_name);
        auto [it, inserted] = chosen.emplace(key, i);
        if (inserted)
            order.push_back(key);
        else if (better(i, it->second))
            it->second = i;
    }
    // retained documents keep their relative file order
    std::vector<std::size_t> keep;
    keep.reserve(order.size());
    for (const auto& k : order)
        keep.push_back(chosen[k]);
    std::sort(keep.begin(), keep.end());

    AnnotatedCorpus out;
    out.group_field = corpus.group_field;
    for (auto i : keep)
        out.documents.push_back(corpus.documents[i]);
    return out;
}

/// Drops documents whose speaker gender is Unknown. Throws when nothing remains.
inline AnnotatedCorpus filter_known_gender(const AnnotatedCorpus& corpus)
{
    AnnotatedCorpus out;
    out.group_field = corpus.group_field;
    for (const auto& d : corpus.documents)
        if (d.speaker.gender != Gender::Unknown)
            out.documents.push_back(d);
    if (out.empty())
        throw Error("no documents with known gender remain");
    return out;
}

/// Group label -> document count.
inline std::map<std::string, std::size_t> group_sizes(const AnnotatedCorpus& corpus)
{
    std::map<std::string, std::size_t> sizes;
    for (const auto& d : corpus.documents)
        ++sizes[std::string(to_string(d.speaker.gender))];
    return sizes;
}

inline std::string group_label(const Document& d) { return std::string(to_string(d.speaker.gender)); }

// Serialisation of an annotated corpus as JSONL, one document per line.

inline std::string serialize_corpus(const AnnotatedCorpus& corpus)
{
    std::string out;
    for (const auto& d : corpus.documents) {
        nlohmann::ordered_json j;
        j["talk_id"] = d.transcript.talk_id;
        j["speaker_name"] = d.transcript.speaker_name;
        j["text"] = d.transcript.text;
        if (d.transcript.published)
            j["published"] = *d.transcript.published;
        if (d.transcript.duration_seconds)
            j["duration_seconds"] = *d.transcript.duration_seconds;
        j["metadata_speaker_name"] = d.speaker.speaker_name;
        j["gender"] = to_string(d.speaker.gender);
        if (d.speaker.origin)
            j["origin"] = *d.speaker.origin;
        j["group_field"] = corpus.group_field;
        out += j.dump();
        out.push_back('\n');
    }
    return out;
}

inline AnnotatedCorpus parse_corpus(std::string_view content)
{
    AnnotatedCorpus corpus;
    auto transcripts = detail::parse_transcripts_jsonl(content);
    std::istringstream in{std::string(content)};
    std::string line;
    std::size_t i = 0;
    while (std::getline(in, line)) {
        if (unicode::trim(line).empty())
            continue;
        auto j = nlohmann::json::parse(line);
        Document doc{std::move(transcripts[i]), {}};
        doc.speaker.speaker_name = j.value("metadata_speaker_name", doc.transcript.speaker_name);
        doc.speaker.gender = parse_gender(j.value("gender", std::string("unknown")));
        if (j.contains("origin") && j["origin"].is_string())
            doc.speaker.origin = j["origin"].get<std::string>();
        corpus.group_field = j.value("group_field", std::string("gender"));
        corpus.documents.push_back(std::move(doc));
        ++i;
    }
    return corpus;
}

} // namespace lexcontrast

#endif
