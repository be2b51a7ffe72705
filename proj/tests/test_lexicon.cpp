#include "test_support.hpp"

#include <lexcontrast/lexicon.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace lexcontrast;

namespace {

TokenSequence seq(std::vector<std::string> t) { return TokenSequence{std::move(t)}; }

/// Reference scan: every entry is examined for every token; the winning entry is a
/// literal equal to the token, else the matching stem with the most characters.
std::vector<std::int64_t> scan_oracle(const TokenSequence& tokens, const Lexicon& lex)
{
    std::vector<std::int64_t> counts(lex.categories().size(), 0);
    for (const auto& tok : tokens) {
        const LexiconEntry* best = nullptr;
        for (const auto& e : lex.entries()) {
            if (!e.is_stem() && e.pattern == tok) {
                best = &e;
                break;
            }
        }
        if (!best) {
            for (const auto& e : lex.entries()) {
                if (!e.is_stem())
                    continue;
                auto stem = e.stem();
                bool prefix = tok.size() >= stem.size() && tok.compare(0, stem.size(), stem) == 0;
                if (prefix && (!best || stem.size() > best->stem().size()))
                    best = &e;
            }
        }
        if (!best)
            continue;
        for (int id : best->categories)
            for (std::size_t k = 0; k < lex.categories().size(); ++k)
                if (lex.categories()[k].id == id)
                    ++counts[k];
    }
    return counts;
}

} // namespace

TEST(Lexicon, SingleCategorySingleLiteral)
{
    auto lex = parse_lexicon("%\n1\tpronoun\n%\nwe\t1\n");
    ASSERT_EQ(lex.categories().size(), 1u);
    EXPECT_EQ(lex.categories()[0].name, "pronoun");
    ASSERT_EQ(lex.entries().size(), 1u);
    EXPECT_FALSE(lex.entries()[0].is_stem());
    EXPECT_EQ(categorize_counts(seq({"we", "we"}), lex), (std::vector<std::int64_t>{2}));
}

TEST(Lexicon, StemEntryInTwoCategories)
{
    auto lex = parse_lexicon("%\n20\tposemo\n31\tsocial\n%\nfriendli*\t20\t31\n");
    ASSERT_EQ(lex.entries().size(), 1u);
    EXPECT_TRUE(lex.entries()[0].is_stem());
    EXPECT_EQ(lex.entries()[0].stem(), "friendli");
    EXPECT_EQ(lex.entries()[0].categories, (std::vector<int>{20, 31}));
    EXPECT_EQ(categorize_counts(seq({"friendliest", "friend"}), lex), (std::vector<std::int64_t>{1, 1}));
}

TEST(Lexicon, WhitespaceSeparatedFieldsAreAccepted)
{
    auto lex = parse_lexicon("%\n1 function\n2 pronoun\n%\nwe 1 2\n");
    EXPECT_EQ(lex.entries()[0].categories, (std::vector<int>{1, 2}));
}

TEST(Lexicon, LiteralBeatsStemAndLongestStemWins)
{
    auto lex = parse_lexicon("%\n1\ta\n2\tb\n3\tc\n%\nwork*\t1\nworker*\t2\nworks\t3\n");
    EXPECT_EQ(categorize_counts(seq({"works"}), lex), (std::vector<std::int64_t>{0, 0, 1}));
    EXPECT_EQ(categorize_counts(seq({"workers"}), lex), (std::vector<std::int64_t>{0, 1, 0}));
    EXPECT_EQ(categorize_counts(seq({"working"}), lex), (std::vector<std::int64_t>{1, 0, 0}));
    EXPECT_EQ(categorize_counts(seq({"wor"}), lex), (std::vector<std::int64_t>{0, 0, 0}));
}

TEST(Lexicon, UndeclaredCategoryReportsLine)
{
    try {
        parse_lexicon("%\n1\tpronoun\n%\nwe\t1\nthey\t7\n");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.location(), 5u);
    }
}

TEST(Lexicon, MalformedHeadersAreErrors)
{
    EXPECT_THROW(parse_lexicon("1\tpronoun\n%\nwe\t1\n"), ParseError);
    EXPECT_THROW(parse_lexicon("%\n1\tpronoun\nwe\t1\n"), ParseError);
    EXPECT_THROW(parse_lexicon("%\none\tpronoun\n%\n"), ParseError);
    EXPECT_THROW(parse_lexicon("%\n1\tpronoun\textra\n%\n"), ParseError);
    EXPECT_THROW(parse_lexicon("%\n1\ta\n1\tb\n%\n"), ParseError);
    EXPECT_THROW(parse_lexicon("%\n1\ta\n%\nw*rd\t1\n"), ParseError);
    EXPECT_THROW(parse_lexicon("%\n1\ta\n%\nword\n"), ParseError);
}

TEST(Lexicon, ShippedOpenLexiconLoads)
{
    auto lex = load_lexicon(lexcontrast::testing::data_path("open_lexicon.dic"));
    EXPECT_EQ(lex.categories().size(), 12u);
    EXPECT_EQ(lex.entries().size(), 50u);
    auto c = categorize_counts(seq({"i", "love", "my", "family", "because", "families", "working"}), lex);
    EXPECT_EQ(c, scan_oracle(seq({"i", "love", "my", "family", "because", "families", "working"}), lex));
}

TEST(Lexicon, HundredTokenFixtureMatchesScanOracle)
{
    auto lex = parse_lexicon("%\n1\tpronoun\n2\tposemo\n3\tsocial\n4\twork\n%\n"
                             "i\t1\nwe\t1\t3\nlove\t2\nhapp*\t2\nfriend*\t2\t3\nfriendship\t3\n"
                             "work*\t4\nworker*\t3\t4\njob\t4\ntalk*\t3\n");
    ASSERT_EQ(lex.entries().size(), 10u);
    const std::vector<std::string> vocab{"i",       "we",     "love",   "happy",   "happiness", "friend",
                                         "friends", "friendship", "work", "working", "workers",  "job",
                                         "jobs",    "talk",   "talking", "the",    "a",         "hap"};
    std::mt19937_64 rng(3);
    std::vector<std::string> toks;
    for (int i = 0; i < 100; ++i)
        toks.push_back(vocab[rng() % vocab.size()]);
    auto doc = seq(toks);
    EXPECT_EQ(categorize_counts(doc, lex), scan_oracle(doc, lex));
}

TEST(LexiconProperty, CountsMatchScanOracleAndStayBounded)
{
    std::mt19937_64 rng(99);
    const std::string letters = "abc";
    auto word = [&](std::size_t max_len) {
        std::string w;
        auto len = 1 + rng() % max_len;
        for (std::size_t i = 0; i < len; ++i)
            w += letters[rng() % letters.size()];
        return w;
    };
    for (int trial = 0; trial < 300; ++trial) {
        std::string text = "%\n1\tx\n2\ty\n3\tz\n%\n";
        auto n_entries = 1 + rng() % 12;
        for (std::size_t e = 0; e < n_entries; ++e) {
            text += word(4);
            if (rng() % 2)
                text += "*";
            auto n_cats = 1 + rng() % 3;
            for (std::size_t c = 0; c < n_cats; ++c)
                text += "\t" + std::to_string(1 + rng() % 3);
            text += "\n";
        }
        auto lex = parse_lexicon(text);
        std::size_t max_cats = 0;
        for (const auto& e : lex.entries())
            max_cats = std::max(max_cats, e.categories.size());
        std::vector<std::string> toks;
        auto n_tokens = rng() % 40;
        for (std::size_t i = 0; i < n_tokens; ++i)
            toks.push_back(word(6));
        auto doc = seq(toks);
        auto counts = categorize_counts(doc, lex);
        ASSERT_EQ(counts, scan_oracle(doc, lex)) << text;
        std::int64_t total = 0;
        for (auto c : counts) {
            EXPECT_GE(c, 0);
            total += c;
        }
        EXPECT_LE(total, static_cast<std::int64_t>(doc.size() * max_cats));
    }
}
