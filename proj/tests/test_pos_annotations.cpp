#include "test_support.hpp"

#include <lexcontrast/pos_annotations.hpp>

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace lexcontrast;

namespace {

std::int64_t tag_count(const PosCounts& c, std::string_view tag) { return c[*pos_tag_index(tag)]; }

} // namespace

TEST(PosAnnotations, CountsOneDocument)
{
    auto a = parse_pos_annotations("# doc d1\nthe\tDET\ncat\tNOUN\nsleeps\tVERB\n");
    ASSERT_EQ(a.doc_order, (std::vector<std::string>{"d1"}));
    const auto& c = a.counts.at("d1");
    EXPECT_EQ(tag_count(c, "DET"), 1);
    EXPECT_EQ(tag_count(c, "NOUN"), 1);
    EXPECT_EQ(tag_count(c, "VERB"), 1);
    std::int64_t total = 0;
    for (auto v : c)
        total += v;
    EXPECT_EQ(total, 3);
}

TEST(PosAnnotations, EmptyBlockIsAllZero)
{
    auto a = parse_pos_annotations("# doc empty\n\n# doc d2\nhi\tINTJ\n");
    ASSERT_EQ(a.doc_order.size(), 2u);
    for (auto v : a.counts.at("empty"))
        EXPECT_EQ(v, 0);
}

TEST(PosAnnotations, UnknownTagReportsLine)
{
    try {
        parse_pos_annotations("# doc d1\nthe\tDET\ncat\tNOUNISH\n");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.location(), 3u);
    }
}

TEST(PosAnnotations, UnknownDocumentIsSkippedWithWarning)
{
    std::set<std::string> known{"d1"};
    auto a = parse_pos_annotations("# doc d1\nx\tNOUN\n\n# doc ghost\ny\tVERB\nz\tVERB\n", &known);
    EXPECT_EQ(a.counts.size(), 1u);
    ASSERT_EQ(a.warnings.size(), 1u);
    EXPECT_NE(a.warnings[0].find("ghost"), std::string::npos);
}

TEST(PosAnnotations, TokenOutsideBlockIsAnError)
{
    EXPECT_THROW(parse_pos_annotations("x\tNOUN\n"), ParseError);
    EXPECT_THROW(parse_pos_annotations("# doc d1\nno-tab-here\n"), ParseError);
}

TEST(PosAnnotations, InventoryHasNineteenTags) { EXPECT_EQ(pos_tags.size(), 19u); }

TEST(PosAnnotations, FiftyTokenFixtureMatchesLineTally)
{
    std::mt19937_64 rng(5);
    std::ostringstream file;
    std::map<std::string, std::map<std::string, std::int64_t>> tally;
    const std::vector<std::string> docs{"a", "b", "c"};
    std::size_t emitted = 0;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        file << "# doc " << docs[d] << "\n";
        std::size_t n = d + 1 < docs.size() ? 17 : 50 - emitted;
        for (std::size_t i = 0; i < n; ++i) {
            std::string tag(pos_tags[rng() % pos_tags.size()]);
            file << "tok" << i << "\t" << tag << "\n";
            ++tally[docs[d]][tag];
        }
        emitted += n;
        file << "\n";
    }
    ASSERT_EQ(emitted, 50u);
    auto a = parse_pos_annotations(file.str());
    std::int64_t total = 0;
    for (const auto& d : docs)
        for (auto tag : pos_tags) {
            auto expected = tally[d].count(std::string(tag)) ? tally[d][std::string(tag)] : 0;
            EXPECT_EQ(tag_count(a.counts.at(d), tag), expected);
            total += tag_count(a.counts.at(d), tag);
        }
    EXPECT_EQ(total, 50);
}

TEST(PosAnnotations, ShippedDemoFileLoads)
{
    auto a = ingest_pos_annotations(lexcontrast::testing::data_path("demo_pos.tsv"));
    EXPECT_EQ(a.doc_order.size(), 80u);
}
