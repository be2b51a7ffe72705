#include <lexcontrast/csv.hpp>

#include <gtest/gtest.h>

using namespace lexcontrast;

TEST(Csv, ParsesQuotedFieldsWithCommasQuotesAndNewlines)
{
    auto rows = csv::parse("a,b,c\n1,\"x, y\",\"he said \"\"hi\"\"\"\n2,\"multi\nline\",\n");
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[1][1], "x, y");
    EXPECT_EQ(rows[1][2], "he said \"hi\"");
    EXPECT_EQ(rows[2][1], "multi\nline");
    ASSERT_EQ(rows[2].size(), 3u);
    EXPECT_EQ(rows[2][2], "");
}

TEST(Csv, AcceptsCrlfAndByteOrderMark)
{
    auto rows = csv::parse("\xEF\xBB\xBFid,name\r\n1,x\r\n");
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0][0], "id");
    EXPECT_EQ(rows[1][1], "x");
}

TEST(Csv, EmptyInputHasNoRows) { EXPECT_TRUE(csv::parse("").empty()); }

TEST(Csv, UnterminatedQuoteIsAnError) { EXPECT_THROW(csv::parse("a,\"open\n"), ParseError); }

TEST(Csv, FormatRoundTrips)
{
    std::vector<csv::Row> rows{{"term", "note"}, {"don't", "a, b"}, {"q\"uote", "line\nbreak"}, {"", "x"}};
    EXPECT_EQ(csv::parse(csv::format(rows)), rows);
}

TEST(Csv, ColumnIndexReportsMissingColumns)
{
    csv::Row header{"talk_id", "text"};
    EXPECT_EQ(csv::column_index(header, "text"), 1u);
    EXPECT_EQ(csv::column_index(header, "missing"), static_cast<std::size_t>(-1));
}
