#include <lexcontrast/cli.hpp>
#include <lexcontrast/config.hpp>

#include <gtest/gtest.h>

using namespace lexcontrast;

TEST(RunConfig, DefaultsAreComplete)
{
    RunConfig cfg;
    EXPECT_EQ(cfg.seed(), 42u);
    EXPECT_EQ(cfg.number("log_odds.alpha0"), 1.0);
    EXPECT_EQ(cfg.integer("k"), 5);
    EXPECT_EQ(cfg.str("dedup_policy"), "first");
    EXPECT_TRUE(cfg.flag("tokenizer.strip_stage_directions"));
    EXPECT_FALSE(cfg.path("transcripts"));
    EXPECT_FALSE(cfg.is_set("seed"));
}

TEST(RunConfig, ParsesFlatKeyValueFiles)
{
    auto cfg = RunConfig::parse("# comment\n\nseed = 7\n  log_odds.alpha0=2.5  \nlevene_center = mean\n");
    EXPECT_EQ(cfg.seed(), 7u);
    EXPECT_EQ(cfg.number("log_odds.alpha0"), 2.5);
    EXPECT_EQ(cfg.str("levene_center"), "mean");
    EXPECT_TRUE(cfg.is_set("seed"));
}

TEST(RunConfig, RejectsBadInput)
{
    try {
        RunConfig::parse("seed = 1\nnot a pair\n");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("2"), std::string::npos);
    }
    EXPECT_THROW(RunConfig::parse("no_such_key = 3\n"), Error);
    auto cfg = RunConfig::parse("seed = -1\nk = five\ntolerance = 1e-6x\ntokenizer.keep_hyphenated = maybe\n");
    EXPECT_THROW(cfg.seed(), Error);
    EXPECT_THROW(cfg.integer("k"), Error);
    EXPECT_THROW(cfg.number("tolerance"), Error);
    EXPECT_THROW(cfg.flag("tokenizer.keep_hyphenated"), Error);
}

TEST(RunConfig, CommandLineOverridesFileValues)
{
    auto cfg = RunConfig::parse("seed = 7\nk = 3\n");
    cli::apply_overrides(cfg, {"--k", "4", "--log-odds.alpha0=10", "--dedup_policy", "longest"});
    EXPECT_EQ(cfg.integer("k"), 4);
    EXPECT_EQ(cfg.number("log_odds.alpha0"), 10);
    EXPECT_EQ(cfg.str("dedup_policy"), "longest");
    EXPECT_EQ(cfg.seed(), 7u);
    EXPECT_THROW(cli::apply_overrides(cfg, {"--bogus", "1"}), Error);
    EXPECT_THROW(cli::apply_overrides(cfg, {"--k"}), Error);
    EXPECT_THROW(cli::apply_overrides(cfg, {"stray"}), Error);
}
