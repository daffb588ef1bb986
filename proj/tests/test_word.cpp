#include <gtest/gtest.h>

#include "autocx/word.hpp"
#include "oracles.hpp"

using namespace autocx;

TEST(Word, ParsesPlainAndExponentNotation)
{
    EXPECT_EQ(Word::parse("00101").str(), "00101");
    EXPECT_EQ(Word::parse("0^5 1 0^5 1^6 01000").str(), "0000010000011111101000");
    EXPECT_EQ(Word::parse("(01)^3").str(), "010101");
    EXPECT_EQ(Word::parse("0102010", 3).alphabet_size(), 3);
    EXPECT_EQ(Word::parse("012").alphabet_size(), 3);
    EXPECT_EQ(Word::parse("0").alphabet_size(), 2);
}

TEST(Word, RejectsMalformedInput)
{
    EXPECT_THROW(Word::parse("0^"), ParseError);
    EXPECT_THROW(Word::parse("0#1"), ParseError);
    EXPECT_THROW(Word::parse("0x1", 2), ParseError);
    EXPECT_THROW(Word::parse("(01"), ParseError);
    EXPECT_THROW(Word::parse("2", 2), ParseError);
    EXPECT_THROW(Word({0, 3}, 2), std::invalid_argument);
}

TEST(Word, ComplementAndReverse)
{
    Word x = Word::parse("0011010");
    EXPECT_EQ(x.complement().str(), "1100101");
    EXPECT_EQ(x.reversed().str(), "0101100");
    EXPECT_EQ(Word::parse("012", 3).complement().str(), "210");
}

TEST(Word, AllWordsEnumeratesInOrder)
{
    auto w = all_words(3, 2);
    ASSERT_EQ(w.size(), 8u);
    EXPECT_EQ(w.front().str(), "000");
    EXPECT_EQ(w[5].str(), "101");
    EXPECT_EQ(all_words(4, 3).size(), 81u);
    EXPECT_EQ(all_words(0, 2).size(), 1u);
}

TEST(Runs, KnownExamples)
{
    auto r = find_runs(Word::parse("0011010"), 2);
    EXPECT_NE(std::find(r.begin(), r.end(), autocx::Run{5, 2, 2}), r.end());

    Word zeros = Word::parse("0^9");
    auto z = find_runs(zeros, 1);
    EXPECT_NE(std::find(z.begin(), z.end(), autocx::Run{1, 1, 8}), z.end());

    EXPECT_TRUE(find_runs(Word::parse("01"), 1).empty());
    EXPECT_THROW(find_runs(Word::parse("01"), 0), std::invalid_argument);
}

TEST(Runs, MaxRunLength)
{
    EXPECT_EQ(max_run_length(Word::parse("0011010")), 2u);
    EXPECT_EQ(max_run_length(Word::parse("0^12")), 11u);
    EXPECT_EQ(max_run_length(Word::parse("01")), 0u);
    EXPECT_EQ(max_run_length(Word::parse("0")), 0u);
}

TEST(Runs, MatchBruteForceOnAllShortWords)
{
    for (std::size_t n = 1; n <= 10; ++n) {
        for (const Word& x : all_words(n)) {
            for (std::size_t t_min : {1, 2, 3}) ASSERT_EQ(find_runs(x, t_min), oracle::runs(x, t_min)) << x;
            ASSERT_EQ(max_run_length(x), oracle::max_run(x)) << x;
        }
    }
}

TEST(Runs, EveryReportedRunSatisfiesItsEquality)
{
    for (const Word& x : all_words(7, 3)) {
        for (const autocx::Run& r : find_runs(x, 1)) {
            ASSERT_LE(r.m + r.t, x.size());
            ASSERT_GE(r.m + 1, r.k + 1);
            for (std::size_t u = 0; u < r.t; ++u) ASSERT_EQ(x[r.m + u], x[r.m + u - r.k]);
            ASSERT_LE(r.t, max_run_length(x));
        }
    }
}

TEST(Powers, KnownExamples)
{
    Word x = Word::parse("0^5 1 0^5 1^6 01000");
    auto p = find_powers(x, Rational(2));
    auto has = [&](PowerOccurrence o) { return std::find(p.begin(), p.end(), o) != p.end(); };
    EXPECT_TRUE(has({1, 1, 5}));
    // The period-2 reading of 1^6 starting inside the block: 11111 is (11)^(5/2).
    EXPECT_TRUE(has({13, 2, 5}));
    EXPECT_EQ((PowerOccurrence{13, 2, 5}.exponent()), Rational(5, 2));
    // Starting at the first 1 the maximal period-2 factor is 111111.
    EXPECT_TRUE(has({12, 2, 6}));

    auto sq = find_powers(Word::parse("00"), Rational(2));
    ASSERT_EQ(sq.size(), 1u);
    EXPECT_EQ(sq[0], (PowerOccurrence{1, 1, 2}));
    EXPECT_TRUE(find_powers(Word::parse("01"), Rational(2)).empty());
    EXPECT_THROW(find_powers(Word::parse("01"), Rational(1, 2)), std::invalid_argument);
}

TEST(Powers, PeriodicAndMaximal)
{
    for (std::size_t n = 1; n <= 9; ++n) {
        for (const Word& x : all_words(n)) {
            std::set<std::pair<std::size_t, std::size_t>> keys;
            for (const auto& o : find_powers(x, Rational(1))) {
                ASSERT_TRUE(keys.insert({o.start, o.period}).second);
                ASSERT_LE(o.last(), n);
                for (std::size_t j = o.period; j < o.length; ++j)
                    ASSERT_EQ(x[o.start - 1 + j], x[o.start - 1 + j - o.period]);
                if (o.last() < n) {
                    ASSERT_NE(x[o.last()], x[o.last() - o.period]) << x << ' ' << o;
                }
            }
            // every (start, p) with room for one period is reported at alpha 1
            ASSERT_EQ(keys.size(), n * (n + 1) / 2);
        }
    }
}

TEST(Powers, StrongDisjointness)
{
    std::vector<PowerOccurrence> gap{{1, 1, 2}, {4, 1, 2}};
    std::vector<PowerOccurrence> touching{{1, 1, 2}, {3, 1, 2}};
    std::vector<PowerOccurrence> single{{1, 1, 2}};
    EXPECT_TRUE(strongly_disjoint(gap));
    EXPECT_FALSE(strongly_disjoint(touching));
    EXPECT_TRUE(strongly_disjoint(single));
    EXPECT_TRUE(strongly_disjoint(std::vector<PowerOccurrence>{}));
    std::vector<PowerOccurrence> unsorted{{4, 1, 2}, {1, 1, 2}};
    EXPECT_TRUE(strongly_disjoint(unsorted));
}

TEST(SquareFree, Examples)
{
    EXPECT_FALSE(is_square_free(Word::parse("0101")));
    EXPECT_TRUE(is_square_free(Word::parse("012")));
    EXPECT_TRUE(is_square_free(Word::parse("0102010", 3)));
    EXPECT_FALSE(is_square_free(Word::parse("00")));
}

TEST(SquareFree, MatchesBruteForce)
{
    for (std::size_t n = 1; n <= 8; ++n)
        for (const Word& x : all_words(n, 3)) ASSERT_EQ(is_square_free(x), oracle::square_free(x)) << x;
}
