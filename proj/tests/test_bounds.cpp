#include <gtest/gtest.h>

#include <random>

#include "autocx/bounds.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace autocx;

TEST(Uniqueness, Examples)
{
    EXPECT_TRUE(unique_solvability({{2}, {3}}));
    EXPECT_FALSE(unique_solvability({{3, 2}, {2, 3}}));
    EXPECT_FALSE(unique_solvability({{5, 5}, {1, 1}}));
    EXPECT_TRUE(unique_solvability({{}, {}}));
    EXPECT_TRUE(unique_solvability({{3, 5}, {0, 1}}));
    EXPECT_THROW(unique_solvability({{0}, {1}}), std::invalid_argument);
    EXPECT_THROW(unique_solvability({{1, 2}, {1}}), std::invalid_argument);
}

TEST(Uniqueness, MatchesBruteForce)
{
    std::mt19937_64 rng(17);
    int unique = 0;
    for (int i = 0; i < 5000; ++i) {
        std::size_t m = 1 + rng() % 4;
        std::vector<std::uint64_t> a(m), b(m);
        std::uint64_t target = 0;
        for (std::size_t j = 0; j < m; ++j) {
            a[j] = 1 + rng() % 12;
            b[j] = rng() % 6;
            target += a[j] * b[j];
        }
        if (target > 200) continue;
        bool expected = oracle::uniquely_solvable(a, b);
        unique += expected;
        ASSERT_EQ(unique_solvability({a, b}), expected);
    }
    EXPECT_GT(unique, 100);
}

TEST(Savings, Arithmetic)
{
    std::vector<PowerOccurrence> sq{{1, 1, 2}};
    std::vector<PowerOccurrence> five_halves{{13, 2, 5}};
    EXPECT_EQ(savings(sq), 1);
    EXPECT_EQ(savings(five_halves), 3);
    EXPECT_EQ(savings(std::vector<PowerOccurrence>{}), 0);
    EXPECT_EQ(save_unique(sq), 1);
    EXPECT_EQ(save_unique(five_halves), 2);

    std::vector<PowerOccurrence> several{{1, 1, 5}, {7, 3, 7}, {15, 2, 6}};
    LeafPowerSet set{several};
    std::int64_t total_base = 1 + 3 + 2;
    EXPECT_EQ(set.save_unique() + total_base - static_cast<std::int64_t>(set.count()), set.savings());
    auto inst = set.uniqueness_instance();
    EXPECT_EQ(inst.lengths, (std::vector<std::uint64_t>{1, 3, 2}));
    EXPECT_EQ(inst.multiplicities, (std::vector<std::uint64_t>{5, 2, 3}));
}

TEST(SaveUnique, Examples)
{
    Word x = fixture::worked_word();
    auto fu = best_save_unique(x, BoundMode::FullUniqueness);
    EXPECT_EQ(fu.value, 5);
    EXPECT_TRUE(fu.exact);
    ASSERT_TRUE(fu.set);
    auto dl = best_save_unique(x, BoundMode::DistinctLengths);
    EXPECT_EQ(dl.value, 7);

    auto sq = best_save_unique(Word::parse("00"), BoundMode::FullUniqueness);
    EXPECT_EQ(sq.value, 1);
    ASSERT_TRUE(sq.set);
    EXPECT_EQ(sq.set->occs, (std::vector<PowerOccurrence>{{1, 1, 2}}));

    auto none = best_save_unique(Word::parse("01"), BoundMode::DistinctLengths);
    EXPECT_EQ(none.value, 0);
    EXPECT_FALSE(none.set);
}

TEST(SaveUnique, WorkedExampleAgreesWithBruteForce)
{
    Word x = fixture::worked_word();
    EXPECT_EQ(oracle::best_save_unique(x, true), 7);
    EXPECT_EQ(oracle::best_save_unique(x, false), 5);
}

TEST(SaveUnique, MatchesBruteForceOnShortWords)
{
    for (std::size_t n = 1; n <= 11; ++n) {
        for (const Word& x : all_words(n)) {
            for (bool distinct : {true, false}) {
                auto mode = distinct ? BoundMode::DistinctLengths : BoundMode::FullUniqueness;
                auto r = best_save_unique(x, mode);
                ASSERT_EQ(r.value, oracle::best_save_unique(x, distinct)) << x << ' ' << mode_name(mode);
                if (r.set) {
                    ASSERT_EQ(r.set->save_unique(), r.value);
                }
            }
        }
    }
}

TEST(SaveUnique, MatchesBruteForceOnRandomLongerWords)
{
    std::mt19937_64 rng(23);
    for (int i = 0; i < 150; ++i) {
        std::size_t n = 12 + rng() % 9;
        std::vector<Symbol> s(n);
        // biased toward long blocks, where powers are plentiful
        Symbol cur = 0;
        for (auto& c : s) {
            if (rng() % 4 == 0) cur ^= 1;
            c = cur;
        }
        Word x(s, 2);
        for (bool distinct : {true, false}) {
            auto mode = distinct ? BoundMode::DistinctLengths : BoundMode::FullUniqueness;
            ASSERT_EQ(best_save_unique(x, mode).value, oracle::best_save_unique(x, distinct)) << x;
        }
    }
}

TEST(SaveUnique, FullUniquenessNeverExceedsDistinctLengths)
{
    std::mt19937_64 rng(29);
    for (int i = 0; i < 300; ++i) {
        std::size_t n = 1 + rng() % 40;
        std::vector<Symbol> s(n);
        for (auto& c : s) c = static_cast<Symbol>(rng() % 2);
        Word x(s, 2);
        ASSERT_LE(best_save_unique(x, BoundMode::FullUniqueness).value,
                  best_save_unique(x, BoundMode::DistinctLengths).value)
            << x;
    }
}

TEST(SaveUnique, OverApproximationAboveCap)
{
    Word x = Word::parse("0^70");
    auto r = best_save_unique(x, BoundMode::DistinctLengths);
    EXPECT_FALSE(r.exact);
    EXPECT_FALSE(r.set);
    // the whole word has every period p; as a square (p <= 35) it saves 70 - 2p + 1
    std::int64_t expect = 0;
    for (std::int64_t p = 1; p <= 35; ++p) expect += 71 - 2 * p;
    EXPECT_EQ(r.value, expect);

    // the over-approximation is never below the exact optimum
    std::mt19937_64 rng(31);
    for (int i = 0; i < 200; ++i) {
        std::size_t n = 2 + rng() % 30;
        std::vector<Symbol> s(n);
        for (auto& c : s) c = static_cast<Symbol>(rng() % 2);
        Word w(s, 2);
        auto exact = best_save_unique(w, BoundMode::DistinctLengths);
        auto approx = best_save_unique(w, BoundMode::DistinctLengths, BoundOptions{0});
        ASSERT_FALSE(approx.exact);
        ASSERT_GE(approx.value, exact.value) << w;
    }
}

TEST(LowerBound, Examples)
{
    auto c = leaf_power_lower_bound(fixture::worked_word(), BoundMode::FullUniqueness);
    EXPECT_EQ(c.save_unique, 5);
    EXPECT_EQ(c.q_min, 9u);
    EXPECT_TRUE(verify_certificate(fixture::worked_word(), c));

    for (std::size_t n = 1; n <= 40; ++n) {
        Word zeros(std::vector<Symbol>(n, 0), 2);
        for (auto mode : {BoundMode::DistinctLengths, BoundMode::FullUniqueness})
            ASSERT_EQ(leaf_power_lower_bound(zeros, mode).q_min, 1u) << n;
    }

    for (std::size_t n = 1; n <= 9; ++n)
        for (const Word& x : all_words(n, 3))
            if (is_square_free(x)) {
                ASSERT_EQ(leaf_power_lower_bound(x, BoundMode::DistinctLengths).q_min, n / 2 + 1) << x;
            }
}

TEST(LowerBound, QMinArithmetic)
{
    EXPECT_EQ(q_min_from(22, 5), 9u);
    EXPECT_EQ(q_min_from(22, 7), 8u);
    EXPECT_EQ(q_min_from(5, 0), 3u);
    EXPECT_EQ(q_min_from(6, 0), 4u);
    EXPECT_EQ(q_min_from(3, 10), 1u);
}

TEST(Certificate, RejectsTampering)
{
    Word x = fixture::worked_word();
    auto c = leaf_power_lower_bound(x, BoundMode::FullUniqueness);

    auto inflated = c;
    inflated.save_unique -= 1;
    inflated.q_min = q_min_from(22, inflated.save_unique);
    EXPECT_FALSE(verify_certificate(x, inflated));

    auto wrong_q = c;
    wrong_q.q_min += 1;
    EXPECT_FALSE(verify_certificate(x, wrong_q));

    auto bad_power = c;
    bad_power.set->occs[0].length += 1;
    EXPECT_FALSE(verify_certificate(x, bad_power));

    auto dl = leaf_power_lower_bound(x, BoundMode::DistinctLengths);
    auto relabelled = dl;
    relabelled.mode = BoundMode::FullUniqueness;
    EXPECT_FALSE(verify_certificate(x, relabelled));

    EXPECT_FALSE(verify_certificate(Word::parse("0"), c));
}

TEST(Certificate, RecordRoundTrip)
{
    for (auto mode : {BoundMode::DistinctLengths, BoundMode::FullUniqueness}) {
        auto c = leaf_power_lower_bound(fixture::worked_word(), mode);
        std::string rec = to_record(c);
        EXPECT_EQ(certificate_from_record(rec), c);
        EXPECT_EQ(to_record(certificate_from_record(rec)), rec);
    }
    auto fu = leaf_power_lower_bound(fixture::worked_word(), BoundMode::FullUniqueness);
    EXPECT_EQ(to_record(fu), "word 0000010000011111101000\nalphabet 2\nmode unique\nexact 1\npower 12 1 6\n"
                             "save_unique 5\nq_min 9\n");
    auto big = leaf_power_lower_bound(Word::parse("0^80"), BoundMode::DistinctLengths);
    EXPECT_EQ(certificate_from_record(to_record(big)), big);
    EXPECT_THROW(certificate_from_record("word 01\nmode sideways\n"), ParseError);
    EXPECT_THROW(certificate_from_record("word 0011\nmode unique\npower 1 2 1/3\nsave_unique 0\nq_min 1\n"), ParseError);
}

TEST(DiophantineProperties, DropVariable)
{
    std::mt19937_64 rng(37);
    int premises = 0;
    for (int i = 0; i < 10000; ++i) {
        std::size_t m = 2 + rng() % 4;
        UniquenessInstance inst;
        for (std::size_t j = 0; j < m; ++j) {
            inst.lengths.push_back(1 + rng() % 15);
            inst.multiplicities.push_back(rng() % 5);
        }
        if (!unique_solvability(inst)) continue;
        ++premises;
        UniquenessInstance dropped = inst;
        dropped.lengths.pop_back();
        dropped.multiplicities.pop_back();
        ASSERT_TRUE(unique_solvability(dropped));
    }
    EXPECT_GT(premises, 500);
}

TEST(DiophantineProperties, RepeatedLengthBlocksUniqueness)
{
    std::mt19937_64 rng(41);
    for (int i = 0; i < 2000; ++i) {
        UniquenessInstance inst;
        std::uint64_t a = 1 + rng() % 10;
        inst.lengths = {a, a};
        inst.multiplicities = {rng() % 4, rng() % 4};
        if (inst.multiplicities[0] + inst.multiplicities[1] == 0) continue;
        std::size_t extra = rng() % 3;
        for (std::size_t j = 0; j < extra; ++j) {
            inst.lengths.push_back(1 + rng() % 10);
            inst.multiplicities.push_back(rng() % 4);
        }
        ASSERT_FALSE(unique_solvability(inst));
    }
}
