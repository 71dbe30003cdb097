#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "qdb/block_table.hpp"

using namespace qdb;

TEST(Ratio, MatchesDoubleDivisionForSmallOperands) {
    EXPECT_DOUBLE_EQ(ratio(BigNat(6), BigNat(24)), 0.25);
    EXPECT_DOUBLE_EQ(ratio(BigNat(18), BigNat(24)), 0.75);
    EXPECT_EQ(ratio(BigNat(0), BigNat(5)), 0.0);
}

TEST(Ratio, StaysAccurateBeyondDoubleRange) {
    // 300! / 299! = 300 although both overflow a double.
    EXPECT_NEAR(ratio(factorial(300), factorial(299)), 300.0, 1e-12);
    EXPECT_NEAR(ratio(factorial(255), factorial(256)), 1.0 / 256.0, 1e-18);
}

TEST(Factorial, SmallValuesAndRecurrence) {
    EXPECT_EQ(factorial(0), 1);
    EXPECT_EQ(factorial(4), 24);
    EXPECT_EQ(factorial(8), 40320);
    EXPECT_EQ(factorial(30), factorial(29) * 30);
}

TEST(Rng, SameSeedSameStream) {
    Rng a(42), b(42), c(43);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next();
        EXPECT_EQ(x, b.next());
        differs = differs || x != c.next();
    }
    EXPECT_TRUE(differs);
}

TEST(Rng, UniformAndBelowStayInRange) {
    Rng r(1);
    for (int i = 0; i < 10000; ++i) {
        const double u = r.uniform();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
        EXPECT_LT(r.below(7), 7u);
    }
    EXPECT_THROW(r.below(0), DomainError);
}

TEST(BlockTable, ValidatesShape) {
    EXPECT_THROW(BlockTable(0, {}), DomainError);
    EXPECT_THROW(BlockTable(2, {0, 1, 2}), DomainError);
    EXPECT_THROW(BlockTable(2, {0, 1, 2, 4}), DomainError);
    EXPECT_NO_THROW(BlockTable(2, {3, 3, 3, 3}));
}

TEST(BlockTable, RandomIsSeededAndInRange) {
    const auto a = BlockTable::random(6, 9);
    EXPECT_EQ(a, BlockTable::random(6, 9));
    EXPECT_NE(a.hash(), BlockTable::random(6, 10).hash());
    EXPECT_EQ(a.hash().size(), 16u);
    for (Key v : a.values()) EXPECT_LT(v, 64u);
}

TEST(BlockTable, DigitsMostSignificantFirst) {
    const auto t = BlockTable::identity(4);
    EXPECT_EQ(t.digit_count(), 2u);
    // 0b0110 = digits (1, 2)
    EXPECT_EQ(t.digit(6, 0), 1u);
    EXPECT_EQ(t.digit(6, 1), 2u);
    EXPECT_EQ(t.prefix_range(6, 0), std::make_pair(Key{0}, Key{16}));
    EXPECT_EQ(t.prefix_range(6, 1), std::make_pair(Key{4}, Key{8}));
    EXPECT_EQ(t.prefix_range(6, 2), std::make_pair(Key{6}, Key{7}));
}

TEST(BlockTable, OddBitsAreNotCascadeCapable) {
    const auto t = BlockTable::identity(3);
    EXPECT_FALSE(t.cascade_capable());
    EXPECT_THROW(t.digit_count(), DomainError);
}

TEST(Lehmer, RankUnrankRoundTripAndOrder) {
    for (std::size_t N = 1; N <= 6; ++N) {
        std::vector<Key> p(N);
        for (std::size_t i = 0; i < N; ++i) p[i] = static_cast<Key>(i);
        std::uint64_t expected = 0;
        do {
            EXPECT_EQ(lehmer_rank(p), expected);
            EXPECT_EQ(lehmer_unrank(expected, N).order, p);
            ++expected;
        } while (std::next_permutation(p.begin(), p.end()));
        EXPECT_EQ(BigNat(expected), factorial(N));
    }
}

TEST(Lehmer, TableRowsMatchUnrank) {
    const auto table = permutation_table(5);
    ASSERT_EQ(table.size(), 120u * 5u);
    for (std::uint64_t r = 0; r < 120; ++r) {
        const auto p = lehmer_unrank(r, 5);
        for (std::size_t s = 0; s < 5; ++s) EXPECT_EQ(table[r * 5 + s], p.order[s]);
    }
}

TEST(Permutation, Validity) {
    EXPECT_TRUE(Permutation::identity(4).valid());
    EXPECT_FALSE((Permutation{{0, 0, 1}}).valid());
    EXPECT_FALSE((Permutation{{0, 3, 1}}).valid());
}
