#include <gtest/gtest.h>

#include "mlcs/strings.hpp"
#include "oracles.hpp"

namespace mlcs {
namespace {

StringSet dna_pair() { return parse_instance("2 4\n8 TGACTGCA\n8 GACTTGAG\n", InstanceFormat::header); }

Sequence encode(const StringSet& s, std::string_view text) { return s.alphabet().encode(text); }

TEST(ParseInstance, RawInfersSortedAlphabet) {
    const auto s = parse_instance("abc\nabc\n", InstanceFormat::raw);
    EXPECT_EQ(s.size(), 2u);
    EXPECT_EQ(s.alphabet_size(), 3u);
    EXPECT_EQ(s.length(0), 3u);
    EXPECT_EQ(s.length(1), 3u);
    EXPECT_EQ(s.alphabet().symbols(), "abc");
}

TEST(ParseInstance, HeaderExample) {
    const auto s = dna_pair();
    EXPECT_EQ(s.size(), 2u);
    EXPECT_EQ(s.alphabet_size(), 4u);
    EXPECT_EQ(s.text(0), "TGACTGCA");
    EXPECT_EQ(s.text(1), "GACTTGAG");
}

TEST(ParseInstance, CrlfAccepted) {
    const auto s = parse_instance("2 4\r\n8 TGACTGCA\r\n8 GACTTGAG\r\n", InstanceFormat::header);
    EXPECT_EQ(s, dna_pair());
    const auto r = parse_instance("abc\r\nacb\r\n", InstanceFormat::raw);
    EXPECT_EQ(r.text(1), "acb");
}

TEST(ParseInstance, Errors) {
    EXPECT_THROW(parse_instance("1 4\n3 TGA\n5 TGACT\n", InstanceFormat::header), ParseError);
    EXPECT_THROW(parse_instance("2 4\n3 TGA\n", InstanceFormat::header), ParseError);
    EXPECT_THROW(parse_instance("1 4\n4 TGA\n", InstanceFormat::header), ParseError);
    EXPECT_THROW(parse_instance("1 2\n3 ACG\n", InstanceFormat::header), ParseError);
    EXPECT_THROW(parse_instance("1 3 ACG\n3 ACT\n", InstanceFormat::header), ParseError);
    EXPECT_THROW(parse_instance("0 4\n", InstanceFormat::header), ParseError);
    EXPECT_THROW(parse_instance("x y\n1 A\n", InstanceFormat::header), ParseError);
    EXPECT_THROW(parse_instance("", InstanceFormat::header), ParseError);
    EXPECT_THROW(parse_instance("\n\n", InstanceFormat::raw), ParseError);
}

TEST(ParseInstance, HeaderPadsUnusedSymbols) {
    const auto s = parse_instance("1 4\n3 ACG\n", InstanceFormat::header);
    EXPECT_EQ(s.alphabet_size(), 4u);
    EXPECT_EQ(s.text(0), "ACG");
}

TEST(ParseInstance, DetectFormat) {
    EXPECT_EQ(detect_format("2 4\n8 TGACTGCA\n8 GACTTGAG\n"), InstanceFormat::header);
    EXPECT_EQ(detect_format("TGACTGCA\nGACTTGAG\n"), InstanceFormat::raw);
}

TEST(Tables, OccurrenceExample) {
    const auto s = dna_pair();
    const auto t = build_tables(s);
    const auto a = *s.alphabet().index_of('A');
    EXPECT_EQ(t.occ.count(0, 0, a), 2);
}

TEST(Tables, SuccessorExample) {
    const auto s = dna_pair();
    const auto t = build_tables(s);
    EXPECT_EQ(t.succ.next(0, 0, *s.alphabet().index_of('C')), 3);
}

TEST(Tables, EmptySuffix) {
    const auto s = dna_pair();
    const auto t = build_tables(s);
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (Symbol c = 0; c < 4; ++c) {
            EXPECT_EQ(t.occ.count(i, s.length(i), c), 0);
            EXPECT_EQ(t.succ.next(i, s.length(i), c), SuccTable::absent);
        }
    }
}

TEST(Tables, MatchNaiveCountsAndScans) {
    Rng rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const auto s = oracle::random_set(rng, 3, 0, 50, 1 + trial % 5);
        const auto t = build_tables(s);
        for (std::size_t i = 0; i < s.size(); ++i) {
            const auto& str = s[i];
            std::int32_t total = 0;
            for (Symbol c = 0; c < s.alphabet_size(); ++c) total += t.occ.count(i, 0, c);
            EXPECT_EQ(static_cast<std::size_t>(total), str.size());
            for (std::size_t pos = 0; pos <= str.size(); ++pos) {
                for (Symbol c = 0; c < s.alphabet_size(); ++c) {
                    const auto naive = std::count(str.begin() + static_cast<std::ptrdiff_t>(pos), str.end(), c);
                    ASSERT_EQ(t.occ.count(i, pos, c), naive);
                    const auto it = std::find(str.begin() + static_cast<std::ptrdiff_t>(pos), str.end(), c);
                    const std::int32_t expected =
                        it == str.end() ? SuccTable::absent : static_cast<std::int32_t>(it - str.begin());
                    ASSERT_EQ(t.succ.next(i, pos, c), expected);
                }
            }
        }
    }
}

TEST(UpperBound, Examples) {
    const auto s = dna_pair();
    const Positions zeros{0, 0};
    EXPECT_EQ(upper_bound(s, zeros), 7);
    EXPECT_EQ(upper_bound(build_tables(s).occ, zeros), 7);

    const auto disjoint = parse_instance("AAA\nBBB\n", InstanceFormat::raw);
    EXPECT_EQ(upper_bound(disjoint), 0);

    const Positions ends{8, 8};
    EXPECT_EQ(upper_bound(s, ends), 0);
}

TEST(UpperBound, MonotoneAndRoutesAgree) {
    Rng rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        const auto s = oracle::random_set(rng, 4, 1, 30, 4);
        const auto t = build_tables(s);
        Positions pos(s.size(), 0);
        auto previous = upper_bound(s, pos);
        for (int step = 0; step < 40; ++step) {
            const auto i = static_cast<std::size_t>(rng.below(s.size()));
            if (static_cast<std::size_t>(pos[i]) < s.length(i)) ++pos[i];
            const auto direct = upper_bound(s, pos);
            ASSERT_EQ(direct, upper_bound(t.occ, pos));
            ASSERT_LE(direct, previous);
            previous = direct;
        }
    }
}

TEST(CommonSubsequence, Examples) {
    const auto s = parse_instance("heaaebdgbc\nheaabdbcde\nheaaebdgbh\n", InstanceFormat::raw);
    EXPECT_TRUE(is_common_subsequence(encode(s, "heaabdb"), s));
    EXPECT_TRUE(is_common_subsequence(Sequence{}, s));
    const auto ab = parse_instance("ab\n", InstanceFormat::raw);
    EXPECT_FALSE(is_common_subsequence(encode(ab, "ba"), ab));
}

TEST(Lct, Examples) {
    const auto s = parse_instance("heaaebdgbc\nheaabdbcde\n", InstanceFormat::raw);
    EXPECT_EQ(lct_length(s[0], s[1]), 4u);
    const auto t = parse_instance("abc\nabc\nxyz\n", InstanceFormat::raw);
    EXPECT_EQ(lct_length(t[0], t[1]), 3u);
    EXPECT_EQ(lct_length(t[0], t[2]), 0u);
    EXPECT_EQ(lct_length(Sequence{}, t[0]), 0u);
}

TEST(ExactLcsPair, Examples) {
    const auto s = dna_pair();
    const auto lcs = exact_lcs_pair(s[0], s[1]);
    EXPECT_EQ(lcs.size(), 6u);
    EXPECT_TRUE(is_common_subsequence(lcs, s));

    const auto x = parse_instance("x\n", InstanceFormat::raw);
    EXPECT_EQ(exact_lcs_pair(x[0], x[0]), x[0]);

    const auto d = parse_instance("ab\ncd\n", InstanceFormat::raw);
    EXPECT_TRUE(exact_lcs_pair(d[0], d[1]).empty());
}

TEST(ExactLcsPair, DominatesLctAndMatchesBruteForce) {
    Rng rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const auto m = 2 + rng.below(3);
        const auto a = oracle::random_sequence(rng, rng.below(13), m);
        const auto b = oracle::random_sequence(rng, rng.below(13), m);
        const auto lcs = exact_lcs_pair(a, b);
        ASSERT_GE(lcs.size(), lct_length(a, b));
        ASSERT_EQ(lcs.size(), oracle::brute_lcs_length({a, b}));
        ASSERT_TRUE(oracle::greedy_subsequence(lcs, a) && oracle::greedy_subsequence(lcs, b));
    }
}

TEST(ExactLcsSmall, Examples) {
    const auto s = parse_instance("heaaebdgbc\nheaabdbcde\nheaaebdgbh\n", InstanceFormat::raw);
    const auto lcs = exact_lcs_small(s);
    EXPECT_EQ(lcs.size(), 7u);
    EXPECT_TRUE(is_common_subsequence(lcs, s));

    const auto one = parse_instance("abc\n", InstanceFormat::raw);
    EXPECT_EQ(one.alphabet().decode(exact_lcs_small(one)), "abc");

    const auto ab = parse_instance("ab\nba\n", InstanceFormat::raw);
    EXPECT_EQ(exact_lcs_small(ab).size(), oracle::brute_lcs_length(ab.strings()));
    EXPECT_EQ(exact_lcs_small(ab).size(), 1u);
}

TEST(ExactLcsSmall, BudgetExceeded) {
    Rng rng(3);
    const auto s = oracle::random_set(rng, 4, 100, 100, 4);
    EXPECT_THROW(exact_lcs_small(s), BudgetExceeded);
    EXPECT_THROW(exact_lcs_small(oracle::random_set(rng, 2, 10, 10, 2), 50), BudgetExceeded);
}

TEST(ExactLcsSmall, AgreesWithPairAndBruteForce) {
    Rng rng(8);
    for (int trial = 0; trial < 60; ++trial) {
        const auto pair = oracle::random_set(rng, 2, 0, 14, 2 + trial % 3);
        const auto small = exact_lcs_small(pair);
        ASSERT_EQ(small.size(), exact_lcs_pair(pair[0], pair[1]).size());
        ASSERT_TRUE(is_common_subsequence(small, pair));

        const auto triple = oracle::random_set(rng, 3, 1, 10, 2 + trial % 3);
        const auto lcs = exact_lcs_small(triple);
        ASSERT_TRUE(is_common_subsequence(lcs, triple));
        ASSERT_EQ(lcs.size(), oracle::brute_lcs_length(triple.strings()));
    }
}

}  // namespace
}  // namespace mlcs
