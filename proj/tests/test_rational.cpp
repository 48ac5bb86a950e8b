#include <gtest/gtest.h>

#include "coarsekit/rational.hpp"

using coarsekit::Ratio;

TEST(Ratio, NormalizesToLowestTerms) {
	EXPECT_EQ(Ratio(10, 6), Ratio(5, 3));
	EXPECT_EQ(Ratio(0, 7), Ratio(0, 1));
	EXPECT_EQ(Ratio(-4, -6), Ratio(2, 3));
	EXPECT_EQ(Ratio(4, -6).str(), "-2/3");
	EXPECT_THROW(Ratio(1, 0), std::invalid_argument);
}

TEST(Ratio, ComparisonsAvoidOverflow) {
	// cross-multiplication would overflow int64 without the wide compare
	const Ratio a(3037000499LL, 3037000500LL);
	const Ratio b(3037000500LL, 3037000501LL);
	EXPECT_LT(a, b);
	EXPECT_GT(b, a);
	EXPECT_LE(a, a);
	EXPECT_GE(a, a);
}

TEST(Ratio, Arithmetic) {
	EXPECT_EQ(Ratio(1, 2) + Ratio(1, 3), Ratio(5, 6));
	EXPECT_EQ(Ratio(1, 2) - Ratio(1, 3), Ratio(1, 6));
	EXPECT_EQ(Ratio(2, 3) * Ratio(9, 4), Ratio(3, 2));
	EXPECT_EQ(Ratio(2, 3) / Ratio(4, 3), Ratio(1, 2));
	EXPECT_THROW(Ratio(1, 2) / Ratio(0, 5), std::invalid_argument);
}

TEST(Ratio, ParseAndPrintRoundTrip) {
	EXPECT_EQ(Ratio::parse("5/3"), Ratio(5, 3));
	EXPECT_EQ(Ratio::parse("7"), Ratio(7));
	EXPECT_EQ(Ratio::parse("10/6").str(), "5/3");
	EXPECT_EQ(Ratio(13, 11).str(), "13/11");
}
