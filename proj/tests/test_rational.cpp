#include "oracles.hpp"
#include "rtlha/rational.hpp"

#include <gtest/gtest.h>

using rtlha::ModelError;
using rtlha::monus;
using rtlha::Rat;
using rtlha::Time;

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(Rat::parse("30").str(), "30");
  EXPECT_EQ(Rat::parse("-7").str(), "-7");
  EXPECT_EQ(Rat::parse("6/4").str(), "3/2");
  EXPECT_EQ(Rat::parse("0/5").str(), "0");
  EXPECT_EQ(Rat::parse("123456789012345678901234567890").str(), "123456789012345678901234567890");
  for (const char* bad : {"", "-", "1/", "/2", "1/0", "1.5", "a", "1/-2", " 1"})
    EXPECT_THROW(Rat::parse(bad), ModelError) << bad;
}

TEST(Rational, Arithmetic) {
  EXPECT_EQ(Rat(1, 2) + Rat(1, 3), Rat(5, 6));
  EXPECT_EQ(Rat(1, 2) * Rat(2, 3), Rat(1, 3));
  EXPECT_EQ(Rat(3) / Rat(4), Rat(3, 4));
  EXPECT_THROW(Rat(1) / Rat(0), ModelError);
  EXPECT_LT(Rat(1, 3), Rat(1, 2));
}

TEST(Rational, Monus) {
  EXPECT_EQ(monus(30, 5), Rat(25));
  EXPECT_EQ(monus(3, 5), Rat(0));
  EXPECT_EQ(monus(5, 5), Rat(0));
}

TEST(Rational, MonusProperties) {
  oracle::Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    Rat a = oracle::random_rat(rng, 0, 50), b = oracle::random_rat(rng, 0, 50);
    Rat m = monus(a, b);
    EXPECT_GE(m, Rat(0));
    EXPECT_EQ(m, rtlha::max(a - b, Rat(0)));
    EXPECT_EQ(m + rtlha::min(a, b), a);
  }
}

TEST(Rational, PrintParseRoundTrip) {
  oracle::Rng rng(12);
  for (int i = 0; i < 1000; ++i) {
    Rat a = oracle::random_rat(rng, -100, 100, 50);
    EXPECT_EQ(Rat::parse(a.str()), a);
  }
}

TEST(Rational, TimeIsNonnegative) {
  EXPECT_THROW(Time(Rat(-1)), ModelError);
  EXPECT_THROW(Time::parse("-1/2"), ModelError);
  EXPECT_EQ(Time::parse("1/2") + Time::parse("1/2"), Time(1));
  EXPECT_TRUE(Time(0).is_zero());
}
