#include "mdl/codelen.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "gtest/gtest.h"

namespace mdl {
namespace {

TEST(BitsOfProb, PowersOfTwoAreExact) {
  EXPECT_EQ(bits_of_prob(0.5).value(), 1.0);
  EXPECT_EQ(bits_of_prob(1.0).value(), 0.0);
  EXPECT_EQ(bits_of_prob(0.125).value(), 3.0);
}

TEST(BitsOfProb, Tenth) { EXPECT_NEAR(bits_of_prob(0.1).value(), 3.321928094887362, 1e-12); }

TEST(BitsOfProb, ZeroIsInfinite) { EXPECT_TRUE(bits_of_prob(0.0).is_infinite()); }

TEST(BitsOfProb, RejectsOutOfRange) {
  EXPECT_THROW(bits_of_prob(-0.1), std::domain_error);
  EXPECT_THROW(bits_of_prob(1.5), std::domain_error);
  EXPECT_THROW(bits_of_prob(std::nan("")), std::domain_error);
  EXPECT_THROW(bits_of_prob(std::numeric_limits<double>::infinity()), std::domain_error);
}

// bits_of_prob(2^-L) == L
TEST(BitsOfProb, InvertsExp2) {
  for (double l = 0.0; l < 60.0; l += 0.37) {
    EXPECT_NEAR(bits_of_prob(std::exp2(-l)).value(), l, 1e-12);
  }
}

TEST(IntegerCode, Values) {
  EXPECT_EQ(integer_codelength(1).value(), 1.0);
  EXPECT_EQ(integer_codelength(2).value(), 3.0);
  EXPECT_EQ(integer_codelength(8).value(), 7.0);
  EXPECT_THROW(integer_codelength(0), std::domain_error);
  EXPECT_THROW(integer_codelength(-3), std::domain_error);
}

TEST(IntegerCode, FromLog2MatchesDirect) {
  EXPECT_DOUBLE_EQ(integer_codelength_from_log2(std::log2(1000.0)).value(),
                   integer_codelength(1000).value());
}

// The integer code is defective: the partial Kraft sums stay below 1 and
// approach pi^2/12.
TEST(IntegerCode, KraftSumIsDefective) {
  double running = 0.0;
  for (int k = 1; k <= 2000; ++k) {
    running += integer_codelength(k).probability();
    ASSERT_LT(running, 1.0);
  }
  double s = 0.0;
  for (long k = 1; k <= 1000000; ++k) s += integer_codelength(k).probability();
  EXPECT_NEAR(s, 0.8224665334, 1e-9);
  EXPECT_LT(s, std::numbers::pi * std::numbers::pi / 12.0);
}

TEST(UniformCode, Values) {
  EXPECT_EQ(uniform_codelength(4).value(), 2.0);
  EXPECT_NEAR(uniform_codelength(9).value(), 3.169925001442312, 1e-12);
  EXPECT_EQ(uniform_codelength(1).value(), 0.0);
  EXPECT_THROW(uniform_codelength(0), std::domain_error);
}

TEST(KraftSum, CompleteAndDefective) {
  CodelengthTable complete{{{"a", Bits(1)}, {"b", Bits(2)}, {"c", Bits(2)}}, true};
  EXPECT_DOUBLE_EQ(kraft_sum(complete), 1.0);
  CodelengthTable defective{{{"a", Bits(1)}, {"b", Bits(2)}}, false};
  EXPECT_DOUBLE_EQ(kraft_sum(defective), 0.75);
}

TEST(LogSumExp2, Values) {
  const std::vector<double> a{0.0, 0.0};
  EXPECT_DOUBLE_EQ(logsumexp2(a), 1.0);
  const std::vector<double> b{0.0, -2.0, -2.0, 0.0};
  EXPECT_NEAR(logsumexp2(b), std::log2(2.5), 1e-15);
  const std::vector<double> c{-kInf, 3.0};
  EXPECT_DOUBLE_EQ(logsumexp2(c), 3.0);
  const std::vector<double> d{-kInf, -kInf};
  EXPECT_EQ(logsumexp2(d), -kInf);
  EXPECT_THROW(logsumexp2(std::vector<double>{}), std::invalid_argument);
}

TEST(LogSumExp2, NoOverflowForHugeTerms) {
  const std::vector<double> t{5000.0, 5000.0, 4999.0};
  EXPECT_NEAR(logsumexp2(t), 5000.0 + std::log2(2.5), 1e-9);
  const std::vector<double> u(1 << 16, -3000.0);
  EXPECT_NEAR(logsumexp2(u), -3000.0 + 16.0, 1e-9);
}

TEST(ExpectedCodelength, Values) {
  const std::vector<double> fair{0.5, 0.5};
  const std::vector<double> p{0.7, 0.3};
  EXPECT_DOUBLE_EQ(expected_codelength(fair, fair).value(), 1.0);
  EXPECT_DOUBLE_EQ(expected_codelength(p, fair).value(), 1.0);
  EXPECT_NEAR(expected_codelength(p, p).value(), 0.8812908992306927, 1e-12);
}

TEST(ExpectedCodelength, Errors) {
  const std::vector<double> two{0.5, 0.5};
  const std::vector<double> three{0.2, 0.3, 0.5};
  EXPECT_THROW(expected_codelength(two, three), std::invalid_argument);
  const std::vector<double> improper{0.5, 0.6};
  EXPECT_THROW(expected_codelength(improper, two), std::domain_error);
}

// Information inequality on a 0.05 grid: the true distribution is the
// unique minimizer of expected codelength.
TEST(ExpectedCodelength, InformationInequalityOnGrid) {
  for (int i = 0; i <= 20; ++i) {
    const double pi = i * 0.05;
    const std::vector<double> p{pi, 1.0 - pi};
    const double self = expected_codelength(p, p).value();
    for (int j = 0; j <= 20; ++j) {
      if (j == i) continue;
      const double qj = j * 0.05;
      const std::vector<double> q{qj, 1.0 - qj};
      EXPECT_GT(expected_codelength(p, q).value(), self) << "p=" << pi << " q=" << qj;
    }
  }
}

}  // namespace
}  // namespace mdl
