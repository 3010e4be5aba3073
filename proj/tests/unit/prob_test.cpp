#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "alf/errors.hpp"
#include "alf/prob.hpp"
#include "alf/rng.hpp"

namespace {

TEST(Softmax, ZeroLogitsGiveUniform) {
  const auto u = alf::softmax(alf::Logits({0, 0, 0, 0}));
  for (std::size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(u[i], 0.25);
}

TEST(Softmax, LogTwoAgainstZero) {
  const auto u = alf::softmax(alf::Logits({std::log(2.0), 0.0}));
  EXPECT_NEAR(u[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(u[1], 1.0 / 3.0, 1e-15);
}

TEST(Softmax, LargeLogitsStayOnSimplex) {
  alf::Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> z(50);
    for (double& v : z) v = 700.0 * rng.normal();
    const auto u = alf::softmax(alf::Logits(z));
    const double total = std::accumulate(u.values().begin(), u.values().end(), 0.0);
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
}

TEST(Softmax, RejectsNonFinite) {
  EXPECT_THROW(alf::Logits({0.0, std::numeric_limits<double>::infinity()}), alf::InvalidInput);
  const std::vector<double> z{0.0, std::nan("")};
  EXPECT_THROW(alf::softmax(std::span<const double>(z)), alf::InvalidInput);
}

TEST(ProbVector, EnforcesSimplex) {
  EXPECT_NO_THROW(alf::ProbVector({0.5, 0.5}));
  EXPECT_NO_THROW(alf::ProbVector({0.5, 0.5 + 5e-10}));
  EXPECT_THROW(alf::ProbVector({0.5, 0.6}), alf::InvalidInput);
  EXPECT_THROW(alf::ProbVector({1.2, -0.2}), alf::InvalidInput);
  EXPECT_THROW(alf::ProbVector({1.0}), alf::InvalidInput);
}

TEST(ProbVector, Factories) {
  EXPECT_EQ(alf::ProbVector::one_hot(3, 1), alf::ProbVector({0, 1, 0}));
  EXPECT_DOUBLE_EQ(alf::ProbVector::uniform(5)[4], 0.2);
  EXPECT_THROW(alf::ProbVector::one_hot(3, 3), alf::InvalidInput);
}

TEST(Rng, ReproducibleAndInRange) {
  alf::Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    const double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
    EXPECT_LT(a.below(7), 7u);
    b.below(7);
  }
}

TEST(Rng, NormalMoments) {
  alf::Rng rng(3);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sq += x * x;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.01);
}

}  // namespace
