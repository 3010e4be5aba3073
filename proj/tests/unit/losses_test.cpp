#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "alf/errors.hpp"
#include "alf/losses.hpp"
#include "alf/prob.hpp"
#include "alf/rng.hpp"
#include "oracles.hpp"

namespace {

using alf::LossSpec;

std::vector<LossSpec> all_families() {
  return {LossSpec::ce(),
          LossSpec::focal(0.5),
          LossSpec::mae(),
          LossSpec::rce(-4),
          LossSpec::gce(0.7),
          LossSpec::sce(0.1, 1.0),
          LossSpec::nce(),
          LossSpec::nfl(0.5),
          LossSpec::ngce(0.7),
          LossSpec::agce(0.6, 0.6),
          LossSpec::aul(5.5, 3),
          LossSpec::ael(2.5),
          LossSpec::apl(LossSpec::nce(), LossSpec::agce(6, 1.5), 1, 4)};
}

TEST(LossValue, Examples) {
  EXPECT_EQ(alf::loss_value(LossSpec::mae(), alf::ProbVector::one_hot(3, 2), 2), 0.0);
  EXPECT_NEAR(alf::loss_value(LossSpec::agce(1, 2), alf::ProbVector({0, 1}), 0), 1.5, 1e-15);
  EXPECT_NEAR(alf::loss_value(LossSpec::aul(2, 1), alf::ProbVector({1, 0}), 0), 0.0, 1e-15);
  EXPECT_EQ(alf::loss_value(LossSpec::ael(1), alf::ProbVector({0, 1}), 0), 1.0);
}

TEST(LossValue, LabelOutOfRange) {
  EXPECT_THROW(alf::loss_value(LossSpec::ce(), alf::ProbVector::uniform(3), 3), alf::InvalidInput);
}

TEST(LossValue, CeIsFlooredAtZero) {
  const double v = alf::loss_value(LossSpec::ce(), alf::ProbVector({0, 1}), 0);
  EXPECT_NEAR(v, -std::log(1e-12), 1e-9);
}

TEST(LossValue, MatchesScalarOracles) {
  struct Case {
    LossSpec spec;
    std::function<double(double)> l;
  };
  const std::vector<Case> cases{
      {LossSpec::mae(), oracle::scalar("mae")},
      {LossSpec::ce(), oracle::scalar("ce")},
      {LossSpec::gce(0.7), oracle::scalar("gce", 0, 0.7)},
      {LossSpec::agce(0.6, 0.6), oracle::scalar("agce", 0.6, 0.6)},
      {LossSpec::agce(1, 2), oracle::scalar("agce", 1, 2)},
      {LossSpec::aul(2, 0.5), oracle::scalar("aul", 2, 0, 0.5)},
      {LossSpec::aul(5.5, 3), oracle::scalar("aul", 5.5, 0, 3)},
      {LossSpec::ael(2.5), oracle::scalar("ael", 2.5)},
  };
  alf::Rng rng(11);
  for (const auto& c : cases) {
    for (int i = 0; i < 50; ++i) {
      const auto u = oracle::interior_point(rng, 4, 0.0);
      const double expect = c.l(u[1]);
      EXPECT_NEAR(alf::loss_value(c.spec, alf::ProbVector(u), 1), expect,
                  1e-12 * std::max(1.0, std::abs(expect)))
          << c.spec.to_string();
    }
  }
}

TEST(LossGradProb, Examples) {
  const auto g = alf::loss_grad_prob(LossSpec::mae(), alf::ProbVector({0.2, 0.5, 0.3}), 1);
  EXPECT_EQ(g, (std::vector<double>{0, -2, 0}));
  const auto u = alf::ProbVector({0.3, 0.7});
  const auto ge = alf::loss_grad_prob(LossSpec::ael(2), u, 1);
  EXPECT_NEAR(ge[1], -0.5 * std::exp(-0.35), 1e-15);
  EXPECT_EQ(ge[0], 0.0);
}

TEST(LossGradProb, BoundaryRejectedForLogFamilies) {
  const auto edge = alf::ProbVector({0.0, 1.0});
  for (const auto& spec : {LossSpec::ce(), LossSpec::nce(), LossSpec::gce(0.5),
                           LossSpec::apl(LossSpec::nce(), LossSpec::mae(), 1, 1)}) {
    EXPECT_TRUE(alf::requires_interior(spec));
    EXPECT_THROW(alf::loss_grad_prob(spec, edge, 1), alf::DomainError) << spec.to_string();
  }
  EXPECT_NO_THROW(alf::loss_grad_prob(LossSpec::agce(1, 2), edge, 1));
  EXPECT_NO_THROW(alf::loss_grad_prob(LossSpec::ael(1), edge, 0));
}

// Probability-space gradients against central differences of the off-simplex
// formula, 100 points per family.
TEST(LossGradProb, FiniteDifferenceAllFamilies) {
  alf::Rng rng(2024);
  for (const auto& spec : all_families()) {
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t k = 3 + rng.below(6);
      const std::size_t y = rng.below(k);
      const auto u = oracle::interior_point(rng, k, 0.01);
      const auto f = [&](const std::vector<double>& x) {
        return alf::loss_value(spec, std::span<const double>(x), y);
      };
      const auto fd = oracle::central_gradient(f, u, 1e-6);
      const auto g = alf::loss_grad_prob(spec, std::span<const double>(u), y);
      worst = std::max(worst, oracle::relative_error(g, fd));
    }
    EXPECT_LT(worst, 1e-5) << spec.to_string();
  }
}

TEST(LossGradLogits, CeAtZeroLogits) {
  const auto g = alf::loss_grad_logits(LossSpec::ce(), alf::Logits({0, 0, 0, 0}), 2);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(g[i], i == 2 ? -0.75 : 0.25, 1e-15);
}

TEST(LossGradLogits, FiniteDifferenceAllFamilies) {
  alf::Rng rng(99);
  for (const auto& spec : all_families()) {
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t k = 2 + rng.below(8);
      const std::size_t y = rng.below(k);
      std::vector<double> z(k);
      for (double& v : z) v = 1.5 * rng.normal();
      const auto f = [&](const std::vector<double>& x) {
        return alf::loss_value(spec, alf::softmax(alf::Logits(x)), y);
      };
      const auto fd = oracle::central_gradient(f, z, 1e-5);
      const auto g = alf::loss_grad_logits(spec, alf::Logits(z), y);
      worst = std::max(worst, oracle::relative_error(g, fd));
    }
    EXPECT_LT(worst, 1e-4) << spec.to_string();
  }
}

TEST(LossGradLogits, FusedMatchesSeparateCalls) {
  alf::Rng rng(5);
  for (const auto& spec : all_families()) {
    std::vector<double> z(6);
    for (double& v : z) v = rng.normal();
    std::vector<double> grad(6), scratch(6);
    const double v = alf::loss_and_grad_logits(spec, z, 4, grad, scratch);
    EXPECT_DOUBLE_EQ(v, alf::loss_value(spec, alf::softmax(alf::Logits(z)), 4));
    const auto g = alf::loss_grad_logits(spec, alf::Logits(z), 4);
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(grad[i], g[i], 1e-14);
  }
}

TEST(LossGradLogits, ExtremeLogitsStayFinite) {
  for (const auto& spec : all_families()) {
    const auto g = alf::loss_grad_logits(spec, alf::Logits({-800, 0, 800}), 0);
    for (double v : g) EXPECT_TRUE(std::isfinite(v)) << spec.to_string();
  }
}

TEST(Apl, LinearInChildren) {
  const auto a = LossSpec::nce();
  const auto b = LossSpec::agce(6, 1.5);
  const auto apl = LossSpec::apl(a, b, 1, 4);
  const auto apl_unit = LossSpec::apl(a, b, 1, 1);
  alf::Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const auto u = oracle::interior_point(rng, 5);
    const alf::ProbVector p(u);
    EXPECT_NEAR(alf::loss_value(apl, p, 3),
                alf::loss_value(a, p, 3) + 4 * alf::loss_value(b, p, 3), 1e-12);
    const auto ga = alf::loss_grad_prob(a, p, 3);
    const auto gb = alf::loss_grad_prob(b, p, 3);
    const auto g = alf::loss_grad_prob(apl, p, 3);
    std::vector<double> z(5);
    for (double& v : z) v = rng.normal();
    const auto la = alf::loss_grad_logits(a, alf::Logits(z), 1);
    const auto lb = alf::loss_grad_logits(b, alf::Logits(z), 1);
    const auto l = alf::loss_grad_logits(apl_unit, alf::Logits(z), 1);
    for (std::size_t i = 0; i < 5; ++i) {
      EXPECT_NEAR(g[i], ga[i] + 4 * gb[i], 1e-12);
      EXPECT_NEAR(l[i], la[i] + lb[i], 1e-14);
    }
  }
}

double sum_variance(const LossSpec& spec, std::size_t k, std::uint64_t seed, double* mean) {
  alf::Rng rng(seed);
  std::vector<double> sums;
  for (int i = 0; i < 1000; ++i) {
    sums.push_back(alf::symmetric_sum(spec, alf::ProbVector(oracle::interior_point(rng, k, 0.001))));
  }
  double m = 0.0;
  for (double s : sums) m += s;
  m /= static_cast<double>(sums.size());
  double var = 0.0;
  for (double s : sums) var += (s - m) * (s - m);
  if (mean) *mean = m;
  return var / static_cast<double>(sums.size());
}

TEST(SymmetricSum, ConstantForSymmetricLosses) {
  for (const auto& spec : {LossSpec::mae(), LossSpec::rce(-4), LossSpec::nce(),
                           LossSpec::nfl(0.5), LossSpec::ngce(0.7)}) {
    double mean = 0.0;
    EXPECT_LT(sum_variance(spec, 10, 1, &mean), 1e-12) << spec.to_string();
    if (spec.family() == alf::Family::NCE) {
      EXPECT_NEAR(mean, 1.0, 1e-12);
    }
  }
  // Exactly 2k - 2 wherever the entries are exact binary fractions; elsewhere
  // the entries themselves only sum to 1 up to rounding.
  alf::Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> u(10, 0.0);
    for (int unit = 0; unit < 1024; ++unit) u[rng.below(10)] += 1.0 / 1024.0;
    EXPECT_EQ(alf::symmetric_sum(LossSpec::mae(), alf::ProbVector(u)), 18.0);
    const alf::ProbVector v(oracle::interior_point(rng, 10, 0.0));
    EXPECT_NEAR(alf::symmetric_sum(LossSpec::mae(), v), 18.0, 1e-12);
  }
}

TEST(SymmetricSum, NonConstantOtherwise) {
  for (const auto& spec : {LossSpec::ce(), LossSpec::focal(0.5), LossSpec::gce(0.7),
                           LossSpec::sce(0.1, 1), LossSpec::agce(1, 2), LossSpec::agce(0.6, 0.6),
                           LossSpec::aul(2, 0.5), LossSpec::ael(2.5)}) {
    EXPECT_GT(sum_variance(spec, 10, 1, nullptr), 1e-6) << spec.to_string();
  }
  const auto s1 = alf::symmetric_sum(LossSpec::agce(1, 2), alf::ProbVector({0.2, 0.3, 0.5}));
  const auto s2 = alf::symmetric_sum(LossSpec::agce(1, 2), alf::ProbVector({0.9, 0.05, 0.05}));
  EXPECT_GT(std::abs(s1 - s2), 1e-3);
}

// Every point of the k = 3 simplex grid with step 0.05.
std::vector<std::vector<double>> simplex_grid3() {
  std::vector<std::vector<double>> pts;
  for (int i = 0; i <= 20; ++i) {
    for (int j = 0; i + j <= 20; ++j) {
      pts.push_back({i / 20.0, j / 20.0, (20 - i - j) / 20.0});
    }
  }
  return pts;
}

TEST(LossShape, OneHotMinimises) {
  const auto grid = simplex_grid3();
  for (const auto& spec : all_families()) {
    for (std::size_t y = 0; y < 3; ++y) {
      const double best = alf::loss_value(spec, alf::ProbVector::one_hot(3, y), y);
      for (const auto& u : grid) {
        EXPECT_LE(best, alf::loss_value(spec, std::span<const double>(u), y) + 1e-12)
            << spec.to_string();
      }
    }
  }
}

TEST(LossShape, NonIncreasingInLabelProbability) {
  const auto grid = simplex_grid3();
  for (const auto& spec : all_families()) {
    for (const auto& u : grid) {
      // Move 0.05 of mass from coordinate j into the label coordinate 0.
      for (std::size_t j = 1; j < 3; ++j) {
        if (u[j] < 0.05 - 1e-12) continue;
        auto v = u;
        v[j] = std::max(0.0, v[j] - 0.05);
        v[0] = 1.0 - v[1] - v[2];
        EXPECT_LE(alf::loss_value(spec, std::span<const double>(v), 0),
                  alf::loss_value(spec, std::span<const double>(u), 0) + 1e-12)
            << spec.to_string();
      }
    }
  }
}

TEST(LossShape, BinaryLossIsLabelCoordinate) {
  EXPECT_DOUBLE_EQ(alf::binary_loss(LossSpec::mae(), 0.3), 1.4);
  EXPECT_DOUBLE_EQ(alf::binary_loss(LossSpec::ael(1), 0.0), 1.0);
  EXPECT_TRUE(alf::is_single_argument(LossSpec::agce(1, 2)));
  EXPECT_FALSE(alf::is_single_argument(LossSpec::nce()));
  EXPECT_FALSE(alf::is_single_argument(LossSpec::apl(LossSpec::nce(), LossSpec::mae(), 1, 1)));
}

TEST(WeightedLoss, SumsPerClassTerms) {
  const std::vector<double> u{0.2, 0.5, 0.3};
  const std::vector<double> w{0.6, 0.3, 0.1};
  double expect = 0.0;
  for (std::size_t i = 0; i < 3; ++i) expect += w[i] * (2.0 - 2.0 * u[i]);
  EXPECT_NEAR(alf::weighted_loss(LossSpec::mae(), u, w), expect, 1e-15);
}

}  // namespace
