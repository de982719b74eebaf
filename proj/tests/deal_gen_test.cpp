#include <gtest/gtest.h>

#include <cmath>

#include "onestreet/deal_gen.hpp"
#include "onestreet/rng.hpp"
#include "test_support.hpp"

using namespace onestreet;
namespace ts = test_support;

TEST(SampleSimplex, IdenticalUniformsGiveBarycenter) {
  const auto a = simplex_from_uniforms({0.37, 0.37, 0.37, 0.37});
  for (const double v : a) EXPECT_NEAR(v, 0.25, 1e-12);
}

TEST(SampleSimplex, DimensionOne) {
  Rng rng(1);
  const auto a = sample_simplex(1, rng);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_DOUBLE_EQ(a[0], 1.0);
}

TEST(SampleSimplex, FlatDirichletMoments) {
  Rng rng(42);
  const int n = 10;
  const long draws = 100000;
  std::vector<double> mean(n, 0.0), sq(n, 0.0);
  for (long t = 0; t < draws; ++t) {
    const auto a = sample_simplex(n, rng);
    for (int i = 0; i < n; ++i) {
      mean[i] += a[i];
      sq[i] += a[i] * a[i];
    }
  }
  // Flat Dirichlet: mean 1/n, variance (n-1)/(n^2 (n+1)) = 9/1100 for n=10.
  const double expected_var = 9.0 / 1100.0;
  for (int i = 0; i < n; ++i) {
    mean[i] /= draws;
    const double var = sq[i] / draws - mean[i] * mean[i];
    EXPECT_NEAR(mean[i], 0.1, 0.003);
    EXPECT_NEAR(var, expected_var, 0.1 * expected_var);
  }
}

TEST(SampleSimplex, DeterministicGivenSeed) {
  Rng a(777), b(777);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = sample_simplex(10, a);
    const auto y = sample_simplex(10, b);
    EXPECT_EQ(x, y);  // bit-identical
  }
}

TEST(MakeJoint, UniformInputsGiveUniformOffDiagonal) {
  const auto deal = make_joint(ts::uniform_pdf(10), ts::uniform_pdf(10));
  deal.validate();
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      EXPECT_NEAR(deal.at(i, j), i == j ? 0.0 : 1.0 / 90.0, 1e-12);
}

TEST(MakeJoint, PointMassRow) {
  const auto deal = make_joint(ts::point_mass(10, 0), ts::uniform_pdf(10));
  for (int j = 1; j < 10; ++j) EXPECT_NEAR(deal.at(0, j), 1.0 / 9.0, 1e-12);
  for (int i = 1; i < 10; ++i)
    for (int j = 0; j < 10; ++j) EXPECT_DOUBLE_EQ(deal.at(i, j), 0.0);
}

TEST(MakeJoint, DegenerateWhenAllMassOnDiagonal) {
  EXPECT_THROW(make_joint(ts::point_mass(10, 4), ts::point_mass(10, 4)), DegenerateDeal);
}

TEST(MakeJoint, RejectsInvalidInputs) {
  EXPECT_THROW(make_joint(ts::uniform_pdf(10), ts::uniform_pdf(9)), DimensionError);
  std::vector<double> bad(10, 0.1);
  bad[0] = -0.1;
  bad[1] = 0.3;
  EXPECT_THROW(make_joint(bad, ts::uniform_pdf(10)), InvalidDistribution);
}

TEST(MakeJoint, DisjointSupportsKeepMarginals) {
  std::vector<double> x1(10, 0.0), x2(10, 0.0);
  x1[0] = 0.3;
  x1[2] = 0.7;
  x2[5] = 0.4;
  x2[9] = 0.6;
  const auto f = marginals(make_joint(x1, x2));
  for (int k = 0; k < 10; ++k) {
    EXPECT_NEAR(f.pdf1[k], x1[k], 1e-12);
    EXPECT_NEAR(f.pdf2[k], x2[k], 1e-12);
  }
}

TEST(MakeJoint, OffDiagonalProportionality) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x1 = sample_simplex(10, rng);
    const auto x2 = sample_simplex(10, rng);
    const auto deal = make_joint(x1, x2);
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j) {
        if (i == j) continue;
        const int k = (i + 3) % 10;
        const int l = (j + 7) % 10;
        if (k == l) continue;
        EXPECT_NEAR(deal.at(i, j) * x1[k] * x2[l], deal.at(k, l) * x1[i] * x2[j], 1e-9);
      }
  }
}

TEST(Marginals, PolarAndConstantExample) {
  const auto f = marginals(ts::p1_polar_deal());
  const std::vector<double> cdf1 = {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 1.0};
  const std::vector<double> cdf2 = {0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  for (int k = 0; k < 10; ++k) {
    EXPECT_NEAR(f.cdf1[k], cdf1[k], 1e-12);
    EXPECT_NEAR(f.cdf2[k], cdf2[k], 1e-12);
  }
  f.validate();
}

TEST(Marginals, UniformDeal) {
  const auto f = marginals(JointDeal::uniform(10));
  for (int k = 0; k < 10; ++k) {
    EXPECT_NEAR(f.cdf1[k], 0.1 * (k + 1), 1e-12);
    EXPECT_NEAR(f.cdf2[k], 0.1 * (k + 1), 1e-12);
  }
}

TEST(Marginals, PointMassRowDeal) {
  const auto f = marginals(make_joint(ts::point_mass(10, 0), ts::uniform_pdf(10)));
  for (int k = 0; k < 10; ++k) EXPECT_NEAR(f.cdf1[k], 1.0, 1e-12);
}

TEST(CdfPdf, PolarExample) {
  const std::vector<double> cdf = {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 1.0};
  const auto pdf = cdf_to_pdf(cdf);
  EXPECT_NEAR(pdf[0], 0.5, 1e-12);
  for (int k = 1; k < 9; ++k) EXPECT_NEAR(pdf[k], 0.0, 1e-12);
  EXPECT_NEAR(pdf[9], 0.5, 1e-12);
}

TEST(CdfPdf, UniformExample) {
  std::vector<double> cdf(10);
  for (int k = 0; k < 10; ++k) cdf[k] = 0.1 * (k + 1);
  for (const double v : cdf_to_pdf(cdf)) EXPECT_NEAR(v, 0.1, 1e-12);
}

TEST(CdfPdf, RoundTripOnRandomCdfs) {
  Rng rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto cdf = pdf_to_cdf(sample_simplex(10, rng));
    const auto back = pdf_to_cdf(cdf_to_pdf(cdf));
    for (int k = 0; k < 10; ++k) EXPECT_NEAR(back[k], cdf[k], 1e-12);
  }
}

TEST(CdfPdf, DecreasingCdfRejected) {
  EXPECT_THROW(cdf_to_pdf({0.5, 0.4, 1.0}), InvalidDistribution);
}

TEST(Marginals, RandomDealsProduceValidFeatures) {
  Rng rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    const auto deal = make_joint(sample_simplex(10, rng), sample_simplex(10, rng));
    deal.validate();
    marginals(deal).validate();
  }
}
