// tests/uncertainty_test.cc

// Copyright 2026 The mmsenmf Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "mmsenmf/uncertainty.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mmsenmf/mmse.h"
#include "test_util.h"

namespace mmsenmf {
namespace {

using testing::Gauss;
using testing::RandomPrior;
using testing::RandomPsi;
using testing::Uniform;

GmmPrior StandardPrior(int d) {
  return GmmPrior{Vector::Ones(1), Matrix::Zero(d, 1), Matrix::Ones(d, 1)};
}

UncertaintyDiag Diag(const Vector &v) {
  UncertaintyDiag u;
  u.psi = v;
  return u;
}

TEST(PosteriorStats, ScalarHandExample) {
  const PosteriorStats s =
      ComputePosteriorStats(Vector::Constant(1, 2.0), StandardPrior(1), Diag(Vector::Ones(1)));
  EXPECT_NEAR(s.z_hat(0), 1.0, 1e-15);
  EXPECT_NEAR(s.r_hat(0), 1.5, 1e-15);
}

TEST(PosteriorStats, ZeroUncertaintyIsIdentity) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const GmmPrior p = RandomPrior(&rng, 4, 3);
    const Vector q = p.means.col(0) + 0.3 * Vector::NullaryExpr(4, [&] { return Gauss(&rng); });
    const PosteriorStats s = ComputePosteriorStats(q, p, UncertaintyDiag::Zero(4));
    EXPECT_LT((s.z_hat - q).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((s.r_hat - q.cwiseAbs2()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(LearnPsiEm, OneStepHandExample) {
  LogNormalizedColumns Q;
  Q.values = Matrix{{2.0}, {0.0}};
  PsiEmConfig cfg;
  cfg.max_iters = 1;
  const PsiEmResult r = LearnPsiEm(Q, StandardPrior(2), cfg, Diag(Vector::Ones(2)));
  EXPECT_EQ(r.iterations, 1);
  EXPECT_NEAR(r.psi.psi(0), 1.5, 1e-15);
  EXPECT_NEAR(r.psi.psi(1), 0.5, 1e-15);
  EXPECT_EQ(r.log_likelihood_trace.size(), 2u);
}

struct Corpus {
  GmmPrior prior;
  LogNormalizedColumns clean;
};

Corpus SampleFromPrior(std::uint64_t seed, int d, int K, int n) {
  std::mt19937_64 rng(seed);
  Corpus c{RandomPrior(&rng, d, K), {}};
  std::discrete_distribution<int> pick(c.prior.weights.data(),
                                       c.prior.weights.data() + K);
  c.clean.values.resize(d, n);
  for (int i = 0; i < n; ++i) {
    const int k = pick(rng);
    for (int a = 0; a < d; ++a)
      c.clean.values(a, i) = c.prior.means(a, k) +
                             std::sqrt(c.prior.variances(a, k)) * Gauss(&rng);
  }
  return c;
}

TEST(LearnPsiEm, RecoversKnownNoiseVariance) {
  const Vector truth{{0.3, 0.5, 0.8, 1.0}};
  Corpus c = SampleFromPrior(3, 4, 3, 5000);
  std::mt19937_64 rng(33);
  LogNormalizedColumns Q = c.clean;
  for (int i = 0; i < Q.values.cols(); ++i)
    for (int a = 0; a < 4; ++a) Q.values(a, i) += std::sqrt(truth(a)) * Gauss(&rng);
  PsiEmConfig cfg;
  cfg.max_iters = 1000;
  cfg.relative_tolerance = 1e-7;
  const PsiEmResult r = LearnPsiEm(Q, c.prior, cfg, DefaultPsiInit(Q, c.prior));
  for (int a = 0; a < 4; ++a)
    EXPECT_NEAR(r.psi.psi(a), truth(a), 0.2 * truth(a)) << a;
  for (std::size_t i = 1; i < r.log_likelihood_trace.size(); ++i)
    EXPECT_GE(r.log_likelihood_trace[i], r.log_likelihood_trace[i - 1] - 1e-8);
}

TEST(LearnPsiEm, CleanDataGivesSmallUncertainty) {
  const Corpus c = SampleFromPrior(5, 4, 3, 5000);
  PsiEmConfig cfg;
  cfg.max_iters = 1000;
  const PsiEmResult r = LearnPsiEm(c.clean, c.prior, cfg, DefaultPsiInit(c.clean, c.prior));
  EXPECT_LE(r.psi.psi.maxCoeff(), 0.1 * c.prior.variances.mean());
}

TEST(LearnPsiEm, LikelihoodNonDecreasingFromArbitraryStart) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Corpus c = SampleFromPrior(seed + 10, 3, 2, 300);
    std::mt19937_64 rng(seed);
    c.clean.values.array() += 0.5 * Matrix::NullaryExpr(3, 300, [&] { return Gauss(&rng); }).array();
    PsiEmConfig cfg;
    cfg.max_iters = 40;
    cfg.relative_tolerance = 0.0;
    const PsiEmResult r = LearnPsiEm(c.clean, c.prior, cfg, RandomPsi(&rng, 3, 0.01, 5.0));
    EXPECT_EQ(r.iterations, 40);
    for (std::size_t i = 1; i < r.log_likelihood_trace.size(); ++i)
      EXPECT_GE(r.log_likelihood_trace[i], r.log_likelihood_trace[i - 1] - 1e-8)
          << "seed " << seed << " iter " << i;
    EXPECT_GE(r.psi.psi.minCoeff(), cfg.entry_floor);
  }
}

TEST(LearnPsiEm, RejectsBadInput) {
  LogNormalizedColumns empty;
  empty.values.resize(2, 0);
  EXPECT_THROW(LearnPsiEm(empty, StandardPrior(2), {}, Diag(Vector::Ones(2))),
               std::invalid_argument);
  LogNormalizedColumns Q;
  Q.values = -Matrix::Ones(3, 4);
  EXPECT_THROW(LearnPsiEm(Q, StandardPrior(2), {}, Diag(Vector::Ones(2))),
               std::invalid_argument);
}

TEST(MmseEstimate, HandExample) {
  const Vector f = MmseEstimate(Vector::Constant(2, 2.0), StandardPrior(2), Diag(Vector::Ones(2)));
  EXPECT_NEAR(f(0), 1.0, 1e-15);
  EXPECT_NEAR(f(1), 1.0, 1e-15);
}

TEST(MmseEstimate, Limits) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const GmmPrior p = RandomPrior(&rng, 3, 3);
    const Vector q = Vector::NullaryExpr(3, [&] { return Uniform(&rng, -3.0, 0.0); });
    EXPECT_LT((MmseEstimate(q, p, UncertaintyDiag::Zero(3)) - q).cwiseAbs().maxCoeff(), 1e-12);
    const Vector far = MmseEstimate(q, p, Diag(Vector::Constant(3, 1e8)));
    EXPECT_LT((far - p.means * p.weights).cwiseAbs().maxCoeff(), 1e-3);
  }
}

TEST(MmseEstimate, SingleComponentShrinksMonotonically) {
  std::mt19937_64 rng(9);
  const GmmPrior p = RandomPrior(&rng, 2, 1);
  const Vector q{{-3.0, 0.0}};
  Vector prev = q;
  for (double s : {0.01, 0.1, 0.5, 1.0, 5.0, 50.0}) {
    const Vector f = MmseEstimate(q, p, Diag(Vector::Constant(2, s)));
    for (int a = 0; a < 2; ++a) {
      const double lo = std::min(q(a), p.means(a, 0)), hi = std::max(q(a), p.means(a, 0));
      EXPECT_GE(f(a), lo - 1e-15);
      EXPECT_LE(f(a), hi + 1e-15);
      EXPECT_LE(std::abs(f(a) - p.means(a, 0)), std::abs(prev(a) - p.means(a, 0)) + 1e-15);
    }
    prev = f;
  }
}

// Posterior mean by brute-force integration of prior x likelihood on a grid.
Vector GridPosteriorMean(const Vector &q, const GmmPrior &p,
                         const UncertaintyDiag &psi, int points) {
  const int d = static_cast<int>(q.size());
  const double lo = -14.0, hi = 8.0, h = (hi - lo) / points;
  long total = 1;
  for (int a = 0; a < d; ++a) total *= points;
  Vector num = Vector::Zero(d), x(d);
  double den = 0.0;
  for (long idx = 0; idx < total; ++idx) {
    long r = idx;
    for (int a = 0; a < d; ++a) {
      x(a) = lo + (r % points + 0.5) * h;
      r /= points;
    }
    double lik = 0.0;
    for (int a = 0; a < d; ++a) {
      const double e = q(a) - x(a);
      lik -= 0.5 * e * e / psi.psi(a);
    }
    double prior = 0.0;
    for (Eigen::Index k = 0; k < p.weights.size(); ++k) {
      double l = std::log(p.weights(k));
      for (int a = 0; a < d; ++a) {
        const double e = x(a) - p.means(a, k);
        l -= 0.5 * (e * e / p.variances(a, k) + std::log(p.variances(a, k)));
      }
      prior += std::exp(l);
    }
    const double w = prior * std::exp(lik);
    num += w * x;
    den += w;
  }
  return num / den;
}

TEST(MmseEstimate, MatchesGridIntegration) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 6; ++trial) {
    const int d = 1 + trial % 3, K = 1 + (trial / 2) % 3;
    const GmmPrior p = RandomPrior(&rng, d, K);
    const UncertaintyDiag psi = RandomPsi(&rng, d, 0.2, 2.0);
    const Vector q = Vector::NullaryExpr(d, [&] { return Uniform(&rng, -4.0, 0.5); });
    const int points = d == 1 ? 4000 : (d == 2 ? 400 : 150);
    const Vector oracle = GridPosteriorMean(q, p, psi, points);
    EXPECT_LT((MmseEstimate(q, p, psi) - oracle).cwiseAbs().maxCoeff(), 1e-3)
        << "d=" << d << " K=" << K;
  }
}

TEST(MmseEstimate, ColumnsMatchPerColumn) {
  std::mt19937_64 rng(13);
  const GmmPrior p = RandomPrior(&rng, 3, 2);
  const UncertaintyDiag psi = RandomPsi(&rng, 3);
  const Matrix Q = -Matrix::NullaryExpr(3, 7, [&] { return Uniform(&rng, 0.0, 3.0); });
  const Matrix F = MmseEstimateColumns(Q, p, psi);
  for (int n = 0; n < 7; ++n)
    EXPECT_TRUE(F.col(n) == MmseEstimate(Q.col(n), p, psi));
}

}  // namespace
}  // namespace mmsenmf
