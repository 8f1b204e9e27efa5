// tests/test_util.h

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

#ifndef MMSENMF_TESTS_TEST_UTIL_H_
#define MMSENMF_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "mmsenmf/gmm.h"
#include "mmsenmf/spectral.h"

namespace mmsenmf::testing {

inline double Uniform(std::mt19937_64 *rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(*rng);
}

inline double Gauss(std::mt19937_64 *rng) {
  return std::normal_distribution<double>(0.0, 1.0)(*rng);
}

inline Vector RandomPositive(std::mt19937_64 *rng, int d, double lo = 0.05,
                             double hi = 1.05) {
  Vector v(d);
  for (int i = 0; i < d; ++i) v(i) = Uniform(rng, lo, hi);
  return v;
}

// Random diagonal GMM whose means are log-normalized positive vectors (so
// every mean entry is <= 0, as for a trained gains prior).
inline GmmPrior RandomPrior(std::mt19937_64 *rng, int d, int K) {
  GmmPrior p;
  p.weights.resize(K);
  p.means.resize(d, K);
  p.variances.resize(d, K);
  for (int k = 0; k < K; ++k) {
    p.weights(k) = Uniform(rng, 0.2, 1.0);
    p.means.col(k) = LogNormalizeColumn(RandomPositive(rng, d, 0.05, 1.0));
    for (int i = 0; i < d; ++i) p.variances(i, k) = Uniform(rng, 0.2, 2.0);
  }
  p.weights /= p.weights.sum();
  return p;
}

inline UncertaintyDiag RandomPsi(std::mt19937_64 *rng, int d, double lo = 0.05,
                                 double hi = 2.0) {
  UncertaintyDiag u;
  u.psi.resize(d);
  for (int i = 0; i < d; ++i) u.psi(i) = Uniform(rng, lo, hi);
  return u;
}

// Central differences of a scalar function of a vector, step 1e-5 * |x_i|.
inline Vector CentralDifferenceGradient(
    const std::function<double(const Vector &)> &fn, const Vector &x,
    double rel_step = 1e-5) {
  Vector grad(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = rel_step * std::max(std::abs(x(i)), 1e-3);
    Vector xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    grad(i) = (fn(xp) - fn(xm)) / (2.0 * h);
  }
  return grad;
}

// Jacobian (rows: outputs, cols: inputs) by central differences.
inline Matrix CentralDifferenceJacobian(
    const std::function<Vector(const Vector &)> &fn, const Vector &x,
    double rel_step = 1e-5) {
  const Vector f0 = fn(x);
  Matrix jac(f0.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = rel_step * std::max(std::abs(x(i)), 1e-3);
    Vector xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    jac.col(i) = (fn(xp) - fn(xm)) / (2.0 * h);
  }
  return jac;
}

// max |a - b| relative to the largest magnitude in the reference.
inline double RelativeError(const Matrix &analytic, const Matrix &reference) {
  const double scale = std::max(reference.cwiseAbs().maxCoeff(), 1e-12);
  return (analytic - reference).cwiseAbs().maxCoeff() / scale;
}

inline AudioSignal WhiteNoise(std::size_t n, std::uint64_t seed,
                              double amplitude = 0.1) {
  std::mt19937_64 rng(seed);
  AudioSignal s;
  s.samples.resize(n);
  for (double &v : s.samples) v = amplitude * Gauss(&rng);
  return s;
}

}  // namespace mmsenmf::testing

#endif  // MMSENMF_TESTS_TEST_UTIL_H_
