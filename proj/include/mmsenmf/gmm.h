// mmsenmf/gmm.h

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

#ifndef MMSENMF_GMM_H_
#define MMSENMF_GMM_H_

#include <cstdint>
#include <vector>

#include "mmsenmf/nmf.h"

namespace mmsenmf {

/// Diagonal-covariance Gaussian mixture over d-dimensional log-normalized
/// gain columns. means and variances are d x K, one component per column.
struct GmmPrior {
  Vector weights;
  Matrix means;
  Matrix variances;

  int num_components() const { return static_cast<int>(weights.size()); }
  int dim() const { return static_cast<int>(means.rows()); }
  /// Shapes agree, weights sum to one, variances are positive.
  void Validate() const;
  bool HasNonpositiveMeans() const { return (means.array() <= 0.0).all(); }
};

/// Diagonal of the deformation covariance Psi in the log-gain domain.
struct UncertaintyDiag {
  Vector psi;

  static UncertaintyDiag Zero(int dim) { return {Vector::Zero(dim)}; }
  int dim() const { return static_cast<int>(psi.size()); }
};

/// d x N matrix whose column n is log(g_n / ||g_n||_2); every entry <= 0.
struct LogNormalizedColumns {
  Matrix values;
  int dim() const { return static_cast<int>(values.rows()); }
  int size() const { return static_cast<int>(values.cols()); }
};

/// Gains are floored relative to their column norm, so the log-normalized
/// representation does not depend on the overall level of the signal.
inline constexpr double kGainFloor = 1e-8;
inline constexpr double kCovarianceFloor = 1e-6;
inline constexpr double kWeightFloor = 1e-8;

/// max(g, floor * ||g||_2); an all-zero g is clamped to `floor`.
Vector FloorGains(const Vector &g, double floor = kGainFloor);

/// x = FloorGains(g, floor); returns log(x / ||x||_2).
Vector LogNormalizeColumn(const Vector &g, double floor = kGainFloor);
LogNormalizedColumns LogNormalizeColumns(const Matrix &G,
                                         double floor = kGainFloor);

struct GmmFitConfig {
  int num_components = 16;
  int max_iters = 100;
  std::uint64_t rng_seed = 0;
  /// Stops early once the per-sample log-likelihood gain falls below this.
  double tolerance = 1e-9;
  double covariance_floor = kCovarianceFloor;
  double weight_floor = kWeightFloor;
};

struct GmmFitResult {
  GmmPrior model;
  /// Total data log-likelihood after each EM iteration.
  std::vector<double> log_likelihood_trace;
};

/// EM for a diagonal GMM. Means start from a seeded k-means++ selection of
/// data columns, variances from the pooled data variance, weights uniform.
/// After every M-step means are clamped to <= 0 when the data is nonpositive.
/// Throws std::invalid_argument("too few samples") when K > N.
GmmFitResult FitGmmEm(const LogNormalizedColumns &data,
                      const GmmFitConfig &config);

/// log(pi_k) + log N(x | mu_k, Sigma_k + Psi) for every k. An empty psi is
/// treated as zero.
Vector ComponentLogDensities(const Vector &x, const GmmPrior &model,
                             const UncertaintyDiag &psi);

/// log sum_k pi_k N(x | mu_k, Sigma_k + Psi), via log-sum-exp.
double GmmLogDensity(const Vector &x, const GmmPrior &model,
                     const UncertaintyDiag &psi);

/// Posterior component weights under the Psi-inflated covariances.
Vector ResponsibilitiesWithUncertainty(const Vector &x, const GmmPrior &model,
                                       const UncertaintyDiag &psi);

/// Sum of GmmLogDensity over the columns of data.
double GmmDataLogLikelihood(const Matrix &data, const GmmPrior &model,
                            const UncertaintyDiag &psi);

/// Stable log(sum(exp(v))).
double LogSumExp(const Vector &v);

}  // namespace mmsenmf

#endif  // MMSENMF_GMM_H_
