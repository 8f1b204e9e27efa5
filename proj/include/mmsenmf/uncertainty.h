// mmsenmf/uncertainty.h

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

#ifndef MMSENMF_UNCERTAINTY_H_
#define MMSENMF_UNCERTAINTY_H_

#include <vector>

#include "mmsenmf/gmm.h"

namespace mmsenmf {

// Sufficient statistics of the clean log-gain x given an observation
// q = x + e, e ~ N(0, Psi), under a fixed GMM prior on x. All covariances
// are diagonal, so R_hat holds only the diagonal of E[x x' | q].
struct PosteriorStats {
  Vector z_hat;
  Vector r_hat;
  Vector gamma;
};

PosteriorStats ComputePosteriorStats(const Vector &q, const GmmPrior &model,
                                     const UncertaintyDiag &psi);

struct PsiEmConfig {
  int max_iters = 50;
  // Stop once max_i |psi_new - psi_old| / psi_old falls below this.
  double relative_tolerance = 1e-6;
  double entry_floor = 1e-10;
};

struct PsiEmResult {
  UncertaintyDiag psi;
  // Marginal log-likelihood sum_n log sum_k pi_k N(q_n | mu_k, Sigma_k + Psi)
  // for the initial Psi and after every iteration.
  std::vector<double> log_likelihood_trace;
  int iterations = 0;
};

// Coordinatewise sample variance of Q minus the marginal variance of the
// prior mixture, clamped to >= 1e-6.
UncertaintyDiag DefaultPsiInit(const LogNormalizedColumns &Q,
                               const GmmPrior &model);

// EM for the diagonal deformation covariance with the prior held fixed.
// Throws std::invalid_argument on an empty Q.
PsiEmResult LearnPsiEm(const LogNormalizedColumns &Q, const GmmPrior &model,
                       const PsiEmConfig &config, const UncertaintyDiag &init);

}  // namespace mmsenmf

#endif  // MMSENMF_UNCERTAINTY_H_
