// mmsenmf/mmse.h

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

#ifndef MMSENMF_MMSE_H_
#define MMSENMF_MMSE_H_

#include "mmsenmf/gmm.h"

namespace mmsenmf {

// Posterior mean of the clean log-gain pattern given the observation q:
//   f(q) = sum_k gamma_k [mu_k + Sigma_k (Sigma_k + Psi)^-1 (q - mu_k)]
// with gamma computed under the Psi-inflated covariances.
Vector MmseEstimate(const Vector &q, const GmmPrior &model,
                    const UncertaintyDiag &psi);

// Column-by-column MmseEstimate.
Matrix MmseEstimateColumns(const Matrix &Q, const GmmPrior &model,
                           const UncertaintyDiag &psi);

}  // namespace mmsenmf

#endif  // MMSENMF_MMSE_H_
