// mmse.cc

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

#include "mmsenmf/mmse.h"

namespace mmsenmf {

Vector MmseEstimate(const Vector &q, const GmmPrior &model,
                    const UncertaintyDiag &psi) {
  const Vector gamma = ResponsibilitiesWithUncertainty(q, model, psi);
  Vector estimate = Vector::Zero(q.size());
  for (int k = 0; k < model.num_components(); ++k) {
    const Eigen::ArrayXd sigma = model.variances.col(k).array();
    const Eigen::ArrayXd mu = model.means.col(k).array();
    const Eigen::ArrayXd shrink = sigma / (sigma + psi.psi.array());
    estimate.array() += gamma(k) * (mu + shrink * (q.array() - mu));
  }
  return estimate;
}

Matrix MmseEstimateColumns(const Matrix &Q, const GmmPrior &model,
                           const UncertaintyDiag &psi) {
  Matrix out(Q.rows(), Q.cols());
  for (Eigen::Index n = 0; n < Q.cols(); ++n)
    out.col(n) = MmseEstimate(Q.col(n), model, psi);
  return out;
}

}  // namespace mmsenmf
