// uncertainty.cc

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
#include <stdexcept>

namespace mmsenmf {

PosteriorStats ComputePosteriorStats(const Vector &q, const GmmPrior &model,
                                     const UncertaintyDiag &psi) {
  PosteriorStats out;
  out.gamma = ResponsibilitiesWithUncertainty(q, model, psi);
  const Eigen::Index d = q.size();
  out.z_hat = Vector::Zero(d);
  out.r_hat = Vector::Zero(d);
  for (int k = 0; k < model.num_components(); ++k) {
    const Eigen::ArrayXd sigma = model.variances.col(k).array();
    const Eigen::ArrayXd mu = model.means.col(k).array();
    const Eigen::ArrayXd shrink = sigma / (sigma + psi.psi.array());
    const Eigen::ArrayXd z = mu + shrink * (q.array() - mu);
    const Eigen::ArrayXd r = sigma - shrink * sigma + z.square();
    out.z_hat.array() += out.gamma(k) * z;
    out.r_hat.array() += out.gamma(k) * r;
  }
  return out;
}

UncertaintyDiag DefaultPsiInit(const LogNormalizedColumns &Q,
                               const GmmPrior &model) {
  if (Q.size() == 0) throw std::invalid_argument("empty observation set");
  const Matrix &X = Q.values;
  const Vector mean = X.rowwise().mean();
  const Vector sample_var =
      (X.colwise() - mean).array().square().rowwise().mean();
  const Vector prior_mean = model.means * model.weights;
  const Vector second =
      (model.variances + model.means.cwiseAbs2()) * model.weights;
  const Vector prior_var = second - prior_mean.cwiseAbs2();
  return {(sample_var - prior_var).cwiseMax(1e-6)};
}

PsiEmResult LearnPsiEm(const LogNormalizedColumns &Q, const GmmPrior &model,
                       const PsiEmConfig &config, const UncertaintyDiag &init) {
  if (Q.size() == 0) throw std::invalid_argument("empty observation set");
  if (Q.dim() != model.dim() || init.dim() != model.dim())
    throw std::invalid_argument("dimension mismatch between Q, prior and psi");
  const Matrix &X = Q.values;
  const Eigen::Index N = X.cols();

  PsiEmResult result;
  result.psi = init;
  result.log_likelihood_trace.push_back(
      GmmDataLogLikelihood(X, model, result.psi));
  for (int it = 0; it < config.max_iters; ++it) {
    Vector acc = Vector::Zero(X.rows());
    for (Eigen::Index n = 0; n < N; ++n) {
      const Vector q = X.col(n);
      const PosteriorStats stats = ComputePosteriorStats(q, model, result.psi);
      acc.array() += q.array().square() -
                     2.0 * q.array() * stats.z_hat.array() +
                     stats.r_hat.array();
    }
    const Vector next = (acc / static_cast<double>(N)).cwiseMax(config.entry_floor);
    const double change =
        ((next - result.psi.psi).cwiseAbs().array() /
         result.psi.psi.array().max(config.entry_floor))
            .maxCoeff();
    result.psi.psi = next;
    result.iterations = it + 1;
    result.log_likelihood_trace.push_back(
        GmmDataLogLikelihood(X, model, result.psi));
    if (change < config.relative_tolerance) break;
  }
  return result;
}

}  // namespace mmsenmf
