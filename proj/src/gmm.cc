// gmm.cc

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

#include "mmsenmf/gmm.h"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace mmsenmf {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

double UniformDraw(std::mt19937_64 *rng) {
  return static_cast<double>((*rng)() >> 11) * 0x1.0p-53;
}

// Seeded k-means++ selection of K data columns as initial means.
Matrix KMeansPlusPlusSeeds(const Matrix &data, int K, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Eigen::Index N = data.cols();
  Matrix centers(data.rows(), K);
  auto first = static_cast<Eigen::Index>(UniformDraw(&rng) * N);
  if (first >= N) first = N - 1;
  centers.col(0) = data.col(first);
  Vector nearest = (data.colwise() - centers.col(0)).colwise().squaredNorm();
  for (int k = 1; k < K; ++k) {
    const double total = nearest.sum();
    Eigen::Index pick = N - 1;
    if (total > 0.0) {
      const double target = UniformDraw(&rng) * total;
      double run = 0.0;
      for (Eigen::Index n = 0; n < N; ++n) {
        run += nearest(n);
        if (run > target) {
          pick = n;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(UniformDraw(&rng) * N);
      if (pick >= N) pick = N - 1;
    }
    centers.col(k) = data.col(pick);
    nearest = nearest.cwiseMin(
        (data.colwise() - centers.col(k)).colwise().squaredNorm().transpose());
  }
  return centers;
}

}  // namespace

void GmmPrior::Validate() const {
  const Eigen::Index K = weights.size();
  if (K == 0) throw std::invalid_argument("GMM has no components");
  if (means.cols() != K || variances.cols() != K ||
      variances.rows() != means.rows())
    throw std::invalid_argument("GMM parameter shapes disagree");
  if ((weights.array() < 0.0).any() || std::abs(weights.sum() - 1.0) > 1e-9)
    throw std::invalid_argument("GMM weights must be nonnegative and sum to 1");
  if (!(variances.array() > 0.0).all())
    throw std::invalid_argument("GMM variances must be positive");
}

double LogSumExp(const Vector &v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((v.array() - m).exp().sum());
}

Vector FloorGains(const Vector &g, double floor) {
  const double n = g.norm();
  return g.cwiseMax(n > 0.0 ? floor * n : floor);
}

Vector LogNormalizeColumn(const Vector &g, double floor) {
  const Vector clamped = FloorGains(g, floor);
  return (clamped / clamped.norm()).array().log();
}

LogNormalizedColumns LogNormalizeColumns(const Matrix &G, double floor) {
  LogNormalizedColumns out;
  out.values.resize(G.rows(), G.cols());
  for (Eigen::Index n = 0; n < G.cols(); ++n)
    out.values.col(n) = LogNormalizeColumn(G.col(n), floor);
  // log of a unit-norm direction cannot be positive; trim round-off.
  out.values = out.values.cwiseMin(0.0);
  return out;
}

Vector ComponentLogDensities(const Vector &x, const GmmPrior &model,
                             const UncertaintyDiag &psi) {
  const int K = model.num_components();
  const Eigen::Index d = model.dim();
  if (x.size() != d)
    throw std::invalid_argument("dimension mismatch: x has " +
                                std::to_string(x.size()) + ", model has " +
                                std::to_string(d));
  const bool has_psi = psi.psi.size() != 0;
  if (has_psi && psi.psi.size() != d)
    throw std::invalid_argument("dimension mismatch between psi and model");
  Vector out(K);
  for (int k = 0; k < K; ++k) {
    Eigen::ArrayXd var = model.variances.col(k).array();
    if (has_psi) var += psi.psi.array();
    const Eigen::ArrayXd diff = x.array() - model.means.col(k).array();
    const double quad = (diff.square() / var).sum();
    const double logdet = var.log().sum();
    out(k) = std::log(model.weights(k)) - 0.5 * (d * kLog2Pi + logdet + quad);
  }
  return out;
}

double GmmLogDensity(const Vector &x, const GmmPrior &model,
                     const UncertaintyDiag &psi) {
  return LogSumExp(ComponentLogDensities(x, model, psi));
}

Vector ResponsibilitiesWithUncertainty(const Vector &x, const GmmPrior &model,
                                       const UncertaintyDiag &psi) {
  const Vector logp = ComponentLogDensities(x, model, psi);
  Vector gamma = (logp.array() - logp.maxCoeff()).exp();
  gamma /= gamma.sum();
  return gamma;
}

double GmmDataLogLikelihood(const Matrix &data, const GmmPrior &model,
                            const UncertaintyDiag &psi) {
  double total = 0.0;
  for (Eigen::Index n = 0; n < data.cols(); ++n)
    total += GmmLogDensity(data.col(n), model, psi);
  return total;
}

GmmFitResult FitGmmEm(const LogNormalizedColumns &data,
                      const GmmFitConfig &config) {
  const int K = config.num_components;
  const Matrix &X = data.values;
  const Eigen::Index N = X.cols();
  if (K <= 0) throw std::invalid_argument("K must be positive");
  if (N < K)
    throw std::invalid_argument("too few samples: " + std::to_string(N) +
                                " columns for " + std::to_string(K) +
                                " components");
  const bool nonpositive = (X.array() <= 0.0).all();

  GmmFitResult result;
  GmmPrior &model = result.model;
  model.weights = Vector::Constant(K, 1.0 / K);
  model.means = KMeansPlusPlusSeeds(X, K, config.rng_seed);
  const Vector mean = X.rowwise().mean();
  const Vector pooled =
      ((X.colwise() - mean).array().square().rowwise().sum() /
       static_cast<double>(N))
          .matrix()
          .cwiseMax(config.covariance_floor);
  model.variances = pooled.replicate(1, K);

  const UncertaintyDiag no_psi;
  Matrix resp(K, N);
  double prev = -std::numeric_limits<double>::infinity();
  for (int it = 0; it <= config.max_iters; ++it) {
    double loglik = 0.0;
    for (Eigen::Index n = 0; n < N; ++n) {
      const Vector logp = ComponentLogDensities(X.col(n), model, no_psi);
      const double lse = LogSumExp(logp);
      loglik += lse;
      resp.col(n) = (logp.array() - lse).exp();
    }
    result.log_likelihood_trace.push_back(loglik);
    if (it == config.max_iters) break;
    if (it > 0 && (loglik - prev) <= config.tolerance * N) break;
    prev = loglik;

    // M-step.
    const Vector counts = resp.rowwise().sum();
    for (int k = 0; k < K; ++k) {
      if (counts(k) <= std::numeric_limits<double>::min()) continue;
      const Vector mu = X * resp.row(k).transpose() / counts(k);
      const Matrix centered = X.colwise() - mu;
      const Vector var = centered.array().square().matrix() *
                         resp.row(k).transpose() / counts(k);
      model.means.col(k) = nonpositive ? mu.cwiseMin(0.0) : mu;
      model.variances.col(k) = var.cwiseMax(config.covariance_floor);
    }
    model.weights = (counts / static_cast<double>(N)).cwiseMax(config.weight_floor);
    model.weights /= model.weights.sum();
  }
  model.Validate();
  return result;
}

}  // namespace mmsenmf
