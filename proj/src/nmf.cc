// nmf.cc

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

#include "mmsenmf/nmf.h"

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace mmsenmf {

namespace {

void CheckShapes(const Matrix &V, const Matrix &B, const Matrix &G) {
  if (B.cols() != G.rows() || V.rows() != B.rows() || V.cols() != G.cols())
    throw std::invalid_argument(
        "shape mismatch: V is " + std::to_string(V.rows()) + "x" +
        std::to_string(V.cols()) + ", B is " + std::to_string(B.rows()) + "x" +
        std::to_string(B.cols()) + ", G is " + std::to_string(G.rows()) + "x" +
        std::to_string(G.cols()));
}

Matrix FlooredProduct(const Matrix &B, const Matrix &G, double floor) {
  return (B * G).cwiseMax(floor);
}

}  // namespace

int GainsMatrix::BlockOffset(std::size_t block) const {
  if (block > block_ranks.size())
    throw std::out_of_range("block index out of range");
  return std::accumulate(block_ranks.begin(), block_ranks.begin() + block, 0);
}

void GainsMatrix::Validate() const {
  if (block_ranks.empty()) return;
  const int total = std::accumulate(block_ranks.begin(), block_ranks.end(), 0);
  if (total != values.rows())
    throw std::invalid_argument("block ranks sum to " + std::to_string(total) +
                                " but gains have " +
                                std::to_string(values.rows()) + " rows");
}

void NmfConfig::Validate() const {
  if (rank <= 0) throw std::invalid_argument("rank must be positive");
  if (max_iters <= 0) throw std::invalid_argument("max_iters must be positive");
  if (!(epsilon_floor > 0.0))
    throw std::invalid_argument("epsilon_floor must be positive");
}

double IsDivergence(const Matrix &V, const Matrix &B, const Matrix &G,
                    double epsilon_floor) {
  CheckShapes(V, B, G);
  const Matrix model = FlooredProduct(B, G, epsilon_floor);
  const Matrix ratio = V.cwiseMax(epsilon_floor).cwiseQuotient(model);
  double cost = 0.0;
  for (Eigen::Index j = 0; j < ratio.cols(); ++j)
    for (Eigen::Index i = 0; i < ratio.rows(); ++i) {
      const double r = ratio(i, j);
      cost += r - std::log(r) - 1.0;
    }
  return std::max(cost, 0.0);
}

Matrix UpdateBasis(const Matrix &V, const Matrix &B, const Matrix &G,
                   double epsilon_floor) {
  CheckShapes(V, B, G);
  const Matrix model = FlooredProduct(B, G, epsilon_floor);
  const Matrix inv = model.cwiseInverse();
  const Matrix weighted = V.cwiseMax(epsilon_floor).cwiseProduct(inv).cwiseProduct(inv);
  const Matrix num = weighted * G.transpose();
  const Matrix den = (inv * G.transpose()).cwiseMax(epsilon_floor);
  return B.cwiseProduct(num).cwiseQuotient(den);
}

IsGradientSplit IsGainsGradient(const Matrix &V, const Matrix &B,
                                const Matrix &G, double epsilon_floor) {
  CheckShapes(V, B, G);
  const Matrix model = FlooredProduct(B, G, epsilon_floor);
  const Matrix inv = model.cwiseInverse();
  const Matrix weighted = V.cwiseMax(epsilon_floor).cwiseProduct(inv).cwiseProduct(inv);
  return {B.transpose() * weighted, B.transpose() * inv};
}

Matrix UpdateGains(const Matrix &V, const Matrix &B, const Matrix &G,
                   double epsilon_floor) {
  const IsGradientSplit grad = IsGainsGradient(V, B, G, epsilon_floor);
  return G.cwiseProduct(grad.negative)
      .cwiseQuotient(grad.positive.cwiseMax(epsilon_floor));
}

void NormalizeBasisColumns(Matrix *B, Matrix *G) {
  for (Eigen::Index r = 0; r < B->cols(); ++r) {
    const double norm = B->col(r).norm();
    if (norm <= 0.0) continue;
    B->col(r) /= norm;
    G->row(r) *= norm;
  }
}

Matrix PositiveRandomMatrix(Eigen::Index rows, Eigen::Index cols,
                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Matrix out(rows, cols);
  // Column-major fill; 53-bit mantissa draw so results do not depend on the
  // standard library's distribution implementation.
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i)
      out(i, j) = 0.1 + static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return out;
}

FactorizeResult Factorize(const Matrix &V, const NmfConfig &config) {
  config.Validate();
  if ((V.array() < 0.0).any())
    throw std::invalid_argument("spectrogram has negative entries");
  Matrix B = PositiveRandomMatrix(V.rows(), config.rank, config.rng_seed);
  Matrix G = PositiveRandomMatrix(config.rank, V.cols(), config.rng_seed + 1);

  FactorizeResult result;
  for (int it = 0; it < config.max_iters; ++it) {
    B = UpdateBasis(V, B, G, config.epsilon_floor);
    NormalizeBasisColumns(&B, &G);
    G = UpdateGains(V, B, G, config.epsilon_floor);
    if (config.track_cost)
      result.cost_trace.push_back(IsDivergence(V, B, G, config.epsilon_floor));
  }
  NormalizeBasisColumns(&B, &G);
  result.final_divergence = IsDivergence(V, B, G, config.epsilon_floor);
  result.basis.values = std::move(B);
  result.gains.values = std::move(G);
  return result;
}

DecomposeResult DecomposeFixedBasis(const Matrix &Y, const BasisMatrix &basis,
                                    const NmfConfig &config,
                                    std::vector<int> block_ranks) {
  if (config.max_iters <= 0)
    throw std::invalid_argument("max_iters must be positive");
  const Matrix &B = basis.values;
  Matrix G = PositiveRandomMatrix(B.cols(), Y.cols(), config.rng_seed);
  DecomposeResult result;
  for (int it = 0; it < config.max_iters; ++it) {
    G = UpdateGains(Y, B, G, config.epsilon_floor);
    if (config.track_cost)
      result.cost_trace.push_back(IsDivergence(Y, B, G, config.epsilon_floor));
  }
  result.gains.values = std::move(G);
  result.gains.block_ranks = std::move(block_ranks);
  result.gains.Validate();
  return result;
}

BasisMatrix ConcatenateBases(const std::vector<const BasisMatrix *> &bases,
                             std::vector<int> *block_ranks) {
  if (bases.empty()) throw std::invalid_argument("no bases to concatenate");
  const Eigen::Index rows = bases.front()->values.rows();
  Eigen::Index cols = 0;
  for (const BasisMatrix *b : bases) {
    if (b->values.rows() != rows)
      throw std::invalid_argument("bases have different numbers of bins");
    cols += b->values.cols();
  }
  BasisMatrix out;
  out.values.resize(rows, cols);
  block_ranks->clear();
  Eigen::Index offset = 0;
  for (const BasisMatrix *b : bases) {
    out.values.middleCols(offset, b->values.cols()) = b->values;
    offset += b->values.cols();
    block_ranks->push_back(static_cast<int>(b->values.cols()));
  }
  return out;
}

}  // namespace mmsenmf
