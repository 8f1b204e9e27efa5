// mmsenmf/nmf.h

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

#ifndef MMSENMF_NMF_H_
#define MMSENMF_NMF_H_

#include <cstdint>
#include <vector>

#include "mmsenmf/spectral.h"

namespace mmsenmf {

/// F x R dictionary. Columns have unit Euclidean norm after training.
struct BasisMatrix {
  Matrix values;
  int rank() const { return static_cast<int>(values.cols()); }
};

/// R x T activations. block_ranks partitions the rows by source when the
/// basis is a concatenation [B_1, B_2, ...]; it is empty for one source.
struct GainsMatrix {
  Matrix values;
  std::vector<int> block_ranks;

  /// Row offset of block i.
  int BlockOffset(std::size_t block) const;
  /// Throws if block_ranks is nonempty and does not sum to the row count.
  void Validate() const;
};

struct NmfConfig {
  int rank = 128;
  int max_iters = 200;
  double epsilon_floor = 1e-12;
  std::uint64_t rng_seed = 0;
  /// Records the divergence after every iteration in the returned trace.
  bool track_cost = false;

  void Validate() const;
};

/// Itakura-Saito divergence sum(V/BG - log(V/BG) - 1), with V and BG floored
/// at epsilon_floor. Throws std::invalid_argument on a shape mismatch.
double IsDivergence(const Matrix &V, const Matrix &B, const Matrix &G,
                    double epsilon_floor = 1e-12);

/// B .* [(V ./ (BG).^2) G'] ./ [(1 ./ BG) G']
Matrix UpdateBasis(const Matrix &V, const Matrix &B, const Matrix &G,
                   double epsilon_floor = 1e-12);

/// G .* [B' (V ./ (BG).^2)] ./ [B' (1 ./ BG)]
Matrix UpdateGains(const Matrix &V, const Matrix &B, const Matrix &G,
                   double epsilon_floor = 1e-12);

/// The two halves of the IS gradient w.r.t. G: the "minus" part B'(V/(BG)^2)
/// and the "plus" part B'(1/BG). Both are nonnegative.
struct IsGradientSplit {
  Matrix negative;
  Matrix positive;
};
IsGradientSplit IsGainsGradient(const Matrix &V, const Matrix &B,
                                const Matrix &G, double epsilon_floor = 1e-12);

/// Scales every column of B to unit norm and the matching row of G by the
/// inverse factor so the product BG is unchanged. Zero columns are left as is.
void NormalizeBasisColumns(Matrix *B, Matrix *G);

/// Matrix of uniform draws on (0.1, 1.1), deterministic in the seed.
Matrix PositiveRandomMatrix(Eigen::Index rows, Eigen::Index cols,
                            std::uint64_t seed);

struct FactorizeResult {
  BasisMatrix basis;
  GainsMatrix gains;
  std::vector<double> cost_trace;
  double final_divergence = 0.0;
};

/// Alternating multiplicative IS-NMF for config.max_iters iterations with the
/// basis columns renormalized every iteration.
FactorizeResult Factorize(const Matrix &V, const NmfConfig &config);

struct DecomposeResult {
  GainsMatrix gains;
  std::vector<double> cost_trace;
};

/// Gains-only IS-NMF with a fixed (already normalized) basis. block_ranks is
/// copied into the result.
DecomposeResult DecomposeFixedBasis(const Matrix &Y, const BasisMatrix &basis,
                                    const NmfConfig &config,
                                    std::vector<int> block_ranks = {});

/// Horizontal concatenation [B_1, B_2, ...] and the per-block ranks.
BasisMatrix ConcatenateBases(const std::vector<const BasisMatrix *> &bases,
                             std::vector<int> *block_ranks);

}  // namespace mmsenmf

#endif  // MMSENMF_NMF_H_
