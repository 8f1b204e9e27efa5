// mmsenmf/reg_nmf.h

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

#ifndef MMSENMF_REG_NMF_H_
#define MMSENMF_REG_NMF_H_

#include <variant>
#include <vector>

#include "mmsenmf/gmm.h"
#include "mmsenmf/nmf.h"

namespace mmsenmf {

// Per-source-block prior on the gains.
struct NoPrior {};
struct SparsePrior {
  double lambda = 1e-4;
};
// Penalty alpha * sum_n || g_n/||g_n|| - exp(f(log g_n/||g_n||)) ||^2 where f
// is the MMSE estimate under `model` with deformation covariance `psi`.
struct MmsePrior {
  GmmPrior model;
  UncertaintyDiag psi;
  double alpha = 1.0;
};
using BlockPrior = std::variant<NoPrior, SparsePrior, MmsePrior>;
// One entry per block of GainsMatrix::block_ranks (a single entry when the
// gains have no blocks).
using PriorSpec = std::vector<BlockPrior>;

// A gradient written as positive - negative with both parts >= 0.
struct GradientSplit {
  Matrix positive;
  Matrix negative;
};

// How the penalty gradient is divided into nonnegative parts.
//  kExpanded: 2{u P + e Q} and 2{u Q + e P}, u = x/||x||, e = exp(f), which
//    carries the common term 2 min(u, e)(P + Q) in both parts.
//  kResidual: the same split with that common term removed, so both parts
//    scale with |u - e| and vanish where the penalty residual does.
enum class SplitForm { kExpanded, kResidual };

struct RegularizedUpdateOptions {
  double epsilon_floor = 1e-12;
  double gain_floor = kGainFloor;
  SplitForm split_form = SplitForm::kResidual;
};

// --- Column-level pieces of the penalty gradient -------------------------
// Throughout, x is one gains column (floored to gain_floor), z = log(x/||x||),
// w_k = Sigma_k / (Sigma_k + Psi) and S_k = Sigma_k + Psi, all diagonal.

// Split of H_k(x) = mu_k + w_k (z - mu_k) for a single component k.
// jacobian_plus(a, b) and jacobian_minus(a, b) split dH_a/dx_b:
//   plus  = w_a delta_ab / x_a,   minus = w_a x_b / ||x||^2.
// Throws std::invalid_argument if mu_k has a positive entry.
struct HSplit {
  Vector value;
  Vector plus;   // -w mu
  Vector minus;  // -(mu + w z)
  Matrix jacobian_plus;
  Matrix jacobian_minus;
};
HSplit ComputeHSplit(const Vector &x, int k, const GmmPrior &model,
                     const UncertaintyDiag &psi,
                     double gain_floor = kGainFloor);

// gamma_k(x) = M_k / N with M_k = pi_k N(z | mu_k, S_k), N = sum_j M_j.
// M is reported relative to exp(log_shift) (the largest log M_k), so ratios
// are exact even when every M_k underflows. Rows index components, columns
// index the coordinate x_b being differentiated.
struct GammaSplit {
  Vector gamma;
  double log_shift = 0.0;
  Vector m_scaled;
  Matrix m_grad_plus;   // scaled like m_scaled
  Matrix m_grad_minus;
  Matrix gamma_grad_plus;
  Matrix gamma_grad_minus;
};
GammaSplit ComputeGammaSplit(const Vector &x, const GmmPrior &model,
                             const UncertaintyDiag &psi,
                             double gain_floor = kGainFloor);

// f(x) and the split of its Jacobian, df_a/dx_b = plus(a, b) - minus(a, b).
struct MmseJacobianSplit {
  Vector f;
  Matrix plus;
  Matrix minus;
};
MmseJacobianSplit ComputeMmseJacobianSplit(const Vector &x,
                                           const GmmPrior &model,
                                           const UncertaintyDiag &psi,
                                           double gain_floor = kGainFloor);

// Penalty of one column: || x/||x|| - exp(f(log x/||x||)) ||^2.
double PenaltyColumn(const Vector &g, const GmmPrior &model,
                     const UncertaintyDiag &psi,
                     double gain_floor = kGainFloor);

// Penalty summed over the columns of a gains block (no alpha).
double PenaltyValue(const Matrix &G_block, const GmmPrior &model,
                    const UncertaintyDiag &psi,
                    double gain_floor = kGainFloor);

// Positive/negative parts of dL/dG for one block, O(K d) per column.
GradientSplit PenaltyGradientSplit(const Matrix &G_block,
                                   const GmmPrior &model,
                                   const UncertaintyDiag &psi,
                                   SplitForm form = SplitForm::kResidual,
                                   double gain_floor = kGainFloor);

// --- Gains updates -------------------------------------------------------

// G .* [B'(Y/(BG)^2)] ./ [B'(1/BG) + lambda]
Matrix SparseUpdateGains(const Matrix &Y, const Matrix &B, const Matrix &G,
                         double lambda, double epsilon_floor = 1e-12);

// G .* [grad-_IS + grad-_R] ./ [grad+_IS + grad+_R] with the prior terms
// stacked per block. With every block NoPrior this is bit-identical to
// UpdateGains. Throws std::invalid_argument on block/shape mismatch.
GainsMatrix RegularizedUpdateGains(const Matrix &Y, const Matrix &B,
                                   const GainsMatrix &G,
                                   const PriorSpec &prior,
                                   const RegularizedUpdateOptions &options = {});

// D_IS(Y || BG) + sum over blocks of alpha L_i or lambda sum(G_i).
double RegularizedCost(const Matrix &Y, const Matrix &B, const GainsMatrix &G,
                       const PriorSpec &prior,
                       const RegularizedUpdateOptions &options = {});

}  // namespace mmsenmf

#endif  // MMSENMF_REG_NMF_H_
