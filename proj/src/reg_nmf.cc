// reg_nmf.cc

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

#include "mmsenmf/reg_nmf.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mmsenmf/mmse.h"

namespace mmsenmf {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

void RequireNonpositiveMeans(const GmmPrior &model) {
  if (!model.HasNonpositiveMeans())
    throw std::invalid_argument("prior means must be nonpositive");
}

void RequireDims(Eigen::Index d, const GmmPrior &model,
                 const UncertaintyDiag &psi) {
  if (model.dim() != d || psi.dim() != d)
    throw std::invalid_argument("dimension mismatch: column has " +
                                std::to_string(d) + " entries, prior has " +
                                std::to_string(model.dim()) + ", psi has " +
                                std::to_string(psi.dim()));
}

// Every per-column quantity the gradient needs, stored d x K (one column per
// mixture component). Shared between the value, the split pieces and the
// O(Kd) gradient assembly so gamma and H are evaluated once.
struct ColumnTerms {
  Eigen::ArrayXd x, z, u;
  double nrm = 0.0, nrm2 = 0.0;
  Eigen::ArrayXXd shrink, h_plus, h_minus;
  Eigen::ArrayXXd m_plus, m_minus;          // d log M_k / dx split
  Eigen::ArrayXXd gamma_plus, gamma_minus;  // d gamma_k / dx split
  Eigen::VectorXd log_m, gamma;
  double log_shift = 0.0;
  Eigen::ArrayXd f, e, shrink_bar;

  ColumnTerms(const Vector &g, const GmmPrior &model,
              const UncertaintyDiag &psi, double gain_floor) {
    const Eigen::Index d = g.size();
    const int K = model.num_components();
    RequireDims(d, model, psi);
    x = FloorGains(g, gain_floor).array();
    nrm2 = x.square().sum();
    nrm = std::sqrt(nrm2);
    u = x / nrm;
    z = u.log().min(0.0);

    shrink.resize(d, K);
    h_plus.resize(d, K);
    h_minus.resize(d, K);
    m_plus.resize(d, K);
    m_minus.resize(d, K);
    log_m.resize(K);
    for (int k = 0; k < K; ++k) {
      const Eigen::ArrayXd mu = model.means.col(k).array();
      const Eigen::ArrayXd s = model.variances.col(k).array() + psi.psi.array();
      const Eigen::ArrayXd w = model.variances.col(k).array() / s;
      shrink.col(k) = w;
      h_plus.col(k) = -w * mu;
      h_minus.col(k) = -(mu + w * z);
      log_m(k) = std::log(model.weights(k)) -
                 0.5 * (d * kLog2Pi + s.log().sum() +
                        ((z - mu).square() / s).sum());
      const double sum_mu = (-mu / s).sum();
      const double sum_z = (-z / s).sum();
      m_plus.col(k) = -z / (s * x) + (x / nrm2) * sum_mu;
      m_minus.col(k) = -mu / (s * x) + (x / nrm2) * sum_z;
    }
    log_shift = log_m.maxCoeff();
    gamma = (log_m.array() - log_shift).exp();
    gamma /= gamma.sum();

    const Eigen::ArrayXd bar_plus = (m_plus.matrix() * gamma).array();
    const Eigen::ArrayXd bar_minus = (m_minus.matrix() * gamma).array();
    gamma_plus.resize(d, K);
    gamma_minus.resize(d, K);
    f = Eigen::ArrayXd::Zero(d);
    shrink_bar = Eigen::ArrayXd::Zero(d);
    for (int k = 0; k < K; ++k) {
      const Eigen::ArrayXd mu = model.means.col(k).array();
      gamma_plus.col(k) = gamma(k) * (m_plus.col(k) + bar_minus);
      gamma_minus.col(k) = gamma(k) * (m_minus.col(k) + bar_plus);
      f += gamma(k) * (mu + shrink.col(k) * (z - mu));
      shrink_bar += gamma(k) * shrink.col(k);
    }
    e = f.exp();
  }

  // (J+)' c and (J-)' c for the split Jacobian of f.
  Eigen::ArrayXd JacobianPlusT(const Eigen::ArrayXd &c) const {
    const Eigen::VectorXd hp = h_plus.matrix().transpose() * c.matrix();
    const Eigen::VectorXd hm = h_minus.matrix().transpose() * c.matrix();
    return c * shrink_bar / x + (gamma_plus.matrix() * hp).array() +
           (gamma_minus.matrix() * hm).array();
  }
  Eigen::ArrayXd JacobianMinusT(const Eigen::ArrayXd &c) const {
    const Eigen::VectorXd hp = h_plus.matrix().transpose() * c.matrix();
    const Eigen::VectorXd hm = h_minus.matrix().transpose() * c.matrix();
    return (x / nrm2) * (c * shrink_bar).sum() +
           (gamma_plus.matrix() * hm).array() +
           (gamma_minus.matrix() * hp).array();
  }

  // sum_a alpha_a P_ab + beta_a Q_ab with
  //   P = U+ + diag(e) J-,  Q = U- + diag(e) J+,
  //   U+ = I/||x||,  U- = x x'/||x||^3  (the split Jacobian of x/||x||).
  Eigen::ArrayXd Combine(const Eigen::ArrayXd &alpha,
                         const Eigen::ArrayXd &beta) const {
    return alpha / nrm + JacobianMinusT(alpha * e) +
           x * ((beta * x).sum() / (nrm2 * nrm)) + JacobianPlusT(beta * e);
  }

  void GradientParts(SplitForm form, Eigen::ArrayXd *plus,
                     Eigen::ArrayXd *minus) const {
    if (form == SplitForm::kExpanded) {
      *plus = 2.0 * Combine(u, e);
      *minus = 2.0 * Combine(e, u);
    } else {
      const Eigen::ArrayXd r = u - e;
      const Eigen::ArrayXd r_pos = r.max(0.0);
      const Eigen::ArrayXd r_neg = (-r).max(0.0);
      *plus = 2.0 * Combine(r_pos, r_neg);
      *minus = 2.0 * Combine(r_neg, r_pos);
    }
  }
};

}  // namespace

HSplit ComputeHSplit(const Vector &x, int k, const GmmPrior &model,
                     const UncertaintyDiag &psi, double gain_floor) {
  RequireDims(x.size(), model, psi);
  if (k < 0 || k >= model.num_components())
    throw std::out_of_range("component index out of range");
  if (!(model.means.col(k).array() <= 0.0).all())
    throw std::invalid_argument("prior means must be nonpositive");
  const Eigen::ArrayXd xs = FloorGains(x, gain_floor).array();
  const double nrm2 = xs.square().sum();
  const Eigen::ArrayXd z = (xs / std::sqrt(nrm2)).log().min(0.0);
  const Eigen::ArrayXd mu = model.means.col(k).array();
  const Eigen::ArrayXd w =
      model.variances.col(k).array() /
      (model.variances.col(k).array() + psi.psi.array());

  HSplit out;
  out.value = mu + w * (z - mu);
  out.plus = -w * mu;
  out.minus = -(mu + w * z);
  out.jacobian_plus = (w / xs).matrix().asDiagonal();
  out.jacobian_minus = w.matrix() * (xs / nrm2).matrix().transpose();
  return out;
}

GammaSplit ComputeGammaSplit(const Vector &x, const GmmPrior &model,
                             const UncertaintyDiag &psi, double gain_floor) {
  const ColumnTerms t(x, model, psi, gain_floor);
  GammaSplit out;
  out.gamma = t.gamma;
  out.log_shift = t.log_shift;
  out.m_scaled = (t.log_m.array() - t.log_shift).exp();
  out.m_grad_plus = (t.m_plus.rowwise() * out.m_scaled.array().transpose())
                        .matrix()
                        .transpose();
  out.m_grad_minus = (t.m_minus.rowwise() * out.m_scaled.array().transpose())
                         .matrix()
                         .transpose();
  out.gamma_grad_plus = t.gamma_plus.matrix().transpose();
  out.gamma_grad_minus = t.gamma_minus.matrix().transpose();
  return out;
}

MmseJacobianSplit ComputeMmseJacobianSplit(const Vector &x,
                                           const GmmPrior &model,
                                           const UncertaintyDiag &psi,
                                           double gain_floor) {
  RequireNonpositiveMeans(model);
  const ColumnTerms t(x, model, psi, gain_floor);
  MmseJacobianSplit out;
  out.f = t.f;
  out.plus = Matrix((t.shrink_bar / t.x).matrix().asDiagonal()) +
             t.h_plus.matrix() * t.gamma_plus.matrix().transpose() +
             t.h_minus.matrix() * t.gamma_minus.matrix().transpose();
  out.minus = t.shrink_bar.matrix() * (t.x / t.nrm2).matrix().transpose() +
              t.h_minus.matrix() * t.gamma_plus.matrix().transpose() +
              t.h_plus.matrix() * t.gamma_minus.matrix().transpose();
  return out;
}

double PenaltyColumn(const Vector &g, const GmmPrior &model,
                     const UncertaintyDiag &psi, double gain_floor) {
  const Vector x = FloorGains(g, gain_floor);
  const Vector u = x / x.norm();
  const Vector q = u.array().log().min(0.0).matrix();
  const Vector target = MmseEstimate(q, model, psi).array().exp().matrix();
  return (u - target).squaredNorm();
}

double PenaltyValue(const Matrix &G_block, const GmmPrior &model,
                    const UncertaintyDiag &psi, double gain_floor) {
  double total = 0.0;
  for (Eigen::Index n = 0; n < G_block.cols(); ++n)
    total += PenaltyColumn(G_block.col(n), model, psi, gain_floor);
  return total;
}

GradientSplit PenaltyGradientSplit(const Matrix &G_block,
                                   const GmmPrior &model,
                                   const UncertaintyDiag &psi, SplitForm form,
                                   double gain_floor) {
  RequireNonpositiveMeans(model);
  GradientSplit out;
  out.positive.resize(G_block.rows(), G_block.cols());
  out.negative.resize(G_block.rows(), G_block.cols());
  Eigen::ArrayXd plus, minus;
  for (Eigen::Index n = 0; n < G_block.cols(); ++n) {
    const ColumnTerms t(G_block.col(n), model, psi, gain_floor);
    t.GradientParts(form, &plus, &minus);
    out.positive.col(n) = plus.matrix();
    out.negative.col(n) = minus.matrix();
  }
  return out;
}

Matrix SparseUpdateGains(const Matrix &Y, const Matrix &B, const Matrix &G,
                         double lambda, double epsilon_floor) {
  if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
  const IsGradientSplit grad = IsGainsGradient(Y, B, G, epsilon_floor);
  return G.cwiseProduct(grad.negative)
      .cwiseQuotient((grad.positive.array() + lambda).matrix().cwiseMax(epsilon_floor));
}

namespace {

std::vector<int> EffectiveBlocks(const GainsMatrix &G, const PriorSpec &prior) {
  G.Validate();
  std::vector<int> blocks = G.block_ranks;
  if (blocks.empty()) blocks.push_back(static_cast<int>(G.values.rows()));
  if (blocks.size() != prior.size())
    throw std::invalid_argument("prior has " + std::to_string(prior.size()) +
                                " entries for " +
                                std::to_string(blocks.size()) + " gain blocks");
  return blocks;
}

}  // namespace

GainsMatrix RegularizedUpdateGains(const Matrix &Y, const Matrix &B,
                                   const GainsMatrix &G,
                                   const PriorSpec &prior,
                                   const RegularizedUpdateOptions &options) {
  const std::vector<int> blocks = EffectiveBlocks(G, prior);
  IsGradientSplit grad = IsGainsGradient(Y, B, G.values, options.epsilon_floor);

  Eigen::Index offset = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Eigen::Index rows = blocks[i];
    if (const auto *sparse = std::get_if<SparsePrior>(&prior[i])) {
      if (sparse->lambda < 0.0)
        throw std::invalid_argument("lambda must be >= 0");
      grad.positive.middleRows(offset, rows).array() += sparse->lambda;
    } else if (const auto *mmse = std::get_if<MmsePrior>(&prior[i])) {
      if (mmse->alpha < 0.0) throw std::invalid_argument("alpha must be >= 0");
      const GradientSplit split = PenaltyGradientSplit(
          G.values.middleRows(offset, rows), mmse->model, mmse->psi,
          options.split_form, options.gain_floor);
      grad.negative.middleRows(offset, rows) += mmse->alpha * split.negative;
      grad.positive.middleRows(offset, rows) += mmse->alpha * split.positive;
    }
    offset += rows;
  }

  GainsMatrix out;
  out.block_ranks = G.block_ranks;
  out.values = G.values.cwiseProduct(grad.negative)
                   .cwiseQuotient(grad.positive.cwiseMax(options.epsilon_floor));
  return out;
}

double RegularizedCost(const Matrix &Y, const Matrix &B, const GainsMatrix &G,
                       const PriorSpec &prior,
                       const RegularizedUpdateOptions &options) {
  const std::vector<int> blocks = EffectiveBlocks(G, prior);
  double cost = IsDivergence(Y, B, G.values, options.epsilon_floor);
  Eigen::Index offset = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Eigen::Index rows = blocks[i];
    if (const auto *sparse = std::get_if<SparsePrior>(&prior[i])) {
      cost += sparse->lambda * G.values.middleRows(offset, rows).sum();
    } else if (const auto *mmse = std::get_if<MmsePrior>(&prior[i])) {
      cost += mmse->alpha * PenaltyValue(G.values.middleRows(offset, rows),
                                         mmse->model, mmse->psi,
                                         options.gain_floor);
    }
    offset += rows;
  }
  return cost;
}

}  // namespace mmsenmf
