// separation.cc

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

#include "mmsenmf/separation.h"

#include <cmath>
#include <stdexcept>

namespace mmsenmf {

namespace {

double MeanSquare(const std::vector<double> &x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc / static_cast<double>(x.size());
}

void CheckCompatible(const FrameParams &framing, const SourceModel &a,
                     const SourceModel &b) {
  a.Validate();
  b.Validate();
  if (a.gain_floor != b.gain_floor)
    throw std::invalid_argument("source models use different gain floors");
  if (!(a.framing == framing) || !(b.framing == framing))
    throw std::invalid_argument(
        "mixture framing or sample rate does not match the source models");
  if (a.basis.values.rows() != framing.num_bins() ||
      b.basis.values.rows() != framing.num_bins())
    throw std::invalid_argument("model basis rows do not match FFT bins");
}

PriorSpec MmseSpec(const SourceModel &a, const SourceModel &b,
                   const UncertaintyDiag &psi_a, const UncertaintyDiag &psi_b,
                   const SeparationConfig &config) {
  return {MmsePrior{a.prior, psi_a, config.alpha_a},
          MmsePrior{b.prior, psi_b, config.alpha_b}};
}

void LearnPsiPair(const GainsMatrix &G, const SourceModel &a,
                  const SourceModel &b, const PsiEmConfig &em,
                  const UncertaintyDiag *prev_a, const UncertaintyDiag *prev_b,
                  UncertaintyStage *out) {
  const int ra = G.block_ranks[0];
  const int rb = G.block_ranks[1];
  const LogNormalizedColumns qa =
      LogNormalizeColumns(G.values.topRows(ra), a.gain_floor);
  const LogNormalizedColumns qb =
      LogNormalizeColumns(G.values.bottomRows(rb), b.gain_floor);
  out->em_a = LearnPsiEm(qa, a.prior, em,
                         prev_a ? *prev_a : DefaultPsiInit(qa, a.prior));
  out->em_b = LearnPsiEm(qb, b.prior, em,
                         prev_b ? *prev_b : DefaultPsiInit(qb, b.prior));
  out->psi_a = out->em_a.psi;
  out->psi_b = out->em_b.psi;
}

}  // namespace

void SourceModel::Validate() const {
  prior.Validate();
  if (prior.dim() != basis.rank())
    throw std::invalid_argument("prior dimension " +
                                std::to_string(prior.dim()) +
                                " does not match basis rank " +
                                std::to_string(basis.rank()));
  if (!prior.HasNonpositiveMeans())
    throw std::invalid_argument("prior means must be nonpositive");
  for (Eigen::Index r = 0; r < basis.values.cols(); ++r)
    if (std::abs(basis.values.col(r).norm() - 1.0) > 1e-9)
      throw std::invalid_argument("basis column " + std::to_string(r) +
                                  " is not unit norm");
}

SourceModel TrainSourceModel(const std::vector<AudioSignal> &training_audio,
                             const TrainConfig &config) {
  config.framing.Validate();
  if (training_audio.empty())
    throw std::invalid_argument("no training audio");
  std::vector<Matrix> parts;
  Eigen::Index frames = 0;
  for (const AudioSignal &clip : training_audio) {
    if (clip.sample_rate_hz != config.framing.sample_rate_hz)
      throw std::invalid_argument("training clip sample rate " +
                                  std::to_string(clip.sample_rate_hz) +
                                  " does not match " +
                                  std::to_string(config.framing.sample_rate_hz));
    if (clip.samples.empty()) continue;
    parts.push_back(ToPowerSpectrogram(Stft(clip, config.framing)).values);
    frames += parts.back().cols();
  }
  if (frames < config.gmm_components)
    throw std::invalid_argument(
        "too little training audio: " + std::to_string(frames) +
        " frames for " + std::to_string(config.gmm_components) +
        " mixture components");
  Matrix V(config.framing.num_bins(), frames);
  Eigen::Index offset = 0;
  for (const Matrix &p : parts) {
    V.middleCols(offset, p.cols()) = p;
    offset += p.cols();
  }

  NmfConfig nmf;
  nmf.rank = config.rank;
  nmf.max_iters = config.nmf_iters;
  nmf.epsilon_floor = config.epsilon_floor;
  nmf.rng_seed = config.seed;
  FactorizeResult fac = Factorize(V, nmf);

  GmmFitConfig gmm;
  gmm.num_components = config.gmm_components;
  gmm.max_iters = config.gmm_iters;
  gmm.rng_seed = config.seed;
  GmmFitResult fit =
      FitGmmEm(LogNormalizeColumns(fac.gains.values, kGainFloor), gmm);

  SourceModel model;
  model.basis = std::move(fac.basis);
  model.prior = std::move(fit.model);
  model.framing = config.framing;
  model.nmf_iters = config.nmf_iters;
  model.gmm_iters = config.gmm_iters;
  model.seed = config.seed;
  model.epsilon_floor = config.epsilon_floor;
  model.final_divergence = fac.final_divergence;
  return model;
}

PriorMode ParsePriorMode(const std::string &name) {
  if (name == "none") return PriorMode::kNone;
  if (name == "sparse") return PriorMode::kSparse;
  if (name == "mmse") return PriorMode::kMmse;
  throw std::invalid_argument("unknown prior mode '" + name +
                              "' (expected none|sparse|mmse)");
}

std::string PriorModeName(PriorMode mode) {
  switch (mode) {
    case PriorMode::kNone: return "none";
    case PriorMode::kSparse: return "sparse";
    case PriorMode::kMmse: return "mmse";
  }
  return "unknown";
}

UncertaintyStage LearnUncertaintiesStage(const Matrix &Y,
                                         const SourceModel &model_a,
                                         const SourceModel &model_b,
                                         const SeparationConfig &config) {
  std::vector<int> blocks;
  const BasisMatrix B = ConcatenateBases({&model_a.basis, &model_b.basis}, &blocks);
  NmfConfig nmf;
  nmf.rank = B.rank();
  nmf.max_iters = config.noprior_iters;
  nmf.epsilon_floor = config.epsilon_floor;
  nmf.rng_seed = config.seed;
  UncertaintyStage stage;
  stage.gains = DecomposeFixedBasis(Y, B, nmf, blocks).gains;
  LearnPsiPair(stage.gains, model_a, model_b, config.psi_em, nullptr, nullptr,
               &stage);
  return stage;
}

void BuildMasks(const Matrix &S_a, const Matrix &S_b, double floor,
                Matrix *mask_a, Matrix *mask_b) {
  if (S_a.rows() != S_b.rows() || S_a.cols() != S_b.cols())
    throw std::invalid_argument("source estimates differ in shape");
  mask_a->resize(S_a.rows(), S_a.cols());
  mask_b->resize(S_a.rows(), S_a.cols());
  for (Eigen::Index j = 0; j < S_a.cols(); ++j)
    for (Eigen::Index i = 0; i < S_a.rows(); ++i) {
      const double den = S_a(i, j) + S_b(i, j);
      if (den > floor) {
        (*mask_a)(i, j) = S_a(i, j) / den;
        (*mask_b)(i, j) = S_b(i, j) / den;
      } else {
        (*mask_a)(i, j) = 0.5;
        (*mask_b)(i, j) = 0.5;
      }
    }
}

SeparationResult SeparateSpectrogram(const ComplexSpectrogram &mixture,
                                     const SourceModel &model_a,
                                     const SourceModel &model_b,
                                     const SeparationConfig &config) {
  CheckCompatible(mixture.framing, model_a, model_b);
  if (config.noprior_iters < 0 || config.regularized_iters < 0 ||
      config.noprior_iters + config.regularized_iters <= 0)
    throw std::invalid_argument("iteration budget must be positive");
  const Matrix Y = mixture.values.cwiseAbs2();

  std::vector<int> blocks;
  const BasisMatrix basis =
      ConcatenateBases({&model_a.basis, &model_b.basis}, &blocks);
  const Matrix &B = basis.values;
  const double eps = config.epsilon_floor;

  SeparationResult result;
  GainsMatrix G;
  G.block_ranks = blocks;
  auto record = [&](const PriorSpec &spec, const RegularizedUpdateOptions &o) {
    if (config.track_cost)
      result.cost_trace.push_back(RegularizedCost(Y, B, G, spec, o));
  };
  RegularizedUpdateOptions options;
  options.epsilon_floor = eps;
  options.gain_floor = model_a.gain_floor;
  options.split_form = config.split_form;

  const int total = config.noprior_iters + config.regularized_iters;
  if (config.mode == PriorMode::kMmse) {
    if (config.noprior_iters <= 0)
      throw std::invalid_argument("mmse mode needs a no-prior pass");
    UncertaintyStage stage =
        LearnUncertaintiesStage(Y, model_a, model_b, config);
    G = stage.gains;
    result.noprior_iterations = config.noprior_iters;
    UncertaintyDiag psi_a = stage.psi_a, psi_b = stage.psi_b;
    PriorSpec spec = MmseSpec(model_a, model_b, psi_a, psi_b, config);
    for (int it = 0; it < config.regularized_iters; ++it) {
      if (config.relearn_psi_every > 0 && it > 0 &&
          it % config.relearn_psi_every == 0) {
        LearnPsiPair(G, model_a, model_b, config.psi_em, &psi_a, &psi_b,
                     &stage);
        psi_a = stage.psi_a;
        psi_b = stage.psi_b;
        spec = MmseSpec(model_a, model_b, psi_a, psi_b, config);
      }
      G = RegularizedUpdateGains(Y, B, G, spec, options);
      record(spec, options);
    }
    result.regularized_iterations = config.regularized_iters;
    result.psi_a = psi_a;
    result.psi_b = psi_b;
  } else {
    G.values = PositiveRandomMatrix(B.cols(), Y.cols(), config.seed);
    const double lambda = config.mode == PriorMode::kSparse ? config.lambda : 0.0;
    const PriorSpec spec =
        config.mode == PriorMode::kSparse
            ? PriorSpec{SparsePrior{lambda}, SparsePrior{lambda}}
            : PriorSpec{NoPrior{}, NoPrior{}};
    for (int it = 0; it < total; ++it) {
      if (config.mode == PriorMode::kSparse)
        G.values = SparseUpdateGains(Y, B, G.values, lambda, eps);
      else
        G.values = UpdateGains(Y, B, G.values, eps);
      record(spec, options);
    }
    result.noprior_iterations = total;
    result.psi_a = UncertaintyDiag::Zero(blocks[0]);
    result.psi_b = UncertaintyDiag::Zero(blocks[1]);
  }

  const Matrix S_a = model_a.basis.values * G.values.topRows(blocks[0]);
  const Matrix S_b = model_b.basis.values * G.values.bottomRows(blocks[1]);
  BuildMasks(S_a, S_b, config.mask_floor, &result.mask_a, &result.mask_b);

  result.spec_a = mixture;
  result.spec_b = mixture;
  result.spec_a.values = mixture.values.cwiseProduct(result.mask_a.cast<std::complex<double>>());
  result.spec_b.values = mixture.values.cwiseProduct(result.mask_b.cast<std::complex<double>>());
  result.gains = std::move(G);
  return result;
}

SeparationResult Separate(const AudioSignal &mixture,
                          const SourceModel &model_a,
                          const SourceModel &model_b,
                          const SeparationConfig &config) {
  mixture.Validate();
  if (mixture.sample_rate_hz != model_a.framing.sample_rate_hz ||
      mixture.sample_rate_hz != model_b.framing.sample_rate_hz)
    throw std::invalid_argument(
        "mixture sample rate " + std::to_string(mixture.sample_rate_hz) +
        " Hz does not match the models");
  const ComplexSpectrogram Y = Stft(mixture, model_a.framing);
  SeparationResult result = SeparateSpectrogram(Y, model_a, model_b, config);
  result.estimate_a = Istft(result.spec_a);
  result.estimate_b = Istft(result.spec_b);
  return result;
}

AudioSignal LoopToLength(const AudioSignal &b, std::size_t length) {
  if (b.samples.empty()) throw std::invalid_argument("cannot loop an empty signal");
  AudioSignal out;
  out.sample_rate_hz = b.sample_rate_hz;
  out.samples.resize(length);
  for (std::size_t i = 0; i < length; ++i)
    out.samples[i] = b.samples[i % b.samples.size()];
  return out;
}

double SmrScale(const AudioSignal &a, const AudioSignal &b, double smr_db) {
  if (a.sample_rate_hz != b.sample_rate_hz)
    throw std::invalid_argument("sample rates differ");
  if (b.samples.empty()) throw std::invalid_argument("cannot scale silence");
  const double pa = MeanSquare(a.samples);
  const double pb = MeanSquare(LoopToLength(b, a.size()).samples);
  if (!(pb > 0.0)) throw std::invalid_argument("cannot scale silence");
  return std::sqrt(pa / (pb * std::pow(10.0, smr_db / 10.0)));
}

AudioSignal MixAtSmr(const AudioSignal &a, const AudioSignal &b,
                     double smr_db) {
  const double c = SmrScale(a, b, smr_db);
  const AudioSignal looped = LoopToLength(b, a.size());
  AudioSignal out = a;
  for (std::size_t i = 0; i < out.size(); ++i)
    out.samples[i] += c * looped.samples[i];
  return out;
}

}  // namespace mmsenmf
