// mmsenmf/separation.h

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

#ifndef MMSENMF_SEPARATION_H_
#define MMSENMF_SEPARATION_H_

#include <cstdint>
#include <string>
#include <vector>

#include "mmsenmf/gmm.h"
#include "mmsenmf/nmf.h"
#include "mmsenmf/reg_nmf.h"
#include "mmsenmf/spectral.h"
#include "mmsenmf/uncertainty.h"

namespace mmsenmf {

inline constexpr int kModelVersion = 1;

// Trained representation of one source: an IS-NMF basis plus the GMM prior
// over its log-normalized training gains.
struct SourceModel {
  BasisMatrix basis;
  GmmPrior prior;
  FrameParams framing;
  // Training metadata.
  int version = kModelVersion;
  int nmf_iters = 0;
  int gmm_iters = 0;
  std::uint64_t seed = 0;
  double epsilon_floor = 1e-12;
  double gain_floor = kGainFloor;
  double covariance_floor = kCovarianceFloor;
  double final_divergence = 0.0;

  int rank() const { return basis.rank(); }
  // prior.dim() == rank, unit-norm basis columns, valid prior.
  void Validate() const;
};

struct TrainConfig {
  FrameParams framing;
  int rank = 128;
  int nmf_iters = 200;
  int gmm_components = 16;
  int gmm_iters = 100;
  std::uint64_t seed = 0;
  double epsilon_floor = 1e-12;
};

// Concatenates the power spectrograms of the training clips, factorizes them
// with plain IS-NMF and fits the gains prior. Throws when the clips are empty
// or yield fewer frames than mixture components.
SourceModel TrainSourceModel(const std::vector<AudioSignal> &training_audio,
                             const TrainConfig &config);

enum class PriorMode { kNone, kSparse, kMmse };
PriorMode ParsePriorMode(const std::string &name);
std::string PriorModeName(PriorMode mode);

struct SeparationConfig {
  PriorMode mode = PriorMode::kMmse;
  // No-prior gains iterations; in kNone and kSparse mode the two budgets are
  // spent back to back with the same update.
  int noprior_iters = 200;
  int regularized_iters = 200;
  double alpha_a = 1.0;
  double alpha_b = 1.0;
  double lambda = 1e-4;
  std::uint64_t seed = 0;
  PsiEmConfig psi_em;
  // When > 0, Psi is re-learned from the current gains every this many
  // regularized iterations. 0 keeps the Psi learned from the no-prior pass.
  int relearn_psi_every = 0;
  SplitForm split_form = SplitForm::kResidual;
  double epsilon_floor = 1e-12;
  double mask_floor = 1e-12;
  bool track_cost = false;
};

struct UncertaintyStage {
  GainsMatrix gains;  // no-prior solution, blocks {R_a, R_b}
  UncertaintyDiag psi_a;
  UncertaintyDiag psi_b;
  PsiEmResult em_a;
  PsiEmResult em_b;
};

// Fixed-basis no-prior decomposition on [B_a, B_b] followed by Psi EM on each
// gains block against that source's own prior.
UncertaintyStage LearnUncertaintiesStage(const Matrix &Y,
                                         const SourceModel &model_a,
                                         const SourceModel &model_b,
                                         const SeparationConfig &config);

struct SeparationResult {
  AudioSignal estimate_a;
  AudioSignal estimate_b;
  ComplexSpectrogram spec_a;
  ComplexSpectrogram spec_b;
  Matrix mask_a;
  Matrix mask_b;
  GainsMatrix gains;
  UncertaintyDiag psi_a;
  UncertaintyDiag psi_b;
  // Objective after every gains iteration (when config.track_cost).
  std::vector<double> cost_trace;
  int noprior_iterations = 0;
  int regularized_iterations = 0;
};

// Wiener-style masks H_i = S_i / (S_a + S_b) with S_i = B_i G_i. Where the
// denominator is below floor both masks are 0.5.
void BuildMasks(const Matrix &S_a, const Matrix &S_b, double floor,
                Matrix *mask_a, Matrix *mask_b);

// Separation in the STFT domain; the returned signals are empty.
SeparationResult SeparateSpectrogram(const ComplexSpectrogram &mixture,
                                     const SourceModel &model_a,
                                     const SourceModel &model_b,
                                     const SeparationConfig &config);

// Full pipeline: STFT, gains estimation, masking and inverse STFT. Throws on
// sample-rate, framing or dimension mismatch between mixture and models.
SeparationResult Separate(const AudioSignal &mixture,
                          const SourceModel &model_a,
                          const SourceModel &model_b,
                          const SeparationConfig &config);

// Repeats b (or truncates it) to `length` samples.
AudioSignal LoopToLength(const AudioSignal &b, std::size_t length);

// Factor c such that 10 log10(P_a / P_{c b}) = smr_db with P the mean square.
// b is looped/truncated to a's length first. Throws on silent b.
double SmrScale(const AudioSignal &a, const AudioSignal &b, double smr_db);

// a + c b with c = SmrScale(a, b, smr_db).
AudioSignal MixAtSmr(const AudioSignal &a, const AudioSignal &b,
                     double smr_db);

}  // namespace mmsenmf

#endif  // MMSENMF_SEPARATION_H_
