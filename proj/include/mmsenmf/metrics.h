// mmsenmf/metrics.h

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

#ifndef MMSENMF_METRICS_H_
#define MMSENMF_METRICS_H_

#include <cstddef>

#include "mmsenmf/spectral.h"

namespace mmsenmf {

// Ratios that would be infinite are reported as +/- this value.
inline constexpr double kMetricCapDb = 300.0;

struct EvalReport {
  double snr_db = 0.0;
  double sir_db = 0.0;
  std::size_t estimate_length = 0;
  std::size_t reference_length = 0;
  // Samples compared after truncating to the shorter signal.
  std::size_t compared_length = 0;
  // Estimates are assumed time-aligned with the references.
  std::ptrdiff_t alignment_offset = 0;
};

// 10 log10(sum s^2 / sum (s - s_hat)^2) over the common prefix.
// Throws std::invalid_argument if the reference is silent.
double SnrDb(const AudioSignal &reference, const AudioSignal &estimate);

// Scalar least-squares BSS-eval style SIR: the estimate is projected onto the
// target reference, and the residual onto the interferer reference after it
// has been orthogonalized against the target. Throws std::invalid_argument
// when the references are collinear or silent.
double SirDb(const AudioSignal &estimate, const AudioSignal &target,
             const AudioSignal &interferer);

EvalReport Evaluate(const AudioSignal &estimate, const AudioSignal &target,
                    const AudioSignal &interferer);

}  // namespace mmsenmf

#endif  // MMSENMF_METRICS_H_
