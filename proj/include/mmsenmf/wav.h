// mmsenmf/wav.h

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

#ifndef MMSENMF_WAV_H_
#define MMSENMF_WAV_H_

#include <string>

#include "mmsenmf/spectral.h"

namespace mmsenmf {

// 16-bit signed PCM, little-endian, mono. Samples are scaled to [-1, 1).
// Rejects other encodings, channel counts, and rates other than
// expected_rate_hz (no resampling is done).
AudioSignal ReadWav(const std::string &path, int expected_rate_hz = 16000);

// Clips to [-1, 1) and rounds to the nearest 16-bit code.
void WriteWav(const std::string &path, const AudioSignal &signal);

}  // namespace mmsenmf

#endif  // MMSENMF_WAV_H_
