// mmsenmf/model_io.h

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

#ifndef MMSENMF_MODEL_IO_H_
#define MMSENMF_MODEL_IO_H_

#include <string>

#include "json.hpp"
#include "mmsenmf/separation.h"

namespace mmsenmf {

// Versioned JSON document:
//   {version, rank, frame_params: {frame_length, hop, fft_size, sample_rate_hz},
//    basis: F x R row-major, gmm: {k, weights, means[K][d], variances[K][d]},
//    floors: {epsilon, gain, covariance}, seed, training: {...}}
// Keys serialize in sorted order, so equal models give identical bytes.
nlohmann::json SourceModelToJson(const SourceModel &model);
SourceModel SourceModelFromJson(const nlohmann::json &doc);

void SaveSourceModel(const std::string &path, const SourceModel &model);
SourceModel LoadSourceModel(const std::string &path);

}  // namespace mmsenmf

#endif  // MMSENMF_MODEL_IO_H_
