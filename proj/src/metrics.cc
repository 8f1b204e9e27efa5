// metrics.cc

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

#include "mmsenmf/metrics.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mmsenmf {

namespace {

double RatioDb(double num, double den) {
  if (den <= 0.0) return num > 0.0 ? kMetricCapDb : 0.0;
  if (num <= 0.0) return -kMetricCapDb;
  return std::clamp(10.0 * std::log10(num / den), -kMetricCapDb, kMetricCapDb);
}

Eigen::Map<const Vector> Prefix(const AudioSignal &s, std::size_t n) {
  return {s.samples.data(), static_cast<Eigen::Index>(n)};
}

}  // namespace

double SnrDb(const AudioSignal &reference, const AudioSignal &estimate) {
  const std::size_t n = std::min(reference.size(), estimate.size());
  const auto ref = Prefix(reference, n);
  const auto est = Prefix(estimate, n);
  const double signal = ref.squaredNorm();
  if (!(signal > 0.0)) throw std::invalid_argument("silent reference signal");
  return RatioDb(signal, (ref - est).squaredNorm());
}

double SirDb(const AudioSignal &estimate, const AudioSignal &target,
             const AudioSignal &interferer) {
  const std::size_t n =
      std::min({estimate.size(), target.size(), interferer.size()});
  const auto est = Prefix(estimate, n);
  const auto s = Prefix(target, n);
  const auto i = Prefix(interferer, n);
  const double ss = s.squaredNorm();
  const double ii = i.squaredNorm();
  if (!(ss > 0.0) || !(ii > 0.0))
    throw std::invalid_argument("silent reference signal");
  const Vector i_orth = i - (i.dot(s) / ss) * s;
  const double oo = i_orth.squaredNorm();
  if (oo <= 1e-12 * ii)
    throw std::invalid_argument("target and interferer are collinear");
  const Vector s_target = (est.dot(s) / ss) * s;
  const Vector residual = est - s_target;
  const Vector e_interf = (residual.dot(i_orth) / oo) * i_orth;
  return RatioDb(s_target.squaredNorm(), e_interf.squaredNorm());
}

EvalReport Evaluate(const AudioSignal &estimate, const AudioSignal &target,
                    const AudioSignal &interferer) {
  EvalReport report;
  report.estimate_length = estimate.size();
  report.reference_length = target.size();
  report.compared_length =
      std::min({estimate.size(), target.size(), interferer.size()});
  report.snr_db = SnrDb(target, estimate);
  report.sir_db = SirDb(estimate, target, interferer);
  return report;
}

}  // namespace mmsenmf
