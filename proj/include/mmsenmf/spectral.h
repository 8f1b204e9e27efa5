// mmsenmf/spectral.h

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

#ifndef MMSENMF_SPECTRAL_H_
#define MMSENMF_SPECTRAL_H_

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace mmsenmf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Framing of the short-time analysis. Defaults are a 480-point Hamming
/// window at 60% overlap with a 512-point FFT, i.e. 257 frequency bins.
struct FrameParams {
  int frame_length = 480;
  int hop = 192;
  int fft_size = 512;
  int sample_rate_hz = 16000;

  int num_bins() const { return fft_size / 2 + 1; }
  /// Throws std::invalid_argument on inconsistent values.
  void Validate() const;
  bool operator==(const FrameParams &) const = default;
};

/// Mono real-valued signal.
struct AudioSignal {
  std::vector<double> samples;
  int sample_rate_hz = 16000;

  std::size_t size() const { return samples.size(); }
  /// Throws if the rate is not positive or a sample is not finite.
  void Validate() const;
};

/// One-sided STFT, F = fft_size/2 + 1 rows by T frames.
struct ComplexSpectrogram {
  Eigen::MatrixXcd values;
  FrameParams framing;
  /// Length of the analysed signal before tail padding.
  std::size_t signal_length = 0;
};

/// Squared-magnitude spectrogram, F x T, entries >= 0.
struct PowerSpectrogram {
  Matrix values;
  FrameParams framing;
};

/// Symmetric Hamming window of the given length.
std::vector<double> HammingWindow(int length);

/// Number of frames for a signal of `length` samples; the last partial frame
/// is zero-padded, so T = ceil((length - frame_length) / hop) + 1.
int NumFrames(std::size_t length, const FrameParams &framing);

/// Column t is the one-sided FFT of the Hamming-windowed frame starting at
/// t * hop. Throws std::invalid_argument("empty input") on an empty signal.
ComplexSpectrogram Stft(const AudioSignal &signal, const FrameParams &framing);

/// Weighted overlap-add inverse. Each sample is normalized by the accumulated
/// squared analysis window, which makes Istft(Stft(x)) exact away from the
/// edges. The output is truncated to spec.signal_length.
AudioSignal Istft(const ComplexSpectrogram &spec);

PowerSpectrogram ToPowerSpectrogram(const ComplexSpectrogram &spec);

}  // namespace mmsenmf

#endif  // MMSENMF_SPECTRAL_H_
