// spectral.cc

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

#include "mmsenmf/spectral.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/FFT>

namespace mmsenmf {

void FrameParams::Validate() const {
  if (frame_length <= 0 || fft_size <= 0 || hop < 1)
    throw std::invalid_argument("frame params must be positive");
  if (frame_length > fft_size)
    throw std::invalid_argument("frame_length (" + std::to_string(frame_length) +
                                ") exceeds fft_size (" +
                                std::to_string(fft_size) + ")");
  if (fft_size % 2 != 0)
    throw std::invalid_argument("fft_size must be even");
  if (hop >= frame_length)
    throw std::invalid_argument("hop must be smaller than frame_length");
  if (sample_rate_hz <= 0)
    throw std::invalid_argument("sample rate must be positive");
}

void AudioSignal::Validate() const {
  if (sample_rate_hz <= 0)
    throw std::invalid_argument("sample rate must be positive");
  for (double s : samples)
    if (!std::isfinite(s))
      throw std::invalid_argument("audio contains non-finite samples");
}

std::vector<double> HammingWindow(int length) {
  std::vector<double> w(length, 1.0);
  if (length == 1) return w;
  const double denom = static_cast<double>(length - 1);
  for (int n = 0; n < length; ++n)
    w[n] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / denom);
  return w;
}

int NumFrames(std::size_t length, const FrameParams &framing) {
  const auto frame = static_cast<std::size_t>(framing.frame_length);
  const auto hop = static_cast<std::size_t>(framing.hop);
  if (length <= frame) return 1;
  return static_cast<int>((length - frame + hop - 1) / hop) + 1;
}

ComplexSpectrogram Stft(const AudioSignal &signal, const FrameParams &framing) {
  framing.Validate();
  if (signal.samples.empty()) throw std::invalid_argument("empty input");

  const int num_frames = NumFrames(signal.size(), framing);
  const int num_bins = framing.num_bins();
  const std::vector<double> window = HammingWindow(framing.frame_length);

  ComplexSpectrogram out;
  out.framing = framing;
  out.framing.sample_rate_hz = signal.sample_rate_hz;
  out.signal_length = signal.size();
  out.values.resize(num_bins, num_frames);

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<double> frame(framing.fft_size);
  std::vector<std::complex<double>> bins;
  for (int t = 0; t < num_frames; ++t) {
    std::fill(frame.begin(), frame.end(), 0.0);
    const std::size_t start = static_cast<std::size_t>(t) * framing.hop;
    for (int n = 0; n < framing.frame_length; ++n) {
      const std::size_t i = start + n;
      if (i < signal.size()) frame[n] = window[n] * signal.samples[i];
    }
    fft.fwd(bins, frame);
    for (int f = 0; f < num_bins; ++f) out.values(f, t) = bins[f];
  }
  return out;
}

AudioSignal Istft(const ComplexSpectrogram &spec) {
  const FrameParams &framing = spec.framing;
  framing.Validate();
  const int num_bins = framing.num_bins();
  if (spec.values.rows() != num_bins)
    throw std::invalid_argument("spectrogram has " +
                                std::to_string(spec.values.rows()) +
                                " rows, framing implies " +
                                std::to_string(num_bins));
  const int num_frames = static_cast<int>(spec.values.cols());
  const std::size_t padded =
      num_frames == 0 ? 0
                      : static_cast<std::size_t>(num_frames - 1) * framing.hop +
                            framing.frame_length;
  const std::vector<double> window = HammingWindow(framing.frame_length);

  std::vector<double> acc(padded, 0.0), norm(padded, 0.0);
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<std::complex<double>> bins(num_bins);
  std::vector<double> frame;
  for (int t = 0; t < num_frames; ++t) {
    for (int f = 0; f < num_bins; ++f) bins[f] = spec.values(f, t);
    // The DC and Nyquist bins of a real frame are real.
    bins[0] = bins[0].real();
    bins[num_bins - 1] = bins[num_bins - 1].real();
    fft.inv(frame, bins, framing.fft_size);
    const std::size_t start = static_cast<std::size_t>(t) * framing.hop;
    for (int n = 0; n < framing.frame_length; ++n) {
      acc[start + n] += window[n] * frame[n];
      norm[start + n] += window[n] * window[n];
    }
  }

  const std::size_t length =
      spec.signal_length == 0 ? padded : std::min(padded, spec.signal_length);
  AudioSignal out;
  out.sample_rate_hz = framing.sample_rate_hz;
  out.samples.resize(length);
  for (std::size_t i = 0; i < length; ++i) {
    if (norm[i] < 1e-12)
      throw std::runtime_error("window/hop not invertible");
    out.samples[i] = acc[i] / norm[i];
  }
  return out;
}

PowerSpectrogram ToPowerSpectrogram(const ComplexSpectrogram &spec) {
  PowerSpectrogram out;
  out.framing = spec.framing;
  out.values = spec.values.cwiseAbs2();
  return out;
}

}  // namespace mmsenmf
