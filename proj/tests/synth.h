// tests/synth.h

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

#ifndef MMSENMF_TESTS_SYNTH_H_
#define MMSENMF_TESTS_SYNTH_H_

// Synthetic two-source material: harmonic tone complexes ("A") and
// band-limited noise bursts ("B"). Both share the 200 Hz - 4 kHz region so
// their spectra overlap.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "mmsenmf/spectral.h"

namespace mmsenmf::testing {

inline AudioSignal Tone(double freq_hz, double seconds, double amplitude = 0.5,
                        int rate = 16000) {
  AudioSignal s;
  s.sample_rate_hz = rate;
  s.samples.resize(static_cast<std::size_t>(seconds * rate));
  for (std::size_t i = 0; i < s.size(); ++i)
    s.samples[i] = amplitude * std::sin(2.0 * std::numbers::pi * freq_hz * i / rate);
  return s;
}

// Sequence of notes, 150-500 ms each, f0 in [110, 440] Hz with up to ten
// harmonics of random 1/h-ish amplitude and an attack/decay envelope.
inline AudioSignal HarmonicComplexes(std::uint64_t seed, double seconds,
                                     int rate = 16000, int pitches = 0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  AudioSignal s;
  s.sample_rate_hz = rate;
  s.samples.assign(static_cast<std::size_t>(seconds * rate), 0.0);
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto len = static_cast<std::size_t>((0.15 + 0.35 * u(rng)) * rate);
    const double f0 =
        pitches > 0
            ? 110.0 * std::pow(2.0, 2.0 * static_cast<int>(pitches * u(rng)) / pitches)
            : 110.0 * std::pow(2.0, 2.0 * u(rng));
    const int harmonics = 3 + static_cast<int>(8 * u(rng));
    std::vector<double> amp(harmonics), phase(harmonics);
    for (int h = 0; h < harmonics; ++h) {
      amp[h] = (0.3 + 0.7 * u(rng)) / (h + 1);
      phase[h] = 2.0 * std::numbers::pi * u(rng);
    }
    const double gain = 0.2 + 0.8 * u(rng);
    for (std::size_t n = 0; n < len && pos + n < s.size(); ++n) {
      const double t = static_cast<double>(n) / rate;
      const double env = std::min(1.0, t / 0.01) * std::exp(-3.0 * t);
      double v = 0.0;
      for (int h = 0; h < harmonics; ++h) {
        const double f = f0 * (h + 1);
        if (f >= 0.45 * rate) break;
        v += amp[h] * std::sin(2.0 * std::numbers::pi * f * t + phase[h]);
      }
      s.samples[pos + n] = 0.3 * gain * env * v;
    }
    pos += len;
  }
  return s;
}

// Bursts of white noise through a two-pole resonator, 80-400 ms each with
// short silences; centre frequency in [300, 4000] Hz.
inline AudioSignal NoiseBursts(std::uint64_t seed, double seconds,
                               int rate = 16000, int bands = 0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g(0.0, 1.0);
  AudioSignal s;
  s.sample_rate_hz = rate;
  s.samples.assign(static_cast<std::size_t>(seconds * rate), 0.0);
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto len = static_cast<std::size_t>((0.08 + 0.32 * u(rng)) * rate);
    const auto gap = static_cast<std::size_t>(0.05 * u(rng) * rate);
    const double pos_u =
        bands > 0 ? (static_cast<int>(bands * u(rng)) + 0.5) / bands : u(rng);
    const double fc = 300.0 * std::pow(4000.0 / 300.0, pos_u);
    const double bw = fc * (0.2 + 0.5 * u(rng));
    const double r = std::exp(-std::numbers::pi * bw / rate);
    const double a1 = 2.0 * r * std::cos(2.0 * std::numbers::pi * fc / rate);
    const double a2 = -r * r;
    const double gain = (0.2 + 0.8 * u(rng)) * (1.0 - r);
    double y1 = 0.0, y2 = 0.0;
    for (std::size_t n = 0; n < len && pos + n < s.size(); ++n) {
      const double t = static_cast<double>(n) / rate;
      const double env = std::min({1.0, t / 0.005, (len - n) / (0.005 * rate)});
      const double y = gain * g(rng) + a1 * y1 + a2 * y2;
      y2 = y1;
      y1 = y;
      s.samples[pos + n] = env * y;
    }
    pos += len + gap;
  }
  return s;
}

// Two-source corpus: A draws f0 from four pitches spread over two octaves,
// B draws its centre frequency from four bands; the test clips use seeds
// disjoint from the training material.
struct SyntheticCorpus {
  static constexpr int kPitches = 4;
  static constexpr int kBands = 4;
  AudioSignal train_a, train_b;
  std::vector<AudioSignal> test_a, test_b;
};

inline SyntheticCorpus MakeCorpus(double train_seconds, int num_tests,
                                  double test_seconds,
                                  std::uint64_t test_seed = 1000) {
  SyntheticCorpus c;
  c.train_a = HarmonicComplexes(1, train_seconds, 16000, SyntheticCorpus::kPitches);
  c.train_b = NoiseBursts(2, train_seconds, 16000, SyntheticCorpus::kBands);
  for (int i = 0; i < num_tests; ++i) {
    c.test_a.push_back(HarmonicComplexes(test_seed + i, test_seconds, 16000,
                                         SyntheticCorpus::kPitches));
    c.test_b.push_back(NoiseBursts(test_seed + 1000 + i, test_seconds, 16000,
                                   SyntheticCorpus::kBands));
  }
  return c;
}

}  // namespace mmsenmf::testing

#endif  // MMSENMF_TESTS_SYNTH_H_
