// wav.cc

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

#include "mmsenmf/wav.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace mmsenmf {

namespace {

std::uint32_t ReadU32(const unsigned char *p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t ReadU16(const unsigned char *p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void PutU32(std::vector<unsigned char> *out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out->push_back((v >> (8 * i)) & 0xff);
}

void PutU16(std::vector<unsigned char> *out, std::uint16_t v) {
  out->push_back(v & 0xff);
  out->push_back((v >> 8) & 0xff);
}

}  // namespace

AudioSignal ReadWav(const std::string &path, int expected_rate_hz) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw std::runtime_error(path + ": not a RIFF/WAVE file");

  bool have_fmt = false;
  int channels = 0, bits = 0, rate = 0, format = 0;
  const unsigned char *data = nullptr;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char *chunk = bytes.data() + pos;
    std::size_t size = ReadU32(chunk + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) size = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0 && size >= 16) {
      format = ReadU16(chunk + 8);
      channels = ReadU16(chunk + 10);
      rate = static_cast<int>(ReadU32(chunk + 12));
      bits = ReadU16(chunk + 22);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      data_size = size;
    }
    pos = body + size + (size & 1);
  }
  if (!have_fmt || data == nullptr)
    throw std::runtime_error(path + ": missing fmt or data chunk");
  if (format != 1 || bits != 16)
    throw std::runtime_error(path + ": only 16-bit PCM is supported");
  if (channels != 1)
    throw std::runtime_error(path + ": expected mono audio, got " +
                             std::to_string(channels) + " channels");
  if (rate != expected_rate_hz)
    throw std::runtime_error(path + ": sample rate " + std::to_string(rate) +
                             " Hz, expected " +
                             std::to_string(expected_rate_hz) +
                             " Hz (resampling is not supported)");

  AudioSignal out;
  out.sample_rate_hz = rate;
  out.samples.resize(data_size / 2);
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    const auto code = static_cast<std::int16_t>(ReadU16(data + 2 * i));
    out.samples[i] = code / 32768.0;
  }
  return out;
}

void WriteWav(const std::string &path, const AudioSignal &signal) {
  signal.Validate();
  const auto n = static_cast<std::uint32_t>(signal.size());
  std::vector<unsigned char> out;
  out.reserve(44 + 2 * n);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  PutU32(&out, 36 + 2 * n);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  PutU32(&out, 16);
  PutU16(&out, 1);
  PutU16(&out, 1);
  PutU32(&out, static_cast<std::uint32_t>(signal.sample_rate_hz));
  PutU32(&out, static_cast<std::uint32_t>(signal.sample_rate_hz) * 2);
  PutU16(&out, 2);
  PutU16(&out, 16);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  PutU32(&out, 2 * n);
  for (double s : signal.samples) {
    const double scaled = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
    const auto code = static_cast<std::int16_t>(scaled);
    PutU16(&out, static_cast<std::uint16_t>(code));
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + path);
  file.write(reinterpret_cast<const char *>(out.data()),
             static_cast<std::streamsize>(out.size()));
}

}  // namespace mmsenmf
