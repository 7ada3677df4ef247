// Copyright 2026 The rirsde Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RIRSDE_WAV_H_
#define RIRSDE_WAV_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace rirsde {

struct WavData {
  int sample_rate = 0;
  std::vector<double> samples;
};

// RIFF/WAVE, mono, 32-bit IEEE float, little-endian. Samples are rounded to
// float once, so rewriting data read from such a file is byte-identical.
std::vector<std::uint8_t> EncodeWavFloat32(std::span<const double> samples,
                                           int sample_rate);
void WriteWavFloat32(const std::filesystem::path& path,
                     std::span<const double> samples, int sample_rate);

// Accepts mono 32-bit float or 16-bit PCM. Throws Error(kIo) on anything
// else or on a truncated file.
WavData DecodeWav(std::span<const std::uint8_t> bytes);
WavData ReadWav(const std::filesystem::path& path);

}  // namespace rirsde

#endif  // RIRSDE_WAV_H_
