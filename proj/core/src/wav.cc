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

#include "rirsde/wav.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "rirsde/error.h"

namespace rirsde {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatIeeeFloat = 3;

void PutU16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void PutU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<std::uint8_t>((v >> shift) & 0xff));
  }
}

void PutTag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

std::uint16_t GetU16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t GetU32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) |
         (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

bool TagIs(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

}  // namespace

std::vector<std::uint8_t> EncodeWavFloat32(std::span<const double> samples,
                                           int sample_rate) {
  const auto data_bytes = static_cast<std::uint32_t>(samples.size() * 4);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  PutTag(out, "RIFF");
  PutU32(out, 36 + data_bytes);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutU32(out, 16);
  PutU16(out, kFormatIeeeFloat);
  PutU16(out, 1);  // mono
  PutU32(out, static_cast<std::uint32_t>(sample_rate));
  PutU32(out, static_cast<std::uint32_t>(sample_rate) * 4);
  PutU16(out, 4);   // block align
  PutU16(out, 32);  // bits per sample
  PutTag(out, "data");
  PutU32(out, data_bytes);
  for (double s : samples) {
    PutU32(out, std::bit_cast<std::uint32_t>(static_cast<float>(s)));
  }
  return out;
}

void WriteWavFloat32(const std::filesystem::path& path,
                     std::span<const double> samples, int sample_rate) {
  const std::vector<std::uint8_t> bytes = EncodeWavFloat32(samples, sample_rate);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

WavData DecodeWav(std::span<const std::uint8_t> b) {
  if (b.size() < 12 || !TagIs(b, 0, "RIFF") || !TagIs(b, 8, "WAVE")) {
    throw Error(ErrorCode::kIo, "not a RIFF/WAVE stream");
  }
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint16_t bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::size_t at = 12;
  while (at + 8 <= b.size()) {
    const std::uint32_t size = GetU32(b, at + 4);
    const std::size_t body = at + 8;
    if (body + size > b.size()) throw Error(ErrorCode::kIo, "truncated WAV chunk");
    if (TagIs(b, at, "fmt ")) {
      if (size < 16) throw Error(ErrorCode::kIo, "short fmt chunk");
      format = GetU16(b, body);
      channels = GetU16(b, body + 2);
      rate = GetU32(b, body + 4);
      bits = GetU16(b, body + 14);
      if (format == 0xFFFE && size >= 26) format = GetU16(b, body + 24);
      have_fmt = true;
    } else if (TagIs(b, at, "data")) {
      if (!have_fmt) throw Error(ErrorCode::kIo, "data chunk before fmt chunk");
      if (channels != 1) throw Error(ErrorCode::kIo, "only mono WAV is supported");
      WavData wav;
      wav.sample_rate = static_cast<int>(rate);
      if (format == kFormatIeeeFloat && bits == 32) {
        wav.samples.reserve(size / 4);
        for (std::size_t i = 0; i + 4 <= size; i += 4) {
          wav.samples.push_back(std::bit_cast<float>(GetU32(b, body + i)));
        }
      } else if (format == kFormatPcm && bits == 16) {
        wav.samples.reserve(size / 2);
        for (std::size_t i = 0; i + 2 <= size; i += 2) {
          const auto v = static_cast<std::int16_t>(GetU16(b, body + i));
          wav.samples.push_back(v / 32768.0);
        }
      } else {
        throw Error(ErrorCode::kIo, "unsupported WAV encoding (format " +
                                        std::to_string(format) + ", " +
                                        std::to_string(bits) + " bits)");
      }
      return wav;
    }
    at = body + size + (size & 1);
  }
  throw Error(ErrorCode::kIo, "WAV stream has no data chunk");
}

WavData ReadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  return DecodeWav(bytes);
}

}  // namespace rirsde
