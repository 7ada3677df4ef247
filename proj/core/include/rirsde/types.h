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

#ifndef RIRSDE_TYPES_H_
#define RIRSDE_TYPES_H_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace rirsde {

inline constexpr int kSampleRate = 32000;
inline constexpr std::size_t kDurationSamples = 32000;
inline constexpr double kSpeedOfSound = 343.0;  // m/s
// Lower clamp for every decibel quantity.
inline constexpr double kDbFloor = -120.0;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double operator[](int axis) const { return axis == 0 ? x : axis == 1 ? y : z; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double Distance(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

using RoomId = std::int32_t;

// A sampled impulse response plus the scene it was rendered for.
// `samples * norm_gain` restores physical amplitude.
struct RIRecording {
  std::vector<double> samples;
  int sample_rate = kSampleRate;
  Vec3 source_pos;
  Vec3 receiver_pos;
  RoomId room_id = 0;
  double norm_gain = 1.0;
  std::string rir_id;

  std::size_t duration_samples() const { return samples.size(); }
  double source_receiver_distance() const {
    return Distance(source_pos, receiver_pos);
  }
};

// Checks the output contract (32 kHz, exactly 1 s, positive gain, nonzero).
// Throws Error on violation.
void ValidateRecording(const RIRecording& rir);

// Power-to-dB with the library-wide floor.
inline double PowerToDb(double ratio) {
  if (!(ratio > 0.0)) return kDbFloor;
  const double db = 10.0 * std::log10(ratio);
  return db < kDbFloor ? kDbFloor : db;
}

}  // namespace rirsde

#endif  // RIRSDE_TYPES_H_
