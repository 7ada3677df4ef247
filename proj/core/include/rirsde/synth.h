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

#ifndef RIRSDE_SYNTH_H_
#define RIRSDE_SYNTH_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rirsde/types.h"

namespace rirsde {

// Shoebox room with one broadband absorption coefficient. Every scene in a
// room shares this profile; only positions vary.
struct ShoeboxRoom {
  Vec3 dims;  // length, width, height in meters
  double absorption = 0.3;
  RoomId room_id = 0;
  std::uint64_t seed = 0;

  double volume() const { return dims.x * dims.y * dims.z; }
  double surface_area() const {
    return 2.0 * (dims.x * dims.y + dims.x * dims.z + dims.y * dims.z);
  }
};

struct SceneQuery {
  Vec3 source_pos;
  Vec3 receiver_pos;

  friend bool operator==(const SceneQuery&, const SceneQuery&) = default;
};

struct SynthesisConfig {
  // 0 renders the direct path only.
  int max_image_order = 8;
  double tail_crossover_ms = 80.0;
  int sample_rate = kSampleRate;
  double duration_s = 1.0;
  double speed_of_sound = kSpeedOfSound;

  std::size_t num_samples() const {
    return static_cast<std::size_t>(duration_s * sample_rate + 0.5);
  }
};

inline constexpr double kMinWallClearance = 0.1;
inline constexpr double kSceneWallMargin = 0.5;
inline constexpr double kMinSceneDistance = 0.2;

void ValidateRoom(const ShoeboxRoom& room);
void ValidateQuery(const ShoeboxRoom& room, const SceneQuery& query);
void ValidateConfig(const SynthesisConfig& config);

// Sabine reverberation time 0.161 V / (alpha S), seconds.
double SabineT60(const ShoeboxRoom& room);

// One specular arrival of the image-source model.
struct ImageArrival {
  double distance_m = 0.0;
  double delay_samples = 0.0;
  double amplitude = 0.0;
  int reflections = 0;
};

// All image sources up to config.max_image_order whose arrival precedes the
// tail crossover, sorted by delay.
std::vector<ImageArrival> EnumerateImageSources(const ShoeboxRoom& room,
                                                const SceneQuery& query,
                                                const SynthesisConfig& config);

// Early part only: each arrival is a two-tap linearly interpolated impulse of
// amplitude sqrt(1 - absorption)^reflections / distance.
RIRecording ImageSourceRir(const ShoeboxRoom& room, const SceneQuery& query,
                           const SynthesisConfig& config = {});

// Early part plus a seeded Gaussian tail shaped by the room's Sabine decay.
// The tail starts at the expected image-source power density at the
// crossover. Bit-identical for identical (room, query, config).
RIRecording SynthesizeRir(const ShoeboxRoom& room, const SceneQuery& query,
                          const SynthesisConfig& config = {});

// Scales to unit peak and records the inverse in norm_gain. Idempotent.
RIRecording NormalizeRir(const RIRecording& rir);

// Uniform positions in the room shrunk by a 0.5 m margin; the receiver is
// redrawn until it is at least 0.2 m from the source.
std::vector<SceneQuery> SampleScenes(const ShoeboxRoom& room, std::size_t n,
                                     std::uint64_t seed);

// Twenty fixed profiles: ids 1-10 are small rooms, 11-20 large ones.
inline constexpr RoomId kNumBuiltinRooms = 20;
ShoeboxRoom BuiltinRoom(RoomId id);
std::vector<ShoeboxRoom> BuiltinRooms();

}  // namespace rirsde

#endif  // RIRSDE_SYNTH_H_
