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

#include "rirsde/synth.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "rirsde/error.h"
#include "rirsde/rng.h"

namespace rirsde {
namespace {

// Delays this close to an integer sample are not split across two taps.
constexpr double kIntegerDelaySnap = 1e-9;

void AddTap(std::vector<double>& out, double delay_samples, double amplitude) {
  const double nearest = std::round(delay_samples);
  if (std::abs(delay_samples - nearest) < kIntegerDelaySnap) {
    const auto i = static_cast<std::size_t>(nearest);
    if (i < out.size()) out[i] += amplitude;
    return;
  }
  const double base = std::floor(delay_samples);
  const double frac = delay_samples - base;
  const auto i = static_cast<std::size_t>(base);
  if (i < out.size()) out[i] += amplitude * (1.0 - frac);
  if (i + 1 < out.size()) out[i + 1] += amplitude * frac;
}

std::uint64_t SceneSeed(std::uint64_t room_seed, const SceneQuery& q) {
  std::uint64_t s = room_seed;
  for (double v : {q.source_pos.x, q.source_pos.y, q.source_pos.z,
                   q.receiver_pos.x, q.receiver_pos.y, q.receiver_pos.z}) {
    s = MixSeed(s, std::bit_cast<std::uint64_t>(v));
  }
  return s;
}

// Expected image-source power per sample at time t: arrivals per second grow
// as 4 pi c^3 t^2 / V, each carrying energy reflectance^k / (c t)^2 after
// k = c S t / (4 V) bounces on average.
double ExpectedImagePower(const ShoeboxRoom& room, const SynthesisConfig& config,
                          double t) {
  const double c = config.speed_of_sound;
  const double bounces = c * room.surface_area() * t / (4.0 * room.volume());
  return 4.0 * std::numbers::pi * c / (room.volume() * config.sample_rate) *
         std::pow(1.0 - room.absorption, bounces);
}

}  // namespace

void ValidateRoom(const ShoeboxRoom& room) {
  for (int axis = 0; axis < 3; ++axis) {
    const double d = room.dims[axis];
    if (!(d >= 1.0 && d <= 30.0)) {
      throw Error(ErrorCode::kGeometry,
                  "room dimension out of [1, 30] m: " + std::to_string(d));
    }
  }
  if (!(room.absorption > 0.0 && room.absorption < 1.0)) {
    throw Error(ErrorCode::kGeometry, "absorption must lie in (0, 1)");
  }
}

void ValidateQuery(const ShoeboxRoom& room, const SceneQuery& query) {
  for (const Vec3* p : {&query.source_pos, &query.receiver_pos}) {
    for (int axis = 0; axis < 3; ++axis) {
      const double v = (*p)[axis];
      if (!(v >= kMinWallClearance && v <= room.dims[axis] - kMinWallClearance)) {
        throw Error(ErrorCode::kGeometry,
                    "position closer than 0.1 m to a wall or outside the room");
      }
    }
  }
  if (!(Distance(query.source_pos, query.receiver_pos) > 0.0)) {
    throw Error(ErrorCode::kGeometry, "source and receiver coincide");
  }
}

void ValidateConfig(const SynthesisConfig& config) {
  if (config.max_image_order < 0) {
    throw Error(ErrorCode::kInvalidArgument, "max_image_order must be >= 0");
  }
  if (!(config.tail_crossover_ms > 0.0 && config.tail_crossover_ms < 1000.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "tail_crossover_ms must lie in (0, 1000)");
  }
  if (config.sample_rate != kSampleRate || config.duration_s != 1.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "output contract is 1 s at 32000 Hz");
  }
  if (!(config.speed_of_sound > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "speed_of_sound must be positive");
  }
}

double SabineT60(const ShoeboxRoom& room) {
  return 0.161 * room.volume() / (room.absorption * room.surface_area());
}

std::vector<ImageArrival> EnumerateImageSources(const ShoeboxRoom& room,
                                                const SceneQuery& query,
                                                const SynthesisConfig& config) {
  ValidateRoom(room);
  ValidateQuery(room, query);
  ValidateConfig(config);

  const int order = config.max_image_order;
  const double cutoff_s = config.tail_crossover_ms * 1e-3;
  // Pressure reflection coefficient; absorption is an energy fraction.
  const double reflectance = std::sqrt(1.0 - room.absorption);
  std::vector<ImageArrival> arrivals;

  // Image coordinate along one axis: (1 - 2p) * src + 2 n L, reached after
  // |n - p| + |n| wall bounces.
  for (int nx = -order; nx <= order; ++nx) {
    for (int px = 0; px <= 1; ++px) {
      const int rx = std::abs(nx - px) + std::abs(nx);
      if (rx > order) continue;
      const double ix = (1 - 2 * px) * query.source_pos.x + 2.0 * nx * room.dims.x;
      for (int ny = -order; ny <= order; ++ny) {
        for (int py = 0; py <= 1; ++py) {
          const int ry = std::abs(ny - py) + std::abs(ny);
          if (rx + ry > order) continue;
          const double iy =
              (1 - 2 * py) * query.source_pos.y + 2.0 * ny * room.dims.y;
          for (int nz = -order; nz <= order; ++nz) {
            for (int pz = 0; pz <= 1; ++pz) {
              const int rz = std::abs(nz - pz) + std::abs(nz);
              const int reflections = rx + ry + rz;
              if (reflections > order) continue;
              const double iz =
                  (1 - 2 * pz) * query.source_pos.z + 2.0 * nz * room.dims.z;
              const double d = Distance({ix, iy, iz}, query.receiver_pos);
              const double t = d / config.speed_of_sound;
              if (t >= cutoff_s) continue;
              arrivals.push_back(ImageArrival{
                  d, t * config.sample_rate,
                  std::pow(reflectance, reflections) / d, reflections});
            }
          }
        }
      }
    }
  }
  std::sort(arrivals.begin(), arrivals.end(),
            [](const ImageArrival& a, const ImageArrival& b) {
              if (a.delay_samples != b.delay_samples) {
                return a.delay_samples < b.delay_samples;
              }
              return a.reflections < b.reflections;
            });
  return arrivals;
}

RIRecording ImageSourceRir(const ShoeboxRoom& room, const SceneQuery& query,
                           const SynthesisConfig& config) {
  const std::vector<ImageArrival> arrivals =
      EnumerateImageSources(room, query, config);
  RIRecording rir;
  rir.samples.assign(config.num_samples(), 0.0);
  rir.sample_rate = config.sample_rate;
  rir.source_pos = query.source_pos;
  rir.receiver_pos = query.receiver_pos;
  rir.room_id = room.room_id;
  for (const ImageArrival& a : arrivals) {
    AddTap(rir.samples, a.delay_samples, a.amplitude);
  }
  return rir;
}

RIRecording SynthesizeRir(const ShoeboxRoom& room, const SceneQuery& query,
                          const SynthesisConfig& config) {
  RIRecording rir = ImageSourceRir(room, query, config);
  std::vector<double>& x = rir.samples;

  const auto crossover = static_cast<std::size_t>(
      std::lround(config.tail_crossover_ms * 1e-3 * config.sample_rate));
  const double level =
      ExpectedImagePower(room, config, config.tail_crossover_ms * 1e-3);

  // Amplitude envelope exp(-t / tau) decays 60 dB in one T60.
  const double tau = SabineT60(room) * 20.0 * std::numbers::log10e / 60.0;
  const double gain = std::sqrt(level);
  Rng rng(SceneSeed(room.seed, query));
  for (std::size_t i = crossover; i < x.size(); ++i) {
    const double t = static_cast<double>(i - crossover) / config.sample_rate;
    x[i] += gain * std::exp(-t / tau) * rng.Gaussian();
  }
  return rir;
}

RIRecording NormalizeRir(const RIRecording& rir) {
  double peak = 0.0;
  for (double s : rir.samples) peak = std::max(peak, std::abs(s));
  if (peak == 0.0) {
    throw Error(ErrorCode::kZeroEnergy, "cannot normalize an all-zero signal");
  }
  RIRecording out = rir;
  if (peak == 1.0) return out;
  for (double& s : out.samples) s /= peak;
  out.norm_gain = rir.norm_gain * peak;
  return out;
}

std::vector<SceneQuery> SampleScenes(const ShoeboxRoom& room, std::size_t n,
                                     std::uint64_t seed) {
  ValidateRoom(room);
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "n must be >= 1");
  for (int axis = 0; axis < 3; ++axis) {
    if (!(room.dims[axis] > 2.0 * kSceneWallMargin)) {
      throw Error(ErrorCode::kGeometry, "room too small for the 0.5 m margin");
    }
  }
  Rng rng(MixSeed(seed, static_cast<std::uint64_t>(room.room_id)));
  auto draw = [&] {
    return Vec3{rng.Uniform(kSceneWallMargin, room.dims.x - kSceneWallMargin),
                rng.Uniform(kSceneWallMargin, room.dims.y - kSceneWallMargin),
                rng.Uniform(kSceneWallMargin, room.dims.z - kSceneWallMargin)};
  };
  std::vector<SceneQuery> scenes;
  scenes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    SceneQuery q;
    q.source_pos = draw();
    do {
      q.receiver_pos = draw();
    } while (Distance(q.source_pos, q.receiver_pos) < kMinSceneDistance);
    scenes.push_back(q);
  }
  return scenes;
}

}  // namespace rirsde
