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

#include "support/fixtures.h"

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <numbers>
#include <random>

#include "rirsde/io.h"

namespace rirsde::testing {

RIRecording MakeCraftedRir(const CraftedRirSpec& spec) {
  RIRecording rir;
  rir.rir_id = spec.id;
  rir.room_id = spec.room;
  rir.source_pos = {1.0, 1.0, 1.0};
  rir.receiver_pos = {1.0 + spec.distance_m, 1.0, 1.0};
  rir.samples.assign(kDurationSamples, 0.0);

  const auto direct = static_cast<std::size_t>(
      std::lround(spec.distance_m / kSpeedOfSound * kSampleRate));
  rir.samples[direct] = 1.0;

  const double tau = spec.t60_s * 20.0 * std::numbers::log10e / 60.0;
  std::mt19937_64 engine(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> noise(kDurationSamples);
  for (double& v : noise) v = normal(engine);

  const std::size_t early_end = direct + 1 + 1600;
  double decay_energy = 0.0;
  for (std::size_t i = direct + 1; i < kDurationSamples; ++i) {
    std::size_t src = i;
    if (spec.hold > 1 && i < early_end) {
      src = direct + 1 + ((i - direct - 1) / spec.hold) * spec.hold;
    }
    const double t = static_cast<double>(i - direct) / kSampleRate;
    const double v = spec.tail_amplitude * std::exp(-t / tau) * noise[src];
    rir.samples[i] = v;
    decay_energy += v * v;
  }
  if (spec.noise_floor_db) {
    const std::size_t n = kDurationSamples - direct - 1;
    const double floor_power =
        decay_energy * std::pow(10.0, *spec.noise_floor_db / 10.0) / n;
    std::mt19937_64 floor_engine(spec.seed ^ 0xf100f100ULL);
    for (std::size_t i = direct + 1; i < kDurationSamples; ++i) {
      rir.samples[i] += std::sqrt(floor_power) * normal(floor_engine);
    }
  }
  return rir;
}

FilterFixture MakeFilterFixture() {
  FilterFixture f;
  // Room 1: T60 0.5 s. Room 2: 1.3 s. Room 3: 1.7 s.
  const double room_t60[] = {0.5, 1.3, 1.7};
  for (RoomId room = 1; room <= 3; ++room) {
    for (std::uint64_t k = 0; k < 3; ++k) {
      CraftedRirSpec s;
      s.id = "enroll_r" + std::to_string(room) + "_" + std::to_string(k);
      s.room = room;
      s.distance_m = 2.0 + static_cast<double>(k);
      s.t60_s = room_t60[room - 1];
      s.seed = 100 * static_cast<std::uint64_t>(room) + k;
      f.enrollment.push_back(MakeCraftedRir(s));
    }
  }

  auto add = [&](CraftedRirSpec s, std::vector<RejectReason> expected) {
    f.corpus.push_back(MakeCraftedRir(s));
    f.expected.push_back(std::move(expected));
  };
  add({.id = "good_a", .room = 1, .distance_m = 2.5, .t60_s = 0.5, .seed = 11}, {});
  add({.id = "good_b", .room = 1, .distance_m = 4.0, .t60_s = 0.5, .seed = 12}, {});
  add({.id = "too_close", .room = 1, .distance_m = 0.5, .t60_s = 0.5, .seed = 13},
      {RejectReason::kDistanceTooClose});
  add({.id = "too_far", .room = 1, .distance_m = 7.5, .t60_s = 0.5, .seed = 14},
      {RejectReason::kDistanceTooFar});
  add({.id = "noisy_tail", .room = 1, .distance_m = 3.0, .t60_s = 0.5, .seed = 15,
       .noise_floor_db = -35.0},
      {RejectReason::kEdcShapeMismatch});
  add({.id = "smeared_early", .room = 1, .distance_m = 3.0, .t60_s = 0.5, .seed = 16,
       .hold = 8},
      {RejectReason::kEarlyReflectionMismatch});
  add({.id = "slow_decay", .room = 2, .distance_m = 3.0, .t60_s = 1.6, .seed = 17},
      {RejectReason::kT60OutOfBand});
  add({.id = "long_decay", .room = 3, .distance_m = 3.0, .t60_s = 1.95, .seed = 18},
      {RejectReason::kT60AboveCutoff});
  return f;
}

void WriteFixtureCorpus(const std::filesystem::path& dir,
                        const std::vector<RIRecording>& rirs) {
  io::CorpusManifest manifest;
  manifest.count = rirs.size();
  for (const RIRecording& r : rirs) {
    if (manifest.rooms.empty() || manifest.rooms.back() != r.room_id) {
      manifest.rooms.push_back(r.room_id);
    }
  }
  const std::vector<std::uint64_t> seeds(rirs.size(), 0);
  io::WriteCorpus(dir, rirs, seeds, manifest);
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("rirsde_" + tag + "_" + std::to_string(::getpid()) + "_" +
           std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace rirsde::testing
