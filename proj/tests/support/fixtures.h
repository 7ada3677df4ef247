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

#ifndef RIRSDE_TESTS_SUPPORT_FIXTURES_H_
#define RIRSDE_TESTS_SUPPORT_FIXTURES_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rirsde/filter.h"
#include "rirsde/types.h"

namespace rirsde::testing {

// A unit direct impulse at distance / c followed by an exponentially decaying
// noise tail, built without the synthesizer so every property is set by hand.
struct CraftedRirSpec {
  std::string id;
  RoomId room = 1;
  double distance_m = 3.0;
  double t60_s = 0.5;
  std::uint64_t seed = 1;
  double tail_amplitude = 0.5;
  // Adds a stationary noise floor this many dB below the decaying energy.
  std::optional<double> noise_floor_db;
  // Sample-and-hold factor applied to the tail noise over the first 50 ms.
  int hold = 1;
};

RIRecording MakeCraftedRir(const CraftedRirSpec& spec);

struct FilterFixture {
  std::vector<RIRecording> enrollment;  // three per room, rooms 1-3
  std::vector<RIRecording> corpus;      // 8 recordings, 2 acceptable
  // Expected reason set per corpus entry.
  std::vector<std::vector<RejectReason>> expected;
};

// Two clean recordings plus one violating each of the six criteria.
FilterFixture MakeFilterFixture();

// Writes recordings as a corpus directory (see rirsde/io.h).
void WriteFixtureCorpus(const std::filesystem::path& dir,
                        const std::vector<RIRecording>& rirs);

// Fresh empty directory under the system temp dir; removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace rirsde::testing

#endif  // RIRSDE_TESTS_SUPPORT_FIXTURES_H_
