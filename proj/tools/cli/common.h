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

#ifndef RIRSDE_TOOLS_CLI_COMMON_H_
#define RIRSDE_TOOLS_CLI_COMMON_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "cli/cli.h"
#include "rirsde/error.h"
#include "rirsde/filter.h"
#include "rirsde/io.h"
#include "rirsde/sde.h"
#include "rirsde/synth.h"

namespace rirsde::cli {

// "1-20", "1,3,5-7".
std::vector<RoomId> ParseRoomList(std::string_view text);
std::vector<double> ParseDoubleList(std::string_view text);
std::vector<int> ParseIntList(std::string_view text);

// Room ids or a JSON file of custom rooms:
// {"rooms":[{"room_id":1,"dims":[l,w,h],"absorption":0.3,"seed":7}]}
std::vector<ShoeboxRoom> ResolveRooms(const std::string& spec);

// Guards an output directory against concurrent invocations.
class DirectoryLock {
 public:
  explicit DirectoryLock(const std::filesystem::path& dir);
  ~DirectoryLock();
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

 private:
  std::filesystem::path path_;
};

// Creates the directory (exit 2 on failure) and takes its lock.
void PrepareOutputDir(const std::filesystem::path& dir);

ExitCode ExitCodeFor(ErrorCode code);

// The accepted recordings of a filter run, in corpus order.
std::vector<std::string> AcceptedIds(const std::filesystem::path& decisions_dir);

// Loads recordings by id and extracts features (parallel, order-preserving).
std::vector<LabeledSample> LoadLabeledSamples(const std::filesystem::path& corpus,
                                              const std::vector<std::string>& ids,
                                              const std::vector<RoomId>& rooms,
                                              unsigned threads);

inline constexpr const char* kDecisionsFile = "decisions.jsonl";
inline constexpr const char* kAcceptedFile = "accepted.jsonl";
inline constexpr const char* kRejectedFile = "rejected.jsonl";
inline constexpr const char* kSummaryFile = "summary.json";
inline constexpr const char* kProfilesFile = "profiles.json";
inline constexpr const char* kModelFile = "model.json";
inline constexpr const char* kGridFile = "grid.json";
inline constexpr const char* kSplitFile = "split.json";
inline constexpr const char* kEvalFile = "eval.json";
inline constexpr const char* kEvalSamplesFile = "eval_samples.csv";
inline constexpr const char* kMetricsFile = "metrics.jsonl";

}  // namespace rirsde::cli

#endif  // RIRSDE_TOOLS_CLI_COMMON_H_
