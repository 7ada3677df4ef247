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

#ifndef RIRSDE_IO_H_
#define RIRSDE_IO_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rirsde/filter.h"
#include "rirsde/sde.h"
#include "rirsde/types.h"

// File schemas shared by the pipeline stages. JSON numbers are written in
// shortest round-trip form, so identical values give identical bytes.
namespace rirsde::io {

inline constexpr int kSchemaVersion = 1;

// One line of metadata.jsonl:
// {"rir_id","room_id","source_pos":[x,y,z],"receiver_pos":[x,y,z],
//  "norm_gain","seed"}
struct RirMetadata {
  std::string rir_id;
  RoomId room_id = 0;
  Vec3 source_pos;
  Vec3 receiver_pos;
  double norm_gain = 1.0;
  std::uint64_t seed = 0;
};

std::string MetadataToJsonLine(const RirMetadata& meta);
RirMetadata MetadataFromJsonLine(std::string_view line);

// One line of decisions.jsonl:
// {"rir_id","accepted","reasons":[...],"t60_s","drr_db","distance_m",
//  "measured_distance_m","error"?}
struct DecisionRecord {
  std::string rir_id;
  bool accepted = false;
  std::vector<RejectReason> reasons;
  std::optional<double> t60_s;
  std::optional<double> drr_db;
  double distance_m = 0.0;
  std::optional<double> measured_distance_m;
  std::optional<std::string> error;
};

DecisionRecord MakeDecisionRecord(std::string rir_id, const FilterDecision& d);
std::string DecisionToJsonLine(const DecisionRecord& record);
DecisionRecord DecisionFromJsonLine(std::string_view line);

std::string ProfilesToJson(const std::map<RoomId, ReferenceProfile>& profiles);
std::map<RoomId, ReferenceProfile> ProfilesFromJson(std::string_view text);

// Model document; throws Error(kSchemaMismatch) on a foreign schema_version.
std::string ModelToJson(const EstimatorModel& model);
EstimatorModel ModelFromJson(std::string_view text);

std::string EvalReportToJson(const EvalReport& report);
// The per-sample list is not part of the JSON document; see EvalSamplesCsv.
EvalReport EvalReportFromJson(std::string_view text);

// "rir_id,true_m,predicted_m,residual_m" rows.
std::string EvalSamplesCsv(const EvalReport& report);
std::vector<SamplePrediction> EvalSamplesFromCsv(std::string_view text);

// Corpus directory layout written by the generate stage:
//   <dir>/rirs/<rir_id>.wav   normalized samples, float32 mono 32 kHz
//   <dir>/metadata.jsonl      one RirMetadata per line, in corpus order
//   <dir>/manifest.json       written last; marks the corpus complete
struct CorpusManifest {
  std::uint64_t seed = 0;
  std::vector<RoomId> rooms;
  std::size_t n_per_room = 0;
  std::size_t count = 0;
};

inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kMetadataFile = "metadata.jsonl";
inline constexpr const char* kRirSubdir = "rirs";

std::string ManifestToJson(const CorpusManifest& manifest);
CorpusManifest ManifestFromJson(std::string_view text);

RirMetadata MetadataFor(const RIRecording& rir, std::uint64_t seed);
std::filesystem::path RecordingPath(const std::filesystem::path& dir,
                                    std::string_view rir_id);

// Writes every file of the layout above.
void WriteCorpus(const std::filesystem::path& dir,
                 std::span<const RIRecording> rirs,
                 std::span<const std::uint64_t> seeds,
                 const CorpusManifest& manifest);

// Throw Error(kMissingData) when the manifest or metadata is absent.
CorpusManifest ReadManifest(const std::filesystem::path& dir);
std::vector<RirMetadata> ReadMetadata(const std::filesystem::path& dir);
// Loads and validates one recording; throws Error(kIo) on a corrupt WAV.
RIRecording LoadRecording(const std::filesystem::path& dir, const RirMetadata& meta);
// Whole corpus, failing on the first unreadable recording.
std::vector<RIRecording> LoadCorpus(const std::filesystem::path& dir);

// Whole-file helpers. Throw Error(kIo), or Error(kMissingData) when a file
// to read does not exist.
std::string ReadTextFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, std::string_view text);
std::vector<std::string> ReadLines(const std::filesystem::path& path);

// Shortest round-trip decimal form used in every JSON and CSV file.
std::string FormatNumber(double value);

}  // namespace rirsde::io

#endif  // RIRSDE_IO_H_
