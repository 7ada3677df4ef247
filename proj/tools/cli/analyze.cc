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

#include <string>
#include <vector>

#include "cli/commands.h"
#include "cli/common.h"
#include "json.hpp"
#include "rirsde/acoustics.h"
#include "rirsde/io.h"
#include "rirsde/parallel.h"

namespace rirsde::cli {
namespace {

using Json = nlohmann::ordered_json;

Json MetricsRow(const std::filesystem::path& dir, const io::RirMetadata& meta) {
  Json row;
  row["rir_id"] = meta.rir_id;
  row["room_id"] = meta.room_id;
  try {
    const RIRecording rir = io::LoadRecording(dir, meta);
    const EnergyDecayCurve edc = SchroederEdc(rir);
    if (edc.total_energy <= 0.0) throw Error(ErrorCode::kZeroEnergy, "all-zero recording");
    try {
      const T60Estimate t60 = EstimateT60(edc, rir.sample_rate);
      row["t60_s"] = t60.seconds;
      row["t60_fallback"] = t60.used_fallback;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInsufficientDecay) throw;
      row["t60_s"] = nullptr;
      row["t60_error"] = std::string(ErrorCodeName(e.code()));
    }
    const std::size_t direct = DetectDirectPath(rir);
    const DrrEstimate drr = ComputeDrr(rir, direct);
    const EchoDensityProfile echo = EarlyReflectionProfile(rir, direct);
    row["drr_db"] = drr.db;
    row["drr_at_ceiling"] = drr.at_ceiling;
    row["direct_index"] = direct;
    row["direct_distance_m"] = DelayToDistance(direct, rir.sample_rate);
    row["metadata_distance_m"] = rir.source_receiver_distance();
    row["echo_density"] = echo.counts;
    row["echo_truncated"] = echo.truncated;
    row["total_energy_db"] = TotalEnergyDb(rir);
  } catch (const Error& e) {
    Json err;
    err["rir_id"] = meta.rir_id;
    err["room_id"] = meta.room_id;
    err["error"] = e.what();
    return err;
  }
  return row;
}

}  // namespace

ExitCode CmdAnalyze(const AnalyzeOptions& opts, std::ostream& log) {
  io::ReadManifest(opts.input);
  const std::vector<io::RirMetadata> metadata = io::ReadMetadata(opts.input);
  const std::filesystem::path out_path = opts.out.value_or(opts.input / kMetricsFile);
  const std::filesystem::path out_dir =
      out_path.has_parent_path() ? out_path.parent_path() : std::filesystem::path(".");
  PrepareOutputDir(out_dir);
  DirectoryLock lock(out_dir);

  std::vector<Json> rows(metadata.size());
  ParallelFor(metadata.size(), opts.threads,
              [&](std::size_t i) { rows[i] = MetricsRow(opts.input, metadata[i]); });

  std::string text;
  std::size_t failures = 0;
  for (const Json& row : rows) {
    if (row.contains("error")) ++failures;
    text += row.dump();
    text += '\n';
  }
  io::WriteTextFile(out_path, text);
  log << "analyzed " << rows.size() << " recordings (" << failures << " failed) -> "
      << out_path.string() << "\n";
  if (!rows.empty() && failures == rows.size()) {
    log << "error: every recording failed analysis\n";
    return kExitMissingData;
  }
  return kExitOk;
}

}  // namespace rirsde::cli
