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

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "cli/commands.h"
#include "cli/common.h"
#include "json.hpp"
#include "rirsde/io.h"
#include "rirsde/sde.h"

namespace rirsde::cli {
namespace {

using Json = nlohmann::ordered_json;

std::map<RoomId, ReferenceProfile> BuildProfiles(const std::filesystem::path& enrollment,
                                                 std::ostream& log) {
  std::map<RoomId, std::vector<RIRecording>> by_room;
  for (RIRecording& rir : io::LoadCorpus(enrollment)) {
    by_room[rir.room_id].push_back(std::move(rir));
  }
  std::map<RoomId, ReferenceProfile> profiles;
  for (const auto& [room, rirs] : by_room) {
    if (rirs.size() < 2) {
      log << "warning: room " << room << " has " << rirs.size()
          << " enrollment recording; no profile built\n";
      continue;
    }
    profiles.emplace(room, BuildReferenceProfile(rirs));
  }
  return profiles;
}

Json CriteriaJson(const FilterCriteria& c) {
  Json j;
  j["t60_rel_tolerance"] = c.t60_rel_tolerance;
  j["t60_hard_cutoff_s"] = c.t60_hard_cutoff_s;
  j["dist_min_m"] = c.dist_min_m;
  j["dist_max_m"] = c.dist_max_m;
  j["edc_max_rms_dev_db"] = c.edc_max_rms_dev_db;
  j["echo_density_max_rel_dev"] = c.echo_density_max_rel_dev;
  return j;
}

}  // namespace

ExitCode CmdFilter(const FilterOptions& opts, std::ostream& log) {
  ValidateCriteria(opts.criteria);
  io::ReadManifest(opts.input);
  const std::map<RoomId, ReferenceProfile> profiles = BuildProfiles(opts.enrollment, log);
  const std::vector<RIRecording> rirs = io::LoadCorpus(opts.input);

  PrepareOutputDir(opts.out);
  DirectoryLock lock(opts.out);
  const BatchFilterResult result = FilterBatch(rirs, profiles, opts.criteria, opts.threads);

  std::vector<const FilterDecision*> decisions(rirs.size());
  for (std::size_t k = 0; k < result.accepted.size(); ++k) {
    decisions[result.accepted[k]] = &result.accepted_decisions[k];
  }
  for (const RejectedRecording& r : result.rejected) decisions[r.index] = &r.decision;

  std::string all;
  std::string accepted;
  std::string rejected;
  std::vector<double> accepted_distances;
  double sum_abs_diff = 0.0;
  double max_abs_diff = 0.0;
  std::size_t n_diff = 0;
  for (std::size_t i = 0; i < rirs.size(); ++i) {
    const io::DecisionRecord record = io::MakeDecisionRecord(rirs[i].rir_id, *decisions[i]);
    const std::string line = io::DecisionToJsonLine(record) + "\n";
    all += line;
    (record.accepted ? accepted : rejected) += line;
    if (record.accepted) accepted_distances.push_back(record.distance_m);
    if (record.measured_distance_m) {
      const double diff = std::abs(*record.measured_distance_m - record.distance_m);
      sum_abs_diff += diff;
      max_abs_diff = std::max(max_abs_diff, diff);
      ++n_diff;
    }
  }

  Json summary;
  summary["schema_version"] = io::kSchemaVersion;
  summary["input_count"] = rirs.size();
  summary["accepted_count"] = result.accepted.size();
  summary["rejected_count"] = result.rejected.size();
  summary["yield"] = result.yield ? Json(*result.yield) : Json(nullptr);
  Json histogram = Json::object();
  for (RejectReason reason : kAllRejectReasons) {
    auto it = result.reason_histogram.find(reason);
    histogram[std::string(RejectReasonName(reason))] =
        it == result.reason_histogram.end() ? 0 : it->second;
  }
  summary["reason_histogram"] = histogram;
  summary["criteria"] = CriteriaJson(opts.criteria);
  summary["accepted_distance_histogram"] = {{"bin_m", kHistogramBinM},
                                            {"counts", DistanceHistogram(accepted_distances)}};
  summary["measured_distance_diagnostic"] = {
      {"n", n_diff},
      {"mean_abs_diff_m", n_diff ? Json(sum_abs_diff / n_diff) : Json(nullptr)},
      {"max_abs_diff_m", n_diff ? Json(max_abs_diff) : Json(nullptr)}};
  Json enrollment = Json::object();
  for (const auto& [room, profile] : profiles) {
    enrollment[std::to_string(room)] = profile.n_enrollment;
  }
  summary["enrollment_counts"] = enrollment;

  io::WriteTextFile(opts.out / kDecisionsFile, all);
  io::WriteTextFile(opts.out / kAcceptedFile, accepted);
  io::WriteTextFile(opts.out / kRejectedFile, rejected);
  io::WriteTextFile(opts.out / kProfilesFile, io::ProfilesToJson(profiles));
  io::WriteTextFile(opts.out / kSummaryFile, summary.dump(2) + "\n");

  log << "accepted " << result.accepted.size() << " of " << rirs.size();
  if (result.yield) log << " (yield " << io::FormatNumber(*result.yield) << ")";
  log << " -> " << opts.out.string() << "\n";
  return kExitOk;
}

}  // namespace rirsde::cli
