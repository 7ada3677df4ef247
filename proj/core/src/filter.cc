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

#include "rirsde/filter.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "rirsde/parallel.h"
#include "rirsde/error.h"

namespace rirsde {
namespace {

double Median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::size_t GridStep(int sample_rate) {
  return static_cast<std::size_t>(std::lround(kEdcGridMs * 1e-3 * sample_rate));
}

}  // namespace

void ValidateCriteria(const FilterCriteria& c) {
  for (double v : {c.t60_rel_tolerance, c.t60_hard_cutoff_s,
                   c.edc_max_rms_dev_db, c.echo_density_max_rel_dev}) {
    if (!(v > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "tolerances must be positive");
    }
  }
  if (!(c.dist_min_m >= 0.0) || !(c.dist_min_m < c.dist_max_m)) {
    throw Error(ErrorCode::kInvalidArgument,
                "distance bounds must satisfy 0 <= min < max");
  }
}

std::string_view RejectReasonName(RejectReason reason) {
  switch (reason) {
    case RejectReason::kT60OutOfBand:
      return "T60_OUT_OF_BAND";
    case RejectReason::kT60AboveCutoff:
      return "T60_ABOVE_CUTOFF";
    case RejectReason::kDistanceTooClose:
      return "DISTANCE_TOO_CLOSE";
    case RejectReason::kDistanceTooFar:
      return "DISTANCE_TOO_FAR";
    case RejectReason::kEdcShapeMismatch:
      return "EDC_SHAPE_MISMATCH";
    case RejectReason::kEarlyReflectionMismatch:
      return "EARLY_REFLECTION_MISMATCH";
    case RejectReason::kMetricExtractionFailed:
      return "METRIC_EXTRACTION_FAILED";
  }
  return "UNKNOWN";
}

std::optional<RejectReason> ParseRejectReason(std::string_view name) {
  for (RejectReason r : kAllRejectReasons) {
    if (RejectReasonName(r) == name) return r;
  }
  return std::nullopt;
}

bool FilterDecision::Has(RejectReason r) const {
  return std::find(reasons.begin(), reasons.end(), r) != reasons.end();
}

std::vector<double> ResampledEdc(const EnergyDecayCurve& edc,
                                 std::size_t direct_index, int sample_rate) {
  const std::size_t step = GridStep(sample_rate);
  std::vector<double> grid(kEdcGridPoints, kDbFloor);
  for (int k = 0; k < kEdcGridPoints; ++k) {
    const std::size_t i = direct_index + static_cast<std::size_t>(k) * step;
    if (i >= edc.values_db.size()) break;
    grid[static_cast<std::size_t>(k)] = edc.values_db[i];
  }
  return grid;
}

ReferenceProfile BuildReferenceProfile(std::span<const RIRecording> enrollment) {
  if (enrollment.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "a reference profile needs at least 2 enrollment recordings");
  }
  const RoomId room = enrollment.front().room_id;
  for (const RIRecording& rir : enrollment) {
    if (rir.room_id != room) {
      throw Error(ErrorCode::kInvalidArgument,
                  "enrollment mixes room ids " + std::to_string(room) + " and " +
                      std::to_string(rir.room_id));
    }
  }

  const std::size_t n = enrollment.size();
  std::vector<double> t60s(n);
  std::vector<std::vector<double>> grids(n);
  std::vector<EchoDensityProfile> echoes(n);
  ParallelFor(n, 0, [&](std::size_t i) {
    const RIRecording& rir = enrollment[i];
    const EnergyDecayCurve edc = SchroederEdc(rir);
    t60s[i] = EstimateT60(edc, rir.sample_rate).seconds;
    const std::size_t direct = DetectDirectPath(rir);
    grids[i] = ResampledEdc(edc, direct, rir.sample_rate);
    echoes[i] = EarlyReflectionProfile(rir, direct);
  });

  ReferenceProfile profile;
  profile.room_id = room;
  profile.n_enrollment = n;
  profile.median_t60_s = Median(t60s);
  profile.median_edc_db.resize(kEdcGridPoints);
  std::vector<double> column(n);
  for (int k = 0; k < kEdcGridPoints; ++k) {
    for (std::size_t i = 0; i < n; ++i) column[i] = grids[i][static_cast<std::size_t>(k)];
    profile.median_edc_db[static_cast<std::size_t>(k)] = Median(column);
  }
  for (int w = 0; w < kEchoWindows; ++w) {
    for (std::size_t i = 0; i < n; ++i) {
      column[i] = echoes[i].counts[static_cast<std::size_t>(w)];
    }
    profile.echo_density_ref[static_cast<std::size_t>(w)] = Median(column);
  }
  return profile;
}

double EdcRmsDeviation(std::span<const double> edc_grid,
                       std::span<const double> reference_grid, double horizon_s) {
  const std::size_t n = std::min(edc_grid.size(), reference_grid.size());
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (static_cast<double>(k) * kEdcGridMs * 1e-3 > horizon_s) break;
    const double d = edc_grid[k] - reference_grid[k];
    acc += d * d;
    ++count;
  }
  return count == 0 ? 0.0 : std::sqrt(acc / static_cast<double>(count));
}

std::vector<RejectReason> ReasonsFromSnapshot(const DecisionSnapshot& s,
                                              const ReferenceProfile& profile,
                                              const FilterCriteria& c) {
  std::vector<RejectReason> reasons;
  const double t60 = s.metrics.t60_s;
  const double ref = profile.median_t60_s;
  if (std::abs(t60 - ref) > c.t60_rel_tolerance * ref) {
    reasons.push_back(RejectReason::kT60OutOfBand);
  }
  if (t60 > c.t60_hard_cutoff_s) reasons.push_back(RejectReason::kT60AboveCutoff);
  if (s.distance_m < c.dist_min_m) reasons.push_back(RejectReason::kDistanceTooClose);
  if (s.distance_m > c.dist_max_m) reasons.push_back(RejectReason::kDistanceTooFar);
  if (s.edc_rms_dev_db > c.edc_max_rms_dev_db) {
    reasons.push_back(RejectReason::kEdcShapeMismatch);
  }
  const double ref_total = profile.echo_density_total();
  if (std::abs(s.echo_density_total - ref_total) >
      c.echo_density_max_rel_dev * ref_total) {
    reasons.push_back(RejectReason::kEarlyReflectionMismatch);
  }
  return reasons;
}

FilterDecision ApplyQualityFilter(const RIRecording& rir,
                                  const ReferenceProfile& profile,
                                  const FilterCriteria& criteria) {
  FilterDecision decision;
  DecisionSnapshot& s = decision.snapshot;
  s.distance_m = rir.source_receiver_distance();
  try {
    const EnergyDecayCurve edc = SchroederEdc(rir);
    s.metrics = Analyze(rir);
    s.edc_rms_dev_db = EdcRmsDeviation(
        ResampledEdc(edc, s.metrics.direct_index, rir.sample_rate),
        profile.median_edc_db, profile.median_t60_s);
    s.echo_density_total = s.metrics.echo_density.total();
    decision.reasons = ReasonsFromSnapshot(s, profile, criteria);
  } catch (const std::exception& e) {
    decision.error = e.what();
    decision.reasons.push_back(RejectReason::kMetricExtractionFailed);
    if (s.distance_m < criteria.dist_min_m) {
      decision.reasons.push_back(RejectReason::kDistanceTooClose);
    }
    if (s.distance_m > criteria.dist_max_m) {
      decision.reasons.push_back(RejectReason::kDistanceTooFar);
    }
    std::sort(decision.reasons.begin(), decision.reasons.end());
  }
  decision.accepted = decision.reasons.empty();
  return decision;
}

BatchFilterResult FilterBatch(std::span<const RIRecording> rirs,
                              const std::map<RoomId, ReferenceProfile>& profiles,
                              const FilterCriteria& criteria, unsigned threads) {
  ValidateCriteria(criteria);
  for (const RIRecording& rir : rirs) {
    if (!profiles.contains(rir.room_id)) {
      throw Error(ErrorCode::kUnknownRoom,
                  "no reference profile for room " + std::to_string(rir.room_id));
    }
  }
  std::vector<FilterDecision> decisions(rirs.size());
  ParallelFor(rirs.size(), threads, [&](std::size_t i) {
    decisions[i] =
        ApplyQualityFilter(rirs[i], profiles.at(rirs[i].room_id), criteria);
  });

  BatchFilterResult result;
  for (RejectReason r : kAllRejectReasons) result.reason_histogram[r] = 0;
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    if (decisions[i].accepted) {
      result.accepted.push_back(i);
      result.accepted_decisions.push_back(std::move(decisions[i]));
    } else {
      for (RejectReason r : decisions[i].reasons) ++result.reason_histogram[r];
      result.rejected.push_back(RejectedRecording{i, std::move(decisions[i])});
    }
  }
  if (!rirs.empty()) {
    result.yield = static_cast<double>(result.accepted.size()) /
                   static_cast<double>(rirs.size());
  }
  return result;
}

}  // namespace rirsde
