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

#ifndef RIRSDE_FILTER_H_
#define RIRSDE_FILTER_H_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rirsde/acoustics.h"
#include "rirsde/types.h"

namespace rirsde {

inline constexpr double kEdcGridMs = 10.0;
inline constexpr int kEdcGridPoints = 100;  // 10 ms steps over 1 s

// Reference statistics of one room, built from its enrollment recordings.
struct ReferenceProfile {
  RoomId room_id = 0;
  double median_t60_s = 0.0;
  // Pointwise median of direct-path-aligned decay curves on a 10 ms grid.
  std::vector<double> median_edc_db;
  std::array<double, kEchoWindows> echo_density_ref{};
  std::size_t n_enrollment = 0;

  double echo_density_total() const {
    double sum = 0.0;
    for (double c : echo_density_ref) sum += c;
    return sum;
  }
};

struct FilterCriteria {
  double t60_rel_tolerance = 0.20;
  double t60_hard_cutoff_s = 1.8695;
  double dist_min_m = 0.8;
  double dist_max_m = 7.1;
  double edc_max_rms_dev_db = 6.0;
  double echo_density_max_rel_dev = 0.5;
};

void ValidateCriteria(const FilterCriteria& criteria);

enum class RejectReason {
  kT60OutOfBand,
  kT60AboveCutoff,
  kDistanceTooClose,
  kDistanceTooFar,
  kEdcShapeMismatch,
  kEarlyReflectionMismatch,
  kMetricExtractionFailed,
};

inline constexpr std::array<RejectReason, 7> kAllRejectReasons = {
    RejectReason::kT60OutOfBand,     RejectReason::kT60AboveCutoff,
    RejectReason::kDistanceTooClose, RejectReason::kDistanceTooFar,
    RejectReason::kEdcShapeMismatch, RejectReason::kEarlyReflectionMismatch,
    RejectReason::kMetricExtractionFailed,
};

std::string_view RejectReasonName(RejectReason reason);
std::optional<RejectReason> ParseRejectReason(std::string_view name);

// Everything a decision was derived from, so reasons can be re-checked.
struct DecisionSnapshot {
  AcousticMetrics metrics;
  double distance_m = 0.0;           // from scene metadata
  double edc_rms_dev_db = 0.0;       // against the profile, over [0, T60_ref]
  int echo_density_total = 0;
};

struct FilterDecision {
  bool accepted = false;
  std::vector<RejectReason> reasons;  // sorted, unique
  DecisionSnapshot snapshot;
  // Set when metric extraction failed; the snapshot is then partial.
  std::optional<std::string> error;

  bool Has(RejectReason r) const;
};

// Decay curve normalized to total energy, aligned at the direct path and
// sampled every 10 ms.
std::vector<double> ResampledEdc(const EnergyDecayCurve& edc,
                                 std::size_t direct_index, int sample_rate);

// Throws on fewer than two recordings or mixed room ids.
ReferenceProfile BuildReferenceProfile(std::span<const RIRecording> enrollment);

// Root-mean-square dB difference over grid points at or before `horizon_s`.
double EdcRmsDeviation(std::span<const double> edc_grid,
                       std::span<const double> reference_grid, double horizon_s);

// Evaluates every criterion (no short-circuit). Never throws on metric
// failures; those come back as a rejection with `error` set.
FilterDecision ApplyQualityFilter(const RIRecording& rir,
                                  const ReferenceProfile& profile,
                                  const FilterCriteria& criteria);

// Recomputes the reason set from a decision snapshot; used to audit decisions.
std::vector<RejectReason> ReasonsFromSnapshot(const DecisionSnapshot& snapshot,
                                              const ReferenceProfile& profile,
                                              const FilterCriteria& criteria);

struct RejectedRecording {
  std::size_t index = 0;  // position in the input batch
  FilterDecision decision;
};

struct BatchFilterResult {
  std::vector<std::size_t> accepted;  // input indices
  std::vector<FilterDecision> accepted_decisions;
  std::vector<RejectedRecording> rejected;
  // Absent for an empty batch.
  std::optional<double> yield;
  std::map<RejectReason, std::size_t> reason_histogram;
};

// Throws Error(kUnknownRoom) naming the first room without a profile.
BatchFilterResult FilterBatch(std::span<const RIRecording> rirs,
                              const std::map<RoomId, ReferenceProfile>& profiles,
                              const FilterCriteria& criteria,
                              unsigned threads = 0);

}  // namespace rirsde

#endif  // RIRSDE_FILTER_H_
