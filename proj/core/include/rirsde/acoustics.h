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

#ifndef RIRSDE_ACOUSTICS_H_
#define RIRSDE_ACOUSTICS_H_

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "rirsde/types.h"

namespace rirsde {

// Schroeder backward-integrated energy decay, in dB relative to total energy.
struct EnergyDecayCurve {
  std::vector<double> values_db;
  double total_energy = 0.0;
};

struct T60Estimate {
  double seconds = 0.0;
  // True when the -5..-25 dB range was not reached and the -5..-15 dB
  // segment was used instead.
  bool used_fallback = false;
};

struct DrrEstimate {
  double db = 0.0;
  // No energy outside the direct window; `db` holds kDrrCeilingDb.
  bool at_ceiling = false;
};

inline constexpr int kEchoWindows = 10;
inline constexpr double kEchoWindowMs = 5.0;

struct EchoDensityProfile {
  std::array<int, kEchoWindows> counts{};
  // The 50 ms analysis span ran past the end of the signal.
  bool truncated = false;

  int total() const {
    int sum = 0;
    for (int c : counts) sum += c;
    return sum;
  }
};

struct AcousticMetrics {
  double t60_s = 0.0;
  bool t60_fallback = false;
  double drr_db = 0.0;
  bool drr_at_ceiling = false;
  std::size_t direct_index = 0;
  double geometric_distance_m = 0.0;
  EchoDensityProfile echo_density;
  double total_energy_db = kDbFloor;
};

inline constexpr double kDirectThreshold = 0.5;
inline constexpr double kDrrCeilingDb = 100.0;
inline constexpr double kDirectWindowPreMs = 0.5;
inline constexpr double kDirectWindowPostMs = 2.5;
inline constexpr double kEchoPeakFraction = 0.1;

// Throws Error(kZeroEnergy) on an all-zero signal.
EnergyDecayCurve SchroederEdc(std::span<const double> samples);
inline EnergyDecayCurve SchroederEdc(const RIRecording& rir) {
  return SchroederEdc(rir.samples);
}

// Reverberation time from a least-squares line through the -5..-25 dB part
// of the decay curve (T20, extrapolated to 60 dB), falling back to
// -5..-15 dB (T10). The energy missing past the end of the recording is
// estimated from the fitted decay and added back before each fit.
// Throws Error(kInsufficientDecay) with under 15 dB of usable decay.
T60Estimate EstimateT60(const EnergyDecayCurve& edc, int sample_rate);

// First sample whose magnitude reaches half the global peak.
std::size_t DetectDirectPath(std::span<const double> samples);
inline std::size_t DetectDirectPath(const RIRecording& rir) {
  return DetectDirectPath(rir.samples);
}

// Energy in [direct - 0.5 ms, direct + 2.5 ms] against everything else.
DrrEstimate ComputeDrr(std::span<const double> samples, std::size_t direct_index,
                       int sample_rate);
inline DrrEstimate ComputeDrr(const RIRecording& rir, std::size_t direct_index) {
  return ComputeDrr(rir.samples, direct_index, rir.sample_rate);
}

// Local-maximum peaks above 10% of the direct-path peak, counted in ten 5 ms
// windows starting at the direct path.
EchoDensityProfile EarlyReflectionProfile(std::span<const double> samples,
                                          std::size_t direct_index,
                                          int sample_rate);
inline EchoDensityProfile EarlyReflectionProfile(const RIRecording& rir,
                                                 std::size_t direct_index) {
  return EarlyReflectionProfile(rir.samples, direct_index, rir.sample_rate);
}

inline double DelayToDistance(std::size_t index, int sample_rate) {
  return static_cast<double>(index) / sample_rate * kSpeedOfSound;
}

// Physical energy, i.e. with norm_gain applied, in dB.
double TotalEnergyDb(const RIRecording& rir);

// All descriptors at once. Propagates the T60 error when the decay is
// insufficient.
AcousticMetrics Analyze(const RIRecording& rir);

}  // namespace rirsde

#endif  // RIRSDE_ACOUSTICS_H_
