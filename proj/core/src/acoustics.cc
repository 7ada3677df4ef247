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

#include "rirsde/acoustics.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "rirsde/error.h"

namespace rirsde {
namespace {

constexpr int kT60MaxIterations = 50;

std::size_t MsToSamples(double ms, int sample_rate) {
  return static_cast<std::size_t>(std::lround(ms * 1e-3 * sample_rate));
}

double PeakMagnitude(std::span<const double> samples) {
  double peak = 0.0;
  for (double s : samples) peak = std::max(peak, std::abs(s));
  return peak;
}

struct LineFit {
  double slope = 0.0;  // dB per second
  std::size_t points = 0;
};

// Least-squares slope of db[n] against n / sample_rate for the contiguous
// run of points with upper >= db >= lower.
std::optional<LineFit> FitSegment(const std::vector<double>& db, double upper,
                                  double lower, int sample_rate) {
  std::size_t begin = 0;
  while (begin < db.size() && db[begin] > upper) ++begin;
  std::size_t end = begin;
  while (end < db.size() && db[end] >= lower) ++end;
  if (end - begin < 2) return std::nullopt;

  const double n = static_cast<double>(end - begin);
  double mean_t = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    mean_t += static_cast<double>(i) / sample_rate;
    mean_y += db[i];
  }
  mean_t /= n;
  mean_y /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    const double dt = static_cast<double>(i) / sample_rate - mean_t;
    sxy += dt * (db[i] - mean_y);
    sxx += dt * dt;
  }
  if (sxx <= 0.0) return std::nullopt;
  return LineFit{sxy / sxx, end - begin};
}

}  // namespace

void ValidateRecording(const RIRecording& rir) {
  if (rir.sample_rate != kSampleRate) {
    throw Error(ErrorCode::kInvalidArgument,
                "sample rate must be 32000, got " +
                    std::to_string(rir.sample_rate));
  }
  if (rir.samples.size() != kDurationSamples) {
    throw Error(ErrorCode::kInvalidArgument,
                "recording must hold 32000 samples, got " +
                    std::to_string(rir.samples.size()));
  }
  if (!(rir.norm_gain > 0.0) || !std::isfinite(rir.norm_gain)) {
    throw Error(ErrorCode::kInvalidArgument, "norm_gain must be positive");
  }
  if (PeakMagnitude(rir.samples) == 0.0) {
    throw Error(ErrorCode::kZeroEnergy, "recording is all zeros");
  }
}

EnergyDecayCurve SchroederEdc(std::span<const double> samples) {
  EnergyDecayCurve edc;
  edc.values_db.resize(samples.size());
  // Backward cumulative energy; adding non-negative terms keeps it monotone.
  std::vector<double> remaining(samples.size());
  double acc = 0.0;
  for (std::size_t i = samples.size(); i-- > 0;) {
    acc += samples[i] * samples[i];
    remaining[i] = acc;
  }
  if (!(acc > 0.0)) {
    throw Error(ErrorCode::kZeroEnergy, "cannot integrate an all-zero signal");
  }
  edc.total_energy = acc;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    edc.values_db[i] = PowerToDb(remaining[i] / acc);
  }
  edc.values_db[0] = 0.0;
  return edc;
}

T60Estimate EstimateT60(const EnergyDecayCurve& edc, int sample_rate) {
  const std::vector<double>& db = edc.values_db;
  if (db.empty() || sample_rate <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "empty decay curve");
  }

  // Usable decay: the deepest level still above the clamp floor.
  double deepest = 0.0;
  for (double v : db) {
    if (v > kDbFloor) deepest = std::min(deepest, v);
  }
  if (deepest > -15.0) {
    throw Error(ErrorCode::kInsufficientDecay,
                "decay curve spans only " + std::to_string(-deepest) + " dB");
  }

  std::vector<double> relative(db.size());
  for (std::size_t i = 0; i < db.size(); ++i) {
    relative[i] = std::pow(10.0, db[i] / 10.0);
  }
  const double length_s = static_cast<double>(db.size()) / sample_rate;

  // Truncation compensation: for an exponential decay with rate lambda the
  // energy past the end is a fraction q / (1 - q), q = exp(-lambda * length),
  // of the recorded total. Iterate fit -> correction to a fixed point.
  std::vector<double> compensated = db;
  T60Estimate estimate;
  double correction = 0.0;
  for (int iter = 0; iter < kT60MaxIterations; ++iter) {
    if (correction > 0.0) {
      for (std::size_t i = 0; i < db.size(); ++i) {
        compensated[i] =
            PowerToDb((relative[i] + correction) / (1.0 + correction));
      }
    }
    std::optional<LineFit> fit = FitSegment(compensated, -5.0, -25.0, sample_rate);
    bool fallback = false;
    if (!fit || deepest > -25.0) {
      fit = FitSegment(compensated, -5.0, -15.0, sample_rate);
      fallback = true;
    }
    if (!fit || !(fit->slope < 0.0)) {
      throw Error(ErrorCode::kInsufficientDecay,
                  "no decaying segment between -5 and -15 dB");
    }
    const double previous = estimate.seconds;
    estimate.seconds = -60.0 / fit->slope;
    estimate.used_fallback = fallback;

    const double lambda = -fit->slope * std::log(10.0) / 10.0;
    const double q = std::exp(-lambda * length_s);
    correction = q / (1.0 - q);
    if (iter > 0 && std::abs(estimate.seconds - previous) <=
                        1e-9 * estimate.seconds) {
      break;
    }
  }
  return estimate;
}

std::size_t DetectDirectPath(std::span<const double> samples) {
  const double peak = PeakMagnitude(samples);
  if (peak == 0.0) {
    throw Error(ErrorCode::kZeroEnergy, "no direct path in an all-zero signal");
  }
  const double threshold = kDirectThreshold * peak;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (std::abs(samples[i]) >= threshold) return i;
  }
  return 0;  // unreachable: the peak itself passes
}

DrrEstimate ComputeDrr(std::span<const double> samples, std::size_t direct_index,
                       int sample_rate) {
  if (direct_index >= samples.size()) {
    throw Error(ErrorCode::kInvalidArgument, "direct index out of range");
  }
  const std::size_t pre = MsToSamples(kDirectWindowPreMs, sample_rate);
  const std::size_t post = MsToSamples(kDirectWindowPostMs, sample_rate);
  const std::size_t lo = direct_index > pre ? direct_index - pre : 0;
  const std::size_t hi = std::min(samples.size() - 1, direct_index + post);

  double direct = 0.0;
  double reverberant = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double e = samples[i] * samples[i];
    if (i >= lo && i <= hi) {
      direct += e;
    } else {
      reverberant += e;
    }
  }
  if (!(direct > 0.0) && !(reverberant > 0.0)) {
    throw Error(ErrorCode::kZeroEnergy, "cannot compute DRR of silence");
  }
  if (!(reverberant > 0.0)) return DrrEstimate{kDrrCeilingDb, true};
  if (!(direct > 0.0)) return DrrEstimate{kDbFloor, false};
  const double db = 10.0 * std::log10(direct / reverberant);
  return DrrEstimate{std::clamp(db, kDbFloor, kDrrCeilingDb), false};
}

EchoDensityProfile EarlyReflectionProfile(std::span<const double> samples,
                                          std::size_t direct_index,
                                          int sample_rate) {
  if (direct_index >= samples.size()) {
    throw Error(ErrorCode::kInvalidArgument, "direct index out of range");
  }
  const std::size_t window = MsToSamples(kEchoWindowMs, sample_rate);
  const std::size_t span = window * kEchoWindows;

  // A fractional-delay direct path may be split over two samples.
  double direct_peak = std::abs(samples[direct_index]);
  if (direct_index + 1 < samples.size()) {
    direct_peak = std::max(direct_peak, std::abs(samples[direct_index + 1]));
  }
  const double threshold = kEchoPeakFraction * direct_peak;

  EchoDensityProfile profile;
  profile.truncated = direct_index + span > samples.size();
  const std::size_t end = std::min(samples.size(), direct_index + span);
  for (std::size_t i = direct_index; i < end; ++i) {
    const double m = std::abs(samples[i]);
    if (!(m > threshold)) continue;
    const double before = i > 0 ? std::abs(samples[i - 1]) : 0.0;
    const double after = i + 1 < samples.size() ? std::abs(samples[i + 1]) : 0.0;
    if (m > before && m >= after) {
      ++profile.counts[(i - direct_index) / window];
    }
  }
  return profile;
}

double TotalEnergyDb(const RIRecording& rir) {
  double energy = 0.0;
  for (double s : rir.samples) {
    const double physical = s * rir.norm_gain;
    energy += physical * physical;
  }
  return PowerToDb(energy);
}

AcousticMetrics Analyze(const RIRecording& rir) {
  AcousticMetrics m;
  const EnergyDecayCurve edc = SchroederEdc(rir);
  const T60Estimate t60 = EstimateT60(edc, rir.sample_rate);
  m.t60_s = t60.seconds;
  m.t60_fallback = t60.used_fallback;
  m.direct_index = DetectDirectPath(rir);
  m.geometric_distance_m = DelayToDistance(m.direct_index, rir.sample_rate);
  const DrrEstimate drr = ComputeDrr(rir, m.direct_index);
  m.drr_db = drr.db;
  m.drr_at_ceiling = drr.at_ceiling;
  m.echo_density = EarlyReflectionProfile(rir, m.direct_index);
  m.total_energy_db = TotalEnergyDb(rir);
  return m;
}

}  // namespace rirsde
