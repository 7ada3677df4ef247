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

#ifndef RIRSDE_SDE_H_
#define RIRSDE_SDE_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rirsde/types.h"

namespace rirsde {

// Bumped whenever the feature layout or definitions change.
inline constexpr int kFeatureSchemaVersion = 1;

inline constexpr std::size_t kNumFeatures = 6;

enum FeatureIndex : std::size_t {
  kFeatDrrDb = 0,
  kFeatLogT60 = 1,
  kFeatDirectDelayMs = 2,
  kFeatEarlyLateRatioDb = 3,
  kFeatTotalEnergyDb = 4,
  kFeatBias = 5,
};

std::string_view FeatureName(std::size_t index);

// Log T60 used when the recording has too little decay to measure one.
inline constexpr double kLogT60Floor = -6.907755278982137;  // log(1 ms)
// Early/late split point after the direct path.
inline constexpr double kEarlyLateSplitMs = 50.0;

struct FeatureVector {
  std::array<double, kNumFeatures> values{};
  bool t60_measured = true;
  bool drr_at_ceiling = false;

  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
};

// Composes acoustics operations; no standardization. Insufficient decay is
// not an error here: log_t60 takes kLogT60Floor and t60_measured is false.
FeatureVector ExtractFeatures(const RIRecording& rir);

struct LabeledSample {
  FeatureVector features;
  double distance_m = 0.0;
  std::string id;
};

inline constexpr double kMinLearningRate = 1e-5;
inline constexpr double kMaxLearningRate = 1e-3;
inline constexpr int kMinEpochs = 5;
inline constexpr int kMaxEpochs = 50;

struct TrainConfig {
  double learning_rate = 1e-4;
  int epochs = 20;
  std::uint64_t seed = 0;
  // When false, learning rate and epochs outside the tuned ranges are allowed.
  bool enforce_ranges = true;
};

struct EstimatorModel {
  std::array<double, kNumFeatures> weights{};
  std::array<double, kNumFeatures> feature_means{};
  std::array<double, kNumFeatures> feature_stds{};
  TrainConfig train_config;
  double final_train_loss = 0.0;  // mean squared error, m^2
  int feature_schema_version = kFeatureSchemaVersion;

  // Zero weights with identity standardization.
  static EstimatorModel Zero();
};

struct TrainResult {
  EstimatorModel model;
  // MSE before the first epoch and after each one (epochs + 1 entries).
  std::vector<double> loss_history;
  std::vector<std::string> warnings;
};

// Standardized design matrix, one row per sample, bias column left at 1.
using DesignMatrix = std::vector<std::array<double, kNumFeatures>>;

// Mean squared error of the linear predictor w . z against y (no clamping).
double MseLoss(std::span<const double, kNumFeatures> weights,
               const DesignMatrix& z, std::span<const double> y);
// Analytic gradient of MseLoss with respect to the weights.
std::array<double, kNumFeatures> MseGradient(
    std::span<const double, kNumFeatures> weights, const DesignMatrix& z,
    std::span<const double> y);

// Standardization statistics of a dataset. Zero-variance columns get std 1
// and a warning; the bias column is never standardized.
void FitStandardization(std::span<const LabeledSample> data, EstimatorModel& model,
                        std::vector<std::string>* warnings);
DesignMatrix Standardize(const EstimatorModel& model,
                         std::span<const LabeledSample> data);

// Full-batch gradient descent from zero weights for exactly `epochs` steps.
// Each step moves by learning_rate times the summed per-sample gradient
// (the gradient of the total squared error), so one epoch applies every
// sample's contribution once. Throws Error(kTrainingDiverged) if the loss
// stops being finite or grows past 1e12 times its initial value.
TrainResult Train(std::span<const LabeledSample> data, const TrainConfig& config);

// Standardized dot product, clamped below at 0 m.
double Predict(const EstimatorModel& model, const FeatureVector& features);
// Dimension-checked variant for raw vectors.
double Predict(const EstimatorModel& model, std::span<const double> features);

struct RangeBucket {
  double lo_m = 0.0;
  std::optional<double> hi_m;  // absent: unbounded
  std::size_t n = 0;
  std::optional<double> mae_m;  // absent when the bucket is empty
};

struct SamplePrediction {
  std::string id;
  double true_m = 0.0;
  double predicted_m = 0.0;
  double residual_m = 0.0;  // predicted - true
};

inline constexpr double kHistogramBinM = 0.5;

struct EvalReport {
  double mae_m = 0.0;
  std::optional<double> pearson_r;
  std::vector<RangeBucket> per_range;
  std::size_t n_samples = 0;
  std::vector<std::size_t> predicted_histogram;  // 0.5 m bins from 0
  std::vector<std::size_t> truth_histogram;
  std::vector<SamplePrediction> samples;
};

// Bucket edges: [0, 1), [1, 3), [3, 5), [5, inf) meters.
std::vector<RangeBucket> EmptyRangeBuckets();

// Counts in 0.5 m bins starting at 0; the last bin holds the maximum.
std::vector<std::size_t> DistanceHistogram(std::span<const double> distances,
                                           std::size_t min_bins = 0);

EvalReport Evaluate(const EstimatorModel& model,
                    std::span<const LabeledSample> testset);

// Builds the report from precomputed predictions (same order as truths).
EvalReport EvaluatePredictions(std::span<const SamplePrediction> predictions);

struct GridCell {
  double learning_rate = 0.0;
  int epochs = 0;
  std::optional<double> val_mae_m;
  std::optional<std::string> error;
};

struct GridSearchResult {
  TrainConfig best;
  double best_val_mae_m = 0.0;
  std::vector<GridCell> table;  // lr-major, in grid order
};

inline constexpr std::array<double, 3> kDefaultLearningRateGrid = {1e-5, 1e-4, 1e-3};
inline constexpr std::array<int, 4> kDefaultEpochGrid = {5, 10, 20, 50};

// One model per (lr, epochs) cell, cells trained concurrently. The minimum
// validation MAE wins; ties go to fewer epochs, then to the smaller rate. A
// failing cell is recorded in the table and skipped; throws only when every
// cell fails.
GridSearchResult GridSearch(std::span<const LabeledSample> train_set,
                            std::span<const LabeledSample> val_set,
                            std::span<const double> lr_grid,
                            std::span<const int> epoch_grid,
                            const TrainConfig& base = {}, unsigned threads = 0);

// Deterministic shuffled index split; the first part holds
// round(train_fraction * n) indices. Throws for n < 5.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> SplitIndices(
    std::size_t n, double train_fraction, std::uint64_t seed);

template <typename T>
std::pair<std::vector<T>, std::vector<T>> SplitDataset(std::span<const T> data,
                                                       double train_fraction,
                                                       std::uint64_t seed) {
  auto [train_idx, val_idx] = SplitIndices(data.size(), train_fraction, seed);
  std::pair<std::vector<T>, std::vector<T>> out;
  out.first.reserve(train_idx.size());
  out.second.reserve(val_idx.size());
  for (std::size_t i : train_idx) out.first.push_back(data[i]);
  for (std::size_t i : val_idx) out.second.push_back(data[i]);
  return out;
}

}  // namespace rirsde

#endif  // RIRSDE_SDE_H_
