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

#include "rirsde/sde.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rirsde/parallel.h"
#include "rirsde/acoustics.h"
#include "rirsde/error.h"
#include "rirsde/rng.h"

namespace rirsde {
namespace {

constexpr double kDivergenceFactor = 1e12;

std::array<double, kNumFeatures> StandardizeRow(const EstimatorModel& model,
                                                const FeatureVector& f) {
  std::array<double, kNumFeatures> z{};
  for (std::size_t j = 0; j < kNumFeatures; ++j) {
    z[j] = (f[j] - model.feature_means[j]) / model.feature_stds[j];
  }
  return z;
}

double Dot(std::span<const double, kNumFeatures> w,
           const std::array<double, kNumFeatures>& z) {
  double acc = 0.0;
  for (std::size_t j = 0; j < kNumFeatures; ++j) acc += w[j] * z[j];
  return acc;
}

void CheckTrainConfig(const TrainConfig& config) {
  if (config.epochs < 1) {
    throw Error(ErrorCode::kInvalidArgument, "epochs must be >= 1");
  }
  if (!(config.learning_rate > 0.0) || !std::isfinite(config.learning_rate)) {
    throw Error(ErrorCode::kInvalidArgument, "learning rate must be positive");
  }
  if (!config.enforce_ranges) return;
  if (config.learning_rate < kMinLearningRate ||
      config.learning_rate > kMaxLearningRate) {
    throw Error(ErrorCode::kInvalidArgument,
                "learning rate outside [1e-5, 1e-3]: " +
                    std::to_string(config.learning_rate));
  }
  if (config.epochs < kMinEpochs || config.epochs > kMaxEpochs) {
    throw Error(ErrorCode::kInvalidArgument,
                "epochs outside [5, 50]: " + std::to_string(config.epochs));
  }
}

}  // namespace

std::string_view FeatureName(std::size_t index) {
  switch (index) {
    case kFeatDrrDb:
      return "drr_db";
    case kFeatLogT60:
      return "log_t60";
    case kFeatDirectDelayMs:
      return "direct_delay_ms";
    case kFeatEarlyLateRatioDb:
      return "early_late_ratio_db";
    case kFeatTotalEnergyDb:
      return "total_energy_db";
    case kFeatBias:
      return "bias";
    default:
      return "unknown";
  }
}

FeatureVector ExtractFeatures(const RIRecording& rir) {
  FeatureVector f;
  const std::size_t direct = DetectDirectPath(rir);
  const DrrEstimate drr = ComputeDrr(rir, direct);
  f[kFeatDrrDb] = drr.db;
  f.drr_at_ceiling = drr.at_ceiling;

  try {
    f[kFeatLogT60] = std::log(EstimateT60(SchroederEdc(rir), rir.sample_rate).seconds);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInsufficientDecay) throw;
    f[kFeatLogT60] = kLogT60Floor;
    f.t60_measured = false;
  }

  f[kFeatDirectDelayMs] =
      static_cast<double>(direct) * 1000.0 / static_cast<double>(rir.sample_rate);

  const auto split = direct + static_cast<std::size_t>(std::lround(
                                  kEarlyLateSplitMs * 1e-3 * rir.sample_rate));
  double early = 0.0;
  double late = 0.0;
  for (std::size_t i = direct; i < rir.samples.size(); ++i) {
    const double e = rir.samples[i] * rir.samples[i];
    (i < split ? early : late) += e;
  }
  if (!(late > 0.0)) {
    f[kFeatEarlyLateRatioDb] = kDrrCeilingDb;
  } else {
    f[kFeatEarlyLateRatioDb] =
        std::clamp(PowerToDb(early / late), kDbFloor, kDrrCeilingDb);
  }

  f[kFeatTotalEnergyDb] = TotalEnergyDb(rir);
  f[kFeatBias] = 1.0;
  return f;
}

EstimatorModel EstimatorModel::Zero() {
  EstimatorModel m;
  m.feature_stds.fill(1.0);
  return m;
}

double MseLoss(std::span<const double, kNumFeatures> weights,
               const DesignMatrix& z, std::span<const double> y) {
  if (z.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double r = Dot(weights, z[i]) - y[i];
    acc += r * r;
  }
  return acc / static_cast<double>(z.size());
}

std::array<double, kNumFeatures> MseGradient(
    std::span<const double, kNumFeatures> weights, const DesignMatrix& z,
    std::span<const double> y) {
  std::array<double, kNumFeatures> grad{};
  if (z.empty()) return grad;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double r = Dot(weights, z[i]) - y[i];
    for (std::size_t j = 0; j < kNumFeatures; ++j) grad[j] += 2.0 * r * z[i][j];
  }
  const double inv_n = 1.0 / static_cast<double>(z.size());
  for (double& g : grad) g *= inv_n;
  return grad;
}

void FitStandardization(std::span<const LabeledSample> data, EstimatorModel& model,
                        std::vector<std::string>* warnings) {
  const double n = static_cast<double>(data.size());
  for (std::size_t j = 0; j < kNumFeatures; ++j) {
    if (j == kFeatBias) {
      model.feature_means[j] = 0.0;
      model.feature_stds[j] = 1.0;
      continue;
    }
    double mean = 0.0;
    for (const LabeledSample& s : data) mean += s.features[j];
    mean /= n;
    double var = 0.0;
    for (const LabeledSample& s : data) {
      const double d = s.features[j] - mean;
      var += d * d;
    }
    const double sd = std::sqrt(var / n);
    model.feature_means[j] = mean;
    if (sd > 0.0 && std::isfinite(sd)) {
      model.feature_stds[j] = sd;
    } else {
      model.feature_stds[j] = 1.0;
      if (warnings != nullptr) {
        warnings->push_back("feature '" + std::string(FeatureName(j)) +
                            "' has zero variance; std clamped to 1");
      }
    }
  }
}

DesignMatrix Standardize(const EstimatorModel& model,
                         std::span<const LabeledSample> data) {
  DesignMatrix z;
  z.reserve(data.size());
  for (const LabeledSample& s : data) z.push_back(StandardizeRow(model, s.features));
  return z;
}

TrainResult Train(std::span<const LabeledSample> data, const TrainConfig& config) {
  CheckTrainConfig(config);
  if (data.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "training set is empty");
  }
  TrainResult result;
  EstimatorModel& model = result.model;
  model = EstimatorModel::Zero();
  model.train_config = config;
  FitStandardization(data, model, &result.warnings);

  const DesignMatrix z = Standardize(model, data);
  std::vector<double> y(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) y[i] = data[i].distance_m;

  // The summed gradient is n times the mean gradient.
  const double step = config.learning_rate * static_cast<double>(data.size());
  std::array<double, kNumFeatures>& w = model.weights;
  const double initial = MseLoss(w, z, y);
  result.loss_history.reserve(static_cast<std::size_t>(config.epochs) + 1);
  result.loss_history.push_back(initial);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const std::array<double, kNumFeatures> grad = MseGradient(w, z, y);
    for (std::size_t j = 0; j < kNumFeatures; ++j) w[j] -= step * grad[j];
    const double loss = MseLoss(w, z, y);
    if (!std::isfinite(loss) || loss > kDivergenceFactor * std::max(initial, 1.0)) {
      throw Error(ErrorCode::kTrainingDiverged,
                  "loss diverged at epoch " + std::to_string(epoch + 1) +
                      " with learning rate " + std::to_string(config.learning_rate));
    }
    result.loss_history.push_back(loss);
  }
  model.final_train_loss = result.loss_history.back();
  return result;
}

double Predict(const EstimatorModel& model, const FeatureVector& features) {
  const double raw = Dot(model.weights, StandardizeRow(model, features));
  return std::max(0.0, raw);
}

double Predict(const EstimatorModel& model, std::span<const double> features) {
  if (features.size() != kNumFeatures) {
    throw Error(ErrorCode::kInvalidArgument,
                "feature dimension " + std::to_string(features.size()) +
                    " does not match model dimension " +
                    std::to_string(kNumFeatures));
  }
  FeatureVector f;
  std::copy(features.begin(), features.end(), f.values.begin());
  return Predict(model, f);
}

std::vector<RangeBucket> EmptyRangeBuckets() {
  return {RangeBucket{0.0, 1.0, 0, std::nullopt},
          RangeBucket{1.0, 3.0, 0, std::nullopt},
          RangeBucket{3.0, 5.0, 0, std::nullopt},
          RangeBucket{5.0, std::nullopt, 0, std::nullopt}};
}

std::vector<std::size_t> DistanceHistogram(std::span<const double> distances,
                                           std::size_t min_bins) {
  std::size_t bins = min_bins;
  for (double d : distances) {
    const auto b = static_cast<std::size_t>(std::max(0.0, d) / kHistogramBinM);
    bins = std::max(bins, b + 1);
  }
  std::vector<std::size_t> hist(bins, 0);
  for (double d : distances) {
    ++hist[static_cast<std::size_t>(std::max(0.0, d) / kHistogramBinM)];
  }
  return hist;
}

EvalReport EvaluatePredictions(std::span<const SamplePrediction> predictions) {
  if (predictions.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "test set is empty");
  }
  EvalReport report;
  report.n_samples = predictions.size();
  report.samples.assign(predictions.begin(), predictions.end());
  report.per_range = EmptyRangeBuckets();

  const double n = static_cast<double>(predictions.size());
  std::vector<double> bucket_sum(report.per_range.size(), 0.0);
  double abs_sum = 0.0;
  double mean_p = 0.0;
  double mean_t = 0.0;
  for (const SamplePrediction& s : predictions) {
    const double err = std::abs(s.residual_m);
    abs_sum += err;
    mean_p += s.predicted_m;
    mean_t += s.true_m;
    for (std::size_t b = 0; b < report.per_range.size(); ++b) {
      const RangeBucket& bucket = report.per_range[b];
      if (s.true_m >= bucket.lo_m && (!bucket.hi_m || s.true_m < *bucket.hi_m)) {
        ++report.per_range[b].n;
        bucket_sum[b] += err;
        break;
      }
    }
  }
  report.mae_m = abs_sum / n;
  for (std::size_t b = 0; b < report.per_range.size(); ++b) {
    if (report.per_range[b].n > 0) {
      report.per_range[b].mae_m =
          bucket_sum[b] / static_cast<double>(report.per_range[b].n);
    }
  }

  mean_p /= n;
  mean_t /= n;
  double spp = 0.0;
  double stt = 0.0;
  double spt = 0.0;
  for (const SamplePrediction& s : predictions) {
    const double dp = s.predicted_m - mean_p;
    const double dt = s.true_m - mean_t;
    spp += dp * dp;
    stt += dt * dt;
    spt += dp * dt;
  }
  if (spp > 0.0 && stt > 0.0) {
    report.pearson_r = std::clamp(spt / std::sqrt(spp * stt), -1.0, 1.0);
  }

  std::vector<double> preds;
  std::vector<double> truths;
  preds.reserve(predictions.size());
  truths.reserve(predictions.size());
  for (const SamplePrediction& s : predictions) {
    preds.push_back(s.predicted_m);
    truths.push_back(s.true_m);
  }
  report.predicted_histogram = DistanceHistogram(preds);
  report.truth_histogram = DistanceHistogram(truths);
  const std::size_t bins =
      std::max(report.predicted_histogram.size(), report.truth_histogram.size());
  report.predicted_histogram.resize(bins, 0);
  report.truth_histogram.resize(bins, 0);
  return report;
}

EvalReport Evaluate(const EstimatorModel& model,
                    std::span<const LabeledSample> testset) {
  std::vector<SamplePrediction> predictions;
  predictions.reserve(testset.size());
  for (const LabeledSample& s : testset) {
    const double p = Predict(model, s.features);
    predictions.push_back(SamplePrediction{s.id, s.distance_m, p, p - s.distance_m});
  }
  return EvaluatePredictions(predictions);
}

GridSearchResult GridSearch(std::span<const LabeledSample> train_set,
                            std::span<const LabeledSample> val_set,
                            std::span<const double> lr_grid,
                            std::span<const int> epoch_grid,
                            const TrainConfig& base, unsigned threads) {
  if (lr_grid.empty() || epoch_grid.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "grids must be nonempty");
  }
  if (val_set.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "validation set is empty");
  }
  GridSearchResult result;
  for (double lr : lr_grid) {
    for (int epochs : epoch_grid) {
      result.table.push_back(GridCell{lr, epochs, std::nullopt, std::nullopt});
    }
  }
  ParallelFor(result.table.size(), threads, [&](std::size_t i) {
    GridCell& cell = result.table[i];
    TrainConfig config = base;
    config.learning_rate = cell.learning_rate;
    config.epochs = cell.epochs;
    try {
      const TrainResult trained = Train(train_set, config);
      cell.val_mae_m = Evaluate(trained.model, val_set).mae_m;
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  });

  const GridCell* best = nullptr;
  for (const GridCell& cell : result.table) {
    if (!cell.val_mae_m) continue;
    if (best == nullptr || *cell.val_mae_m < *best->val_mae_m ||
        (*cell.val_mae_m == *best->val_mae_m &&
         (cell.epochs < best->epochs ||
          (cell.epochs == best->epochs && cell.learning_rate < best->learning_rate)))) {
      best = &cell;
    }
  }
  if (best == nullptr) {
    throw Error(ErrorCode::kTrainingDiverged, "every grid cell failed");
  }
  result.best = base;
  result.best.learning_rate = best->learning_rate;
  result.best.epochs = best->epochs;
  result.best_val_mae_m = *best->val_mae_m;
  return result;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> SplitIndices(
    std::size_t n, double train_fraction, std::uint64_t seed) {
  if (n < 5) {
    throw Error(ErrorCode::kInvalidArgument,
                "dataset of " + std::to_string(n) + " is too small to split");
  }
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "train fraction must lie in (0, 1)");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::swap(order[i], order[rng.Below(i + 1)]);
  }
  const auto n_train = static_cast<std::size_t>(
      std::floor(train_fraction * static_cast<double>(n) + 0.5));
  std::pair<std::vector<std::size_t>, std::vector<std::size_t>> out;
  out.first.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.second.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  return out;
}

}  // namespace rirsde
