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
#include <cstdio>
#include <string>
#include <vector>

#include "cli/commands.h"
#include "cli/common.h"
#include "json.hpp"
#include "rirsde/io.h"
#include "rirsde/rng.h"
#include "rirsde/sde.h"

namespace rirsde::cli {
namespace {

using Json = nlohmann::ordered_json;

// Seed offset separating the validation split from the test holdout.
constexpr std::uint64_t kValidationSplitStream = 1;
constexpr double kTrainFraction = 0.8;

template <typename T>
std::vector<T> Gather(const std::vector<T>& data, const std::vector<std::size_t>& idx) {
  std::vector<T> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(data[i]);
  return out;
}

Json Ids(const std::vector<LabeledSample>& samples) {
  Json ids = Json::array();
  for (const LabeledSample& s : samples) ids.push_back(s.id);
  return ids;
}

std::vector<RoomId> RoomFilter(const std::string& rooms) {
  return rooms.empty() ? std::vector<RoomId>{} : ParseRoomList(rooms);
}

std::string Fixed(double value, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

std::string HistogramCsv(const std::vector<std::size_t>& counts) {
  std::string out = "bin_lo_m,bin_hi_m,count\n";
  for (std::size_t i = 0; i < counts.size(); ++i) {
    out += io::FormatNumber(i * kHistogramBinM) + "," +
           io::FormatNumber((i + 1) * kHistogramBinM) + "," + std::to_string(counts[i]) + "\n";
  }
  return out;
}

std::string BucketLabel(const RangeBucket& b) {
  return "[" + io::FormatNumber(b.lo_m) + ", " +
         (b.hi_m ? io::FormatNumber(*b.hi_m) + ")" : std::string("inf)"));
}

std::string MarkdownReport(const EvalReport& r, const std::string& title) {
  std::string md = "# " + title + "\n\n";
  md += "| samples | MAE (m) | Pearson r |\n|---:|---:|---:|\n";
  md += "| " + std::to_string(r.n_samples) + " | " + Fixed(r.mae_m) + " | " +
        (r.pearson_r ? Fixed(*r.pearson_r) : std::string("n/a")) + " |\n\n";
  md += "## Error by true distance\n\n| range (m) | n | MAE (m) |\n|---|---:|---:|\n";
  for (const RangeBucket& b : r.per_range) {
    md += "| " + BucketLabel(b) + " | " + std::to_string(b.n) + " | " +
          (b.mae_m ? Fixed(*b.mae_m) : std::string("n/a")) + " |\n";
  }
  md += "\n## Distance histograms (" + io::FormatNumber(kHistogramBinM) + " m bins)\n\n";
  md += "| bin (m) | true | predicted |\n|---|---:|---:|\n";
  const std::size_t bins = std::max(r.truth_histogram.size(), r.predicted_histogram.size());
  for (std::size_t i = 0; i < bins; ++i) {
    const auto at = [i](const std::vector<std::size_t>& h) {
      return std::to_string(i < h.size() ? h[i] : 0);
    };
    md += "| " + Fixed(i * kHistogramBinM, 1) + "-" + Fixed((i + 1) * kHistogramBinM, 1) +
          " | " + at(r.truth_histogram) + " | " + at(r.predicted_histogram) + " |\n";
  }
  return md;
}

std::string ScatterSvg(const std::vector<SamplePrediction>& samples, const EvalReport& r) {
  double hi = 1.0;
  for (const SamplePrediction& s : samples) hi = std::max({hi, s.true_m, s.predicted_m});
  hi = std::ceil(hi);
  constexpr double kSize = 400.0;
  constexpr double kPad = 40.0;
  const auto px = [&](double v) { return kPad + v / hi * kSize; };
  const auto py = [&](double v) { return kPad + kSize - v / hi * kSize; };
  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"480\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect x=\"40\" y=\"40\" width=\"400\" height=\"400\" fill=\"none\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + Fixed(px(0)) + "\" y1=\"" + Fixed(py(0)) + "\" x2=\"" + Fixed(px(hi)) +
         "\" y2=\"" + Fixed(py(hi)) + "\" stroke=\"gray\" stroke-dasharray=\"4\"/>\n";
  for (const SamplePrediction& s : samples) {
    svg += "<circle cx=\"" + Fixed(px(s.true_m), 2) + "\" cy=\"" +
           Fixed(py(std::min(s.predicted_m, hi)), 2) +
           "\" r=\"2\" fill=\"steelblue\" fill-opacity=\"0.6\"/>\n";
  }
  svg += "<text x=\"240\" y=\"470\" text-anchor=\"middle\">true distance (m)</text>\n";
  svg += "<text x=\"12\" y=\"240\" text-anchor=\"middle\" transform=\"rotate(-90 12 240)\">"
         "predicted distance (m)</text>\n";
  svg += "<text x=\"48\" y=\"58\">MAE " + Fixed(r.mae_m) + " m";
  if (r.pearson_r) svg += ", r " + Fixed(*r.pearson_r);
  svg += "</text>\n<text x=\"40\" y=\"456\">0</text>\n<text x=\"430\" y=\"456\">" +
         io::FormatNumber(hi) + "</text>\n</svg>\n";
  return svg;
}

}  // namespace

ExitCode CmdTrain(const TrainOptions& opts, std::ostream& log) {
  if (!(opts.holdout >= 0.0 && opts.holdout < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "--holdout must be in [0, 1)");
  }
  const std::vector<double> lr_grid = ParseDoubleList(opts.lr_grid);
  const std::vector<int> epoch_grid = ParseIntList(opts.epoch_grid);
  TrainConfig base;
  base.seed = opts.seed;
  base.enforce_ranges = !opts.allow_out_of_range;
  for (double lr : lr_grid) {
    if (!(lr > 0.0) || (base.enforce_ranges && (lr < kMinLearningRate || lr > kMaxLearningRate))) {
      throw Error(ErrorCode::kInvalidArgument, "learning rate " + io::FormatNumber(lr) +
                                                   " outside [1e-05, 0.001]");
    }
  }
  for (int e : epoch_grid) {
    if (e < 1 || (base.enforce_ranges && (e < kMinEpochs || e > kMaxEpochs))) {
      throw Error(ErrorCode::kInvalidArgument,
                  "epoch count " + std::to_string(e) + " outside [5, 50]");
    }
  }

  const std::vector<LabeledSample> samples = LoadLabeledSamples(
      opts.corpus, AcceptedIds(opts.decisions), RoomFilter(opts.rooms), opts.threads);
  const auto [dev_idx, test_idx] = SplitIndices(samples.size(), 1.0 - opts.holdout, opts.seed);
  const std::vector<LabeledSample> dev = Gather(samples, dev_idx);
  const std::vector<LabeledSample> test = Gather(samples, test_idx);
  const auto [train_idx, val_idx] =
      SplitIndices(dev.size(), kTrainFraction, MixSeed(opts.seed, kValidationSplitStream));
  const std::vector<LabeledSample> train = Gather(dev, train_idx);
  const std::vector<LabeledSample> val = Gather(dev, val_idx);

  PrepareOutputDir(opts.out);
  DirectoryLock lock(opts.out);

  const GridSearchResult grid =
      GridSearch(train, val, lr_grid, epoch_grid, base, opts.threads);
  const TrainResult final_fit = Train(dev, grid.best);
  for (const std::string& w : final_fit.warnings) log << "warning: " << w << "\n";

  Json split;
  split["schema_version"] = io::kSchemaVersion;
  split["seed"] = opts.seed;
  split["holdout"] = opts.holdout;
  split["train_fraction"] = kTrainFraction;
  split["train_ids"] = Ids(train);
  split["val_ids"] = Ids(val);
  split["test_ids"] = Ids(test);

  Json table = Json::array();
  for (const GridCell& cell : grid.table) {
    Json row;
    row["learning_rate"] = cell.learning_rate;
    row["epochs"] = cell.epochs;
    row["val_mae_m"] = cell.val_mae_m ? Json(*cell.val_mae_m) : Json(nullptr);
    if (cell.error) row["error"] = *cell.error;
    table.push_back(row);
  }
  Json grid_doc;
  grid_doc["schema_version"] = io::kSchemaVersion;
  grid_doc["n_train"] = train.size();
  grid_doc["n_val"] = val.size();
  grid_doc["best"] = {{"learning_rate", grid.best.learning_rate},
                      {"epochs", grid.best.epochs},
                      {"val_mae_m", grid.best_val_mae_m}};
  grid_doc["cells"] = table;
  grid_doc["final_loss_history"] = final_fit.loss_history;

  io::WriteTextFile(opts.out / kSplitFile, split.dump(2) + "\n");
  io::WriteTextFile(opts.out / kGridFile, grid_doc.dump(2) + "\n");
  io::WriteTextFile(opts.out / kModelFile, io::ModelToJson(final_fit.model));
  log << "trained on " << dev.size() << " samples (grid best lr "
      << io::FormatNumber(grid.best.learning_rate) << ", " << grid.best.epochs
      << " epochs, val MAE " << Fixed(grid.best_val_mae_m) << " m); " << test.size()
      << " held out -> " << opts.out.string() << "\n";
  return kExitOk;
}

ExitCode CmdEval(const EvalOptions& opts, std::ostream& log) {
  if (opts.zero_model == opts.model.has_value()) {
    throw Error(ErrorCode::kInvalidArgument, "give exactly one of --model or --zero-model");
  }
  const EstimatorModel model =
      opts.model ? io::ModelFromJson(io::ReadTextFile(*opts.model)) : EstimatorModel::Zero();
  if (model.feature_schema_version != kFeatureSchemaVersion) {
    throw Error(ErrorCode::kSchemaMismatch,
                "model expects feature schema " + std::to_string(model.feature_schema_version) +
                    ", extractor provides " + std::to_string(kFeatureSchemaVersion));
  }

  std::vector<std::string> ids;
  if (opts.split) {
    const std::string text = io::ReadTextFile(*opts.split);
    try {
      const Json doc = Json::parse(text);
      if (doc.at("schema_version").get<int>() != io::kSchemaVersion) {
        throw Error(ErrorCode::kSchemaMismatch, opts.split->string() + ": unsupported schema");
      }
      ids = doc.at("test_ids").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kSchemaMismatch, opts.split->string() + ": " + e.what());
    }
  } else if (opts.decisions) {
    ids = AcceptedIds(*opts.decisions);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "give --split or --decisions");
  }

  const std::vector<LabeledSample> testset =
      LoadLabeledSamples(opts.corpus, ids, RoomFilter(opts.rooms), opts.threads);
  PrepareOutputDir(opts.out);
  DirectoryLock lock(opts.out);
  const EvalReport report = Evaluate(model, testset);
  io::WriteTextFile(opts.out / kEvalFile, io::EvalReportToJson(report));
  io::WriteTextFile(opts.out / kEvalSamplesFile, io::EvalSamplesCsv(report));
  log << "evaluated " << report.n_samples << " samples: MAE " << Fixed(report.mae_m) << " m -> "
      << opts.out.string() << "\n";
  return kExitOk;
}

ExitCode CmdReport(const ReportOptions& opts, std::ostream& log) {
  const EvalReport report = io::EvalReportFromJson(io::ReadTextFile(opts.eval_dir / kEvalFile));
  std::vector<SamplePrediction> samples;
  if (opts.svg) {
    samples = io::EvalSamplesFromCsv(io::ReadTextFile(opts.eval_dir / kEvalSamplesFile));
  }
  PrepareOutputDir(opts.out);
  DirectoryLock lock(opts.out);
  io::WriteTextFile(opts.out / "report.md", MarkdownReport(report, opts.title));
  io::WriteTextFile(opts.out / "truth_histogram.csv", HistogramCsv(report.truth_histogram));
  io::WriteTextFile(opts.out / "predicted_histogram.csv",
                    HistogramCsv(report.predicted_histogram));
  if (opts.svg) io::WriteTextFile(opts.out / "scatter.svg", ScatterSvg(samples, report));
  log << "report -> " << opts.out.string() << "\n";
  return kExitOk;
}

}  // namespace rirsde::cli
