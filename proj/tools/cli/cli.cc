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

#include "cli/cli.h"

#include <exception>

#include "CLI11.hpp"
#include "cli/commands.h"
#include "cli/common.h"

namespace rirsde::cli {
namespace {

void AddThreads(CLI::App* cmd, unsigned& threads) {
  cmd->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Room impulse response synthesis, quality filtering and distance estimation",
               "rirsde"};
  app.require_subcommand(1);

  GenerateOptions gen;
  CLI::App* generate = app.add_subcommand("generate", "Synthesize a seeded RIR corpus");
  generate->add_option("--rooms", gen.rooms, "Room ids (e.g. 1-20 or 1,4,7) or a rooms JSON file")
      ->capture_default_str();
  generate->add_option("-n,--n", gen.n, "Recordings per room (>= 1)")->required();
  generate->add_option("--seed", gen.seed, "Corpus seed")->capture_default_str();
  generate->add_option("-o,--out", gen.out, "Output directory")->required();
  generate->add_option("--max-order", gen.max_order, "Image-source reflection order")
      ->capture_default_str();
  AddThreads(generate, gen.threads);

  AnalyzeOptions ana;
  std::string ana_out;
  CLI::App* analyze = app.add_subcommand("analyze", "Write per-recording acoustic metrics");
  analyze->add_option("-i,--input", ana.input, "Corpus directory")->required();
  analyze->add_option("-o,--out", ana_out, "Metrics JSONL path (default <input>/metrics.jsonl)");
  AddThreads(analyze, ana.threads);

  FilterOptions fil;
  CLI::App* filter = app.add_subcommand("filter", "Quality-filter a corpus against enrollment");
  filter->add_option("-i,--input", fil.input, "Corpus directory to filter")->required();
  filter->add_option("-e,--enrollment", fil.enrollment, "Enrollment corpus (>= 2 per room)")
      ->required();
  filter->add_option("-o,--out", fil.out, "Output directory")->required();
  filter->add_option("--t60-tol", fil.criteria.t60_rel_tolerance,
                     "Relative T60 band around the room median (0.2 = +/-20%)")
      ->capture_default_str();
  filter->add_option("--t60-cutoff", fil.criteria.t60_hard_cutoff_s,
                     "Reject T60 above this many seconds")
      ->capture_default_str();
  filter->add_option("--dist-min", fil.criteria.dist_min_m,
                     "Reject source-receiver distances below this (m)")
      ->capture_default_str();
  filter->add_option("--dist-max", fil.criteria.dist_max_m,
                     "Reject source-receiver distances above this (m)")
      ->capture_default_str();
  filter->add_option("--edc-dev", fil.criteria.edc_max_rms_dev_db,
                     "Max RMS decay-curve deviation from the room median (dB)")
      ->capture_default_str();
  filter->add_option("--echo-dev", fil.criteria.echo_density_max_rel_dev,
                     "Max relative early echo-count deviation from the room median")
      ->capture_default_str();
  AddThreads(filter, fil.threads);

  TrainOptions trn;
  CLI::App* train = app.add_subcommand("train", "Grid-search and fit the distance estimator");
  train->add_option("-c,--corpus", trn.corpus, "Corpus directory")->required();
  train->add_option("-d,--decisions", trn.decisions, "Filter output directory")->required();
  train->add_option("-o,--out", trn.out, "Output directory")->required();
  train->add_option("--seed", trn.seed, "Split seed")->capture_default_str();
  train->add_option("--lr-grid", trn.lr_grid, "Learning rates, comma separated")
      ->capture_default_str();
  train->add_option("--epoch-grid", trn.epoch_grid, "Epoch counts, comma separated")
      ->capture_default_str();
  train->add_option("--holdout", trn.holdout, "Fraction held out as the test set")
      ->capture_default_str();
  train->add_option("--rooms", trn.rooms, "Restrict training to these room ids");
  train->add_flag("--allow-out-of-range", trn.allow_out_of_range,
                  "Permit grid values outside lr [1e-5, 1e-3] and epochs [5, 50]");
  AddThreads(train, trn.threads);

  EvalOptions evl;
  std::string evl_model;
  std::string evl_split;
  std::string evl_decisions;
  CLI::App* eval = app.add_subcommand("eval", "Evaluate a model on held-out recordings");
  auto* model_opt = eval->add_option("-m,--model", evl_model, "Model JSON");
  auto* zero_opt = eval->add_flag("--zero-model", evl.zero_model, "Evaluate the all-zero model");
  model_opt->excludes(zero_opt);
  eval->add_option("-c,--corpus", evl.corpus, "Corpus directory")->required();
  auto* split_opt = eval->add_option("--split", evl_split, "split.json from train (test ids)");
  auto* dec_opt = eval->add_option("-d,--decisions", evl_decisions,
                                   "Filter output directory (all accepted recordings)");
  split_opt->excludes(dec_opt);
  eval->add_option("-o,--out", evl.out, "Output directory")->required();
  eval->add_option("--rooms", evl.rooms, "Restrict evaluation to these room ids");
  AddThreads(eval, evl.threads);

  ReportOptions rep;
  CLI::App* report = app.add_subcommand("report", "Render tables and plots from eval output");
  report->add_option("-e,--eval", rep.eval_dir, "Eval output directory")->required();
  report->add_option("-o,--out", rep.out, "Output directory")->required();
  report->add_flag("--svg", rep.svg, "Also write a predicted-vs-true scatter plot");
  report->add_option("--title", rep.title, "Report heading")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*generate) return CmdGenerate(gen, out);
    if (*analyze) {
      if (!ana_out.empty()) ana.out = ana_out;
      return CmdAnalyze(ana, out);
    }
    if (*filter) return CmdFilter(fil, out);
    if (*train) return CmdTrain(trn, out);
    if (*eval) {
      if (!evl_model.empty()) evl.model = evl_model;
      if (!evl_split.empty()) evl.split = evl_split;
      if (!evl_decisions.empty()) evl.decisions = evl_decisions;
      return CmdEval(evl, out);
    }
    if (*report) return CmdReport(rep, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("rirsde");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return Run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace rirsde::cli
