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

#ifndef RIRSDE_TOOLS_CLI_COMMANDS_H_
#define RIRSDE_TOOLS_CLI_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "cli/cli.h"
#include "rirsde/filter.h"

namespace rirsde::cli {

struct GenerateOptions {
  std::string rooms = "1-20";
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::filesystem::path out;
  int max_order = 8;
  unsigned threads = 0;
};

struct AnalyzeOptions {
  std::filesystem::path input;
  std::optional<std::filesystem::path> out;  // default: <input>/metrics.jsonl
  unsigned threads = 0;
};

struct FilterOptions {
  std::filesystem::path input;
  std::filesystem::path enrollment;
  std::filesystem::path out;
  FilterCriteria criteria;
  unsigned threads = 0;
};

struct TrainOptions {
  std::filesystem::path corpus;
  std::filesystem::path decisions;
  std::filesystem::path out;
  std::uint64_t seed = 0;
  std::string lr_grid = "1e-05,0.0001,0.001";
  std::string epoch_grid = "5,10,20,50";
  double holdout = 0.2;
  std::string rooms;  // empty: all rooms
  bool allow_out_of_range = false;
  unsigned threads = 0;
};

struct EvalOptions {
  std::optional<std::filesystem::path> model;
  bool zero_model = false;
  std::filesystem::path corpus;
  // Test ids come from split.json when given, else every accepted recording.
  std::optional<std::filesystem::path> split;
  std::optional<std::filesystem::path> decisions;
  std::filesystem::path out;
  std::string rooms;
  unsigned threads = 0;
};

struct ReportOptions {
  std::filesystem::path eval_dir;
  std::filesystem::path out;
  bool svg = false;
  std::string title = "Distance estimation";
};

// Each returns a process exit code; library errors propagate as exceptions.
ExitCode CmdGenerate(const GenerateOptions& opts, std::ostream& log);
ExitCode CmdAnalyze(const AnalyzeOptions& opts, std::ostream& log);
ExitCode CmdFilter(const FilterOptions& opts, std::ostream& log);
ExitCode CmdTrain(const TrainOptions& opts, std::ostream& log);
ExitCode CmdEval(const EvalOptions& opts, std::ostream& log);
ExitCode CmdReport(const ReportOptions& opts, std::ostream& log);

}  // namespace rirsde::cli

#endif  // RIRSDE_TOOLS_CLI_COMMANDS_H_
