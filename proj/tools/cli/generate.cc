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

#include <cstdio>
#include <vector>

#include "cli/commands.h"
#include "cli/common.h"
#include "rirsde/io.h"
#include "rirsde/parallel.h"
#include "rirsde/rng.h"
#include "rirsde/synth.h"

namespace rirsde::cli {

ExitCode CmdGenerate(const GenerateOptions& opts, std::ostream& log) {
  if (opts.n < 1) throw Error(ErrorCode::kInvalidArgument, "--n must be at least 1");
  if (opts.max_order < 0) throw Error(ErrorCode::kInvalidArgument, "--max-order must be >= 0");
  const std::vector<ShoeboxRoom> rooms = ResolveRooms(opts.rooms);

  SynthesisConfig config;
  config.max_image_order = opts.max_order;

  struct Job {
    ShoeboxRoom room;
    SceneQuery query;
    std::string id;
  };
  std::vector<Job> jobs;
  jobs.reserve(rooms.size() * opts.n);
  io::CorpusManifest manifest{opts.seed, {}, opts.n, 0};
  for (ShoeboxRoom room : rooms) {
    room.seed = MixSeed(room.seed, opts.seed);
    manifest.rooms.push_back(room.room_id);
    const std::vector<SceneQuery> scenes = SampleScenes(room, opts.n, opts.seed);
    for (std::size_t i = 0; i < scenes.size(); ++i) {
      char id[32];
      std::snprintf(id, sizeof(id), "r%02d_%05zu", room.room_id, i);
      jobs.push_back({room, scenes[i], id});
    }
  }
  manifest.count = jobs.size();

  PrepareOutputDir(opts.out);
  DirectoryLock lock(opts.out);

  std::vector<RIRecording> rirs(jobs.size());
  std::vector<std::uint64_t> seeds(jobs.size());
  ParallelFor(jobs.size(), opts.threads, [&](std::size_t i) {
    rirs[i] = NormalizeRir(SynthesizeRir(jobs[i].room, jobs[i].query, config));
    rirs[i].rir_id = jobs[i].id;
    seeds[i] = jobs[i].room.seed;
  });
  io::WriteCorpus(opts.out, rirs, seeds, manifest);
  log << "generated " << rirs.size() << " recordings in " << rooms.size() << " rooms -> "
      << opts.out.string() << "\n";
  return kExitOk;
}

}  // namespace rirsde::cli
