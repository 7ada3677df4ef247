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

#include "cli/common.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstring>
#include <set>
#include <unordered_map>

#include "json.hpp"
#include "rirsde/parallel.h"

namespace rirsde::cli {
namespace {

std::vector<std::string_view> SplitCommas(std::string_view text) {
  std::vector<std::string_view> parts;
  while (!text.empty()) {
    const std::size_t comma = text.find(',');
    std::string_view part = text.substr(0, comma);
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
    if (part.empty()) throw Error(ErrorCode::kInvalidArgument, "empty list element");
    parts.push_back(part);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (parts.empty()) throw Error(ErrorCode::kInvalidArgument, "empty list");
  return parts;
}

template <typename T>
T ParseNumber(std::string_view text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kInvalidArgument, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::vector<RoomId> ParseRoomList(std::string_view text) {
  std::vector<RoomId> rooms;
  std::set<RoomId> seen;
  for (std::string_view part : SplitCommas(text)) {
    const std::size_t dash = part.find('-', 1);
    RoomId lo = 0;
    RoomId hi = 0;
    if (dash == std::string_view::npos) {
      lo = hi = ParseNumber<RoomId>(part);
    } else {
      lo = ParseNumber<RoomId>(part.substr(0, dash));
      hi = ParseNumber<RoomId>(part.substr(dash + 1));
    }
    if (lo > hi) {
      throw Error(ErrorCode::kInvalidArgument, "descending room range '" + std::string(part) + "'");
    }
    for (RoomId id = lo; id <= hi; ++id) {
      if (seen.insert(id).second) rooms.push_back(id);
    }
  }
  return rooms;
}

std::vector<double> ParseDoubleList(std::string_view text) {
  std::vector<double> out;
  for (std::string_view part : SplitCommas(text)) out.push_back(ParseNumber<double>(part));
  return out;
}

std::vector<int> ParseIntList(std::string_view text) {
  std::vector<int> out;
  for (std::string_view part : SplitCommas(text)) out.push_back(ParseNumber<int>(part));
  return out;
}

std::vector<ShoeboxRoom> ResolveRooms(const std::string& spec) {
  if (!spec.ends_with(".json")) {
    std::vector<ShoeboxRoom> rooms;
    for (RoomId id : ParseRoomList(spec)) rooms.push_back(BuiltinRoom(id));
    return rooms;
  }
  const std::string text = io::ReadTextFile(spec);
  std::vector<ShoeboxRoom> rooms;
  try {
    const nlohmann::json doc = nlohmann::json::parse(text);
    for (const auto& r : doc.at("rooms")) {
      ShoeboxRoom room;
      room.room_id = r.at("room_id").get<RoomId>();
      const auto dims = r.at("dims").get<std::vector<double>>();
      if (dims.size() != 3) throw Error(ErrorCode::kInvalidArgument, "dims needs 3 values");
      room.dims = {dims[0], dims[1], dims[2]};
      room.absorption = r.at("absorption").get<double>();
      room.seed = r.value("seed", std::uint64_t{0});
      ValidateRoom(room);
      rooms.push_back(room);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, spec + ": " + e.what());
  }
  if (rooms.empty()) throw Error(ErrorCode::kInvalidArgument, spec + ": no rooms");
  return rooms;
}

DirectoryLock::DirectoryLock(const std::filesystem::path& dir) : path_(dir / ".rirsde.lock") {
  const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) {
    if (errno == EEXIST) {
      throw Error(ErrorCode::kInvalidArgument,
                  "output directory is locked by another run: " + path_.string());
    }
    throw Error(ErrorCode::kIo, "cannot create " + path_.string() + ": " + std::strerror(errno));
  }
  const std::string pid = std::to_string(::getpid()) + "\n";
  [[maybe_unused]] const ssize_t written = ::write(fd, pid.data(), pid.size());
  ::close(fd);
}

DirectoryLock::~DirectoryLock() {
  std::error_code ec;
  std::filesystem::remove(path_, ec);
}

void PrepareOutputDir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::kIo, "cannot create output directory " + dir.string() +
                                    (ec ? ": " + ec.message() : ""));
  }
}

ExitCode ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kGeometry:
    case ErrorCode::kIo:
      return kExitUsage;
    case ErrorCode::kMissingData:
    case ErrorCode::kUnknownRoom:
      return kExitMissingData;
    case ErrorCode::kSchemaMismatch:
      return kExitSchemaMismatch;
    case ErrorCode::kZeroEnergy:
    case ErrorCode::kInsufficientDecay:
    case ErrorCode::kTrainingDiverged:
      return kExitFailure;
  }
  return kExitFailure;
}

std::vector<std::string> AcceptedIds(const std::filesystem::path& decisions_dir) {
  std::vector<std::string> ids;
  for (const std::string& line : io::ReadLines(decisions_dir / kAcceptedFile)) {
    ids.push_back(io::DecisionFromJsonLine(line).rir_id);
  }
  return ids;
}

std::vector<LabeledSample> LoadLabeledSamples(const std::filesystem::path& corpus,
                                              const std::vector<std::string>& ids,
                                              const std::vector<RoomId>& rooms,
                                              unsigned threads) {
  std::unordered_map<std::string, io::RirMetadata> by_id;
  for (io::RirMetadata& meta : io::ReadMetadata(corpus)) {
    by_id.emplace(meta.rir_id, std::move(meta));
  }
  std::vector<const io::RirMetadata*> selected;
  for (const std::string& id : ids) {
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kMissingData, "recording '" + id + "' not in " + corpus.string());
    }
    if (!rooms.empty() &&
        std::find(rooms.begin(), rooms.end(), it->second.room_id) == rooms.end()) {
      continue;
    }
    selected.push_back(&it->second);
  }
  std::vector<LabeledSample> out(selected.size());
  ParallelFor(selected.size(), threads, [&](std::size_t i) {
    const RIRecording rir = io::LoadRecording(corpus, *selected[i]);
    out[i].features = ExtractFeatures(rir);
    out[i].distance_m = rir.source_receiver_distance();
    out[i].id = rir.rir_id;
  });
  return out;
}

}  // namespace rirsde::cli
