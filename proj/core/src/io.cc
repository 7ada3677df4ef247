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

#include "rirsde/io.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rirsde/error.h"
#include "rirsde/wav.h"

namespace rirsde::io {
namespace {

using Json = nlohmann::ordered_json;

Json VecToJson(const Vec3& v) { return Json::array({v.x, v.y, v.z}); }

Vec3 VecFromJson(const Json& j) {
  if (!j.is_array() || j.size() != 3) {
    throw Error(ErrorCode::kSchemaMismatch, "expected a 3-vector");
  }
  return Vec3{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

template <typename T>
Json OptionalToJson(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

template <typename T>
std::optional<T> OptionalFromJson(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

Json Parse(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kSchemaMismatch, std::string("malformed JSON: ") + e.what());
  }
}

void CheckSchema(const Json& j, const char* what) {
  if (!j.contains("schema_version") || j.at("schema_version") != kSchemaVersion) {
    throw Error(ErrorCode::kSchemaMismatch,
                std::string(what) + " has schema_version " +
                    (j.contains("schema_version") ? j.at("schema_version").dump()
                                                  : std::string("(missing)")) +
                    ", expected " + std::to_string(kSchemaVersion));
  }
}

// Wraps nlohmann type errors so callers see one error family.
template <typename Fn>
auto Guarded(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kSchemaMismatch, std::string(what) + ": " + e.what());
  }
}

template <std::size_t N>
Json ArrayToJson(const std::array<double, N>& a) {
  Json j = Json::array();
  for (double v : a) j.push_back(v);
  return j;
}

template <std::size_t N>
std::array<double, N> ArrayFromJson(const Json& j) {
  if (!j.is_array() || j.size() != N) {
    throw Error(ErrorCode::kSchemaMismatch,
                "expected an array of " + std::to_string(N) + " numbers");
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = j[i].get<double>();
  return out;
}

}  // namespace

std::string FormatNumber(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string MetadataToJsonLine(const RirMetadata& m) {
  Json j;
  j["rir_id"] = m.rir_id;
  j["room_id"] = m.room_id;
  j["source_pos"] = VecToJson(m.source_pos);
  j["receiver_pos"] = VecToJson(m.receiver_pos);
  j["norm_gain"] = m.norm_gain;
  j["seed"] = m.seed;
  return j.dump();
}

RirMetadata MetadataFromJsonLine(std::string_view line) {
  const Json j = Parse(line);
  return Guarded("metadata row", [&] {
    RirMetadata m;
    m.rir_id = j.at("rir_id").get<std::string>();
    m.room_id = j.at("room_id").get<RoomId>();
    m.source_pos = VecFromJson(j.at("source_pos"));
    m.receiver_pos = VecFromJson(j.at("receiver_pos"));
    m.norm_gain = j.at("norm_gain").get<double>();
    m.seed = j.at("seed").get<std::uint64_t>();
    return m;
  });
}

DecisionRecord MakeDecisionRecord(std::string rir_id, const FilterDecision& d) {
  DecisionRecord r;
  r.rir_id = std::move(rir_id);
  r.accepted = d.accepted;
  r.reasons = d.reasons;
  r.distance_m = d.snapshot.distance_m;
  r.error = d.error;
  if (!d.error) {
    r.t60_s = d.snapshot.metrics.t60_s;
    r.drr_db = d.snapshot.metrics.drr_db;
    r.measured_distance_m = d.snapshot.metrics.geometric_distance_m;
  }
  return r;
}

std::string DecisionToJsonLine(const DecisionRecord& r) {
  Json j;
  j["rir_id"] = r.rir_id;
  j["accepted"] = r.accepted;
  Json reasons = Json::array();
  for (RejectReason reason : r.reasons) reasons.push_back(RejectReasonName(reason));
  j["reasons"] = reasons;
  j["t60_s"] = OptionalToJson(r.t60_s);
  j["drr_db"] = OptionalToJson(r.drr_db);
  j["distance_m"] = r.distance_m;
  j["measured_distance_m"] = OptionalToJson(r.measured_distance_m);
  if (r.error) j["error"] = *r.error;
  return j.dump();
}

DecisionRecord DecisionFromJsonLine(std::string_view line) {
  const Json j = Parse(line);
  return Guarded("decision row", [&] {
    DecisionRecord r;
    r.rir_id = j.at("rir_id").get<std::string>();
    r.accepted = j.at("accepted").get<bool>();
    for (const Json& name : j.at("reasons")) {
      const auto reason = ParseRejectReason(name.get<std::string>());
      if (!reason) {
        throw Error(ErrorCode::kSchemaMismatch,
                    "unknown reject reason " + name.get<std::string>());
      }
      r.reasons.push_back(*reason);
    }
    r.t60_s = OptionalFromJson<double>(j, "t60_s");
    r.drr_db = OptionalFromJson<double>(j, "drr_db");
    r.distance_m = j.at("distance_m").get<double>();
    r.measured_distance_m = OptionalFromJson<double>(j, "measured_distance_m");
    r.error = OptionalFromJson<std::string>(j, "error");
    return r;
  });
}

std::string ProfilesToJson(const std::map<RoomId, ReferenceProfile>& profiles) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  Json rooms = Json::array();
  for (const auto& [id, p] : profiles) {
    Json room;
    room["room_id"] = id;
    room["median_t60_s"] = p.median_t60_s;
    room["median_edc_db"] = p.median_edc_db;
    room["echo_density_ref"] = ArrayToJson(p.echo_density_ref);
    room["n_enrollment"] = p.n_enrollment;
    rooms.push_back(room);
  }
  j["profiles"] = rooms;
  return j.dump(2) + "\n";
}

std::map<RoomId, ReferenceProfile> ProfilesFromJson(std::string_view text) {
  const Json j = Parse(text);
  CheckSchema(j, "profiles document");
  return Guarded("profiles document", [&] {
    std::map<RoomId, ReferenceProfile> out;
    for (const Json& room : j.at("profiles")) {
      ReferenceProfile p;
      p.room_id = room.at("room_id").get<RoomId>();
      p.median_t60_s = room.at("median_t60_s").get<double>();
      p.median_edc_db = room.at("median_edc_db").get<std::vector<double>>();
      p.echo_density_ref = ArrayFromJson<kEchoWindows>(room.at("echo_density_ref"));
      p.n_enrollment = room.at("n_enrollment").get<std::size_t>();
      out.emplace(p.room_id, std::move(p));
    }
    return out;
  });
}

std::string ModelToJson(const EstimatorModel& m) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["feature_schema_version"] = m.feature_schema_version;
  Json names = Json::array();
  for (std::size_t i = 0; i < kNumFeatures; ++i) names.push_back(FeatureName(i));
  j["feature_names"] = names;
  j["weights"] = ArrayToJson(m.weights);
  j["feature_means"] = ArrayToJson(m.feature_means);
  j["feature_stds"] = ArrayToJson(m.feature_stds);
  j["train_config"] = {{"learning_rate", m.train_config.learning_rate},
                       {"epochs", m.train_config.epochs},
                       {"seed", m.train_config.seed}};
  j["final_train_loss"] = m.final_train_loss;
  return j.dump(2) + "\n";
}

EstimatorModel ModelFromJson(std::string_view text) {
  const Json j = Parse(text);
  CheckSchema(j, "model document");
  return Guarded("model document", [&] {
    EstimatorModel m;
    m.feature_schema_version = j.at("feature_schema_version").get<int>();
    m.weights = ArrayFromJson<kNumFeatures>(j.at("weights"));
    m.feature_means = ArrayFromJson<kNumFeatures>(j.at("feature_means"));
    m.feature_stds = ArrayFromJson<kNumFeatures>(j.at("feature_stds"));
    for (double sd : m.feature_stds) {
      if (!(sd > 0.0)) {
        throw Error(ErrorCode::kSchemaMismatch, "feature_stds must be positive");
      }
    }
    const Json& tc = j.at("train_config");
    m.train_config.learning_rate = tc.at("learning_rate").get<double>();
    m.train_config.epochs = tc.at("epochs").get<int>();
    m.train_config.seed = tc.at("seed").get<std::uint64_t>();
    m.final_train_loss = j.at("final_train_loss").get<double>();
    return m;
  });
}

std::string EvalReportToJson(const EvalReport& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["n_samples"] = r.n_samples;
  j["mae_m"] = r.mae_m;
  j["pearson_r"] = OptionalToJson(r.pearson_r);
  Json buckets = Json::array();
  for (const RangeBucket& b : r.per_range) {
    buckets.push_back({{"lo_m", b.lo_m},
                       {"hi_m", OptionalToJson(b.hi_m)},
                       {"n", b.n},
                       {"mae_m", OptionalToJson(b.mae_m)}});
  }
  j["per_range"] = buckets;
  j["histogram_bin_m"] = kHistogramBinM;
  j["truth_histogram"] = r.truth_histogram;
  j["predicted_histogram"] = r.predicted_histogram;
  return j.dump(2) + "\n";
}

EvalReport EvalReportFromJson(std::string_view text) {
  const Json j = Parse(text);
  CheckSchema(j, "eval report");
  return Guarded("eval report", [&] {
    EvalReport r;
    r.n_samples = j.at("n_samples").get<std::size_t>();
    r.mae_m = j.at("mae_m").get<double>();
    r.pearson_r = OptionalFromJson<double>(j, "pearson_r");
    for (const Json& b : j.at("per_range")) {
      RangeBucket bucket;
      bucket.lo_m = b.at("lo_m").get<double>();
      bucket.hi_m = OptionalFromJson<double>(b, "hi_m");
      bucket.n = b.at("n").get<std::size_t>();
      bucket.mae_m = OptionalFromJson<double>(b, "mae_m");
      r.per_range.push_back(bucket);
    }
    r.truth_histogram = j.at("truth_histogram").get<std::vector<std::size_t>>();
    r.predicted_histogram = j.at("predicted_histogram").get<std::vector<std::size_t>>();
    return r;
  });
}

std::string EvalSamplesCsv(const EvalReport& report) {
  std::string out = "rir_id,true_m,predicted_m,residual_m\n";
  for (const SamplePrediction& s : report.samples) {
    out += s.id + "," + FormatNumber(s.true_m) + "," + FormatNumber(s.predicted_m) +
           "," + FormatNumber(s.residual_m) + "\n";
  }
  return out;
}

std::vector<SamplePrediction> EvalSamplesFromCsv(std::string_view text) {
  std::vector<SamplePrediction> out;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (std::size_t comma; (comma = line.find(',', start)) != std::string::npos;
         start = comma + 1) {
      cells.push_back(line.substr(start, comma - start));
    }
    cells.push_back(line.substr(start));
    if (cells.size() != 4) {
      throw Error(ErrorCode::kSchemaMismatch, "bad eval CSV row: " + line);
    }
    try {
      out.push_back(SamplePrediction{cells[0], std::stod(cells[1]),
                                     std::stod(cells[2]), std::stod(cells[3])});
    } catch (const std::exception&) {
      throw Error(ErrorCode::kSchemaMismatch, "bad number in eval CSV row: " + line);
    }
  }
  return out;
}

std::string ManifestToJson(const CorpusManifest& m) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["seed"] = m.seed;
  j["rooms"] = m.rooms;
  j["n_per_room"] = m.n_per_room;
  j["count"] = m.count;
  j["sample_rate"] = kSampleRate;
  j["duration_samples"] = kDurationSamples;
  return j.dump(2) + "\n";
}

CorpusManifest ManifestFromJson(std::string_view text) {
  const Json j = Parse(text);
  CheckSchema(j, "manifest");
  return Guarded("manifest", [&] {
    CorpusManifest m;
    m.seed = j.at("seed").get<std::uint64_t>();
    m.rooms = j.at("rooms").get<std::vector<RoomId>>();
    m.n_per_room = j.at("n_per_room").get<std::size_t>();
    m.count = j.at("count").get<std::size_t>();
    return m;
  });
}

RirMetadata MetadataFor(const RIRecording& rir, std::uint64_t seed) {
  RirMetadata m;
  m.rir_id = rir.rir_id;
  m.room_id = rir.room_id;
  m.source_pos = rir.source_pos;
  m.receiver_pos = rir.receiver_pos;
  m.norm_gain = rir.norm_gain;
  m.seed = seed;
  return m;
}

std::filesystem::path RecordingPath(const std::filesystem::path& dir,
                                    std::string_view rir_id) {
  return dir / kRirSubdir / (std::string(rir_id) + ".wav");
}

void WriteCorpus(const std::filesystem::path& dir,
                 std::span<const RIRecording> rirs,
                 std::span<const std::uint64_t> seeds,
                 const CorpusManifest& manifest) {
  if (seeds.size() != rirs.size()) {
    throw Error(ErrorCode::kInvalidArgument, "one seed per recording required");
  }
  std::error_code ec;
  std::filesystem::create_directories(dir / kRirSubdir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
  std::string metadata;
  for (std::size_t i = 0; i < rirs.size(); ++i) {
    WriteWavFloat32(RecordingPath(dir, rirs[i].rir_id), rirs[i].samples,
                    rirs[i].sample_rate);
    metadata += MetadataToJsonLine(MetadataFor(rirs[i], seeds[i]));
    metadata += '\n';
  }
  WriteTextFile(dir / kMetadataFile, metadata);
  WriteTextFile(dir / kManifestFile, ManifestToJson(manifest));
}

CorpusManifest ReadManifest(const std::filesystem::path& dir) {
  return ManifestFromJson(ReadTextFile(dir / kManifestFile));
}

std::vector<RirMetadata> ReadMetadata(const std::filesystem::path& dir) {
  std::vector<RirMetadata> out;
  for (const std::string& line : ReadLines(dir / kMetadataFile)) {
    out.push_back(MetadataFromJsonLine(line));
  }
  return out;
}

RIRecording LoadRecording(const std::filesystem::path& dir, const RirMetadata& meta) {
  WavData wav = ReadWav(RecordingPath(dir, meta.rir_id));
  RIRecording rir;
  rir.samples = std::move(wav.samples);
  rir.sample_rate = wav.sample_rate;
  rir.source_pos = meta.source_pos;
  rir.receiver_pos = meta.receiver_pos;
  rir.room_id = meta.room_id;
  rir.norm_gain = meta.norm_gain;
  rir.rir_id = meta.rir_id;
  try {
    ValidateRecording(rir);
  } catch (const Error& e) {
    throw Error(ErrorCode::kIo, meta.rir_id + ": " + e.what());
  }
  return rir;
}

std::vector<RIRecording> LoadCorpus(const std::filesystem::path& dir) {
  ReadManifest(dir);
  std::vector<RIRecording> out;
  for (const RirMetadata& meta : ReadMetadata(dir)) {
    out.push_back(LoadRecording(dir, meta));
  }
  return out;
}

std::string ReadTextFile(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kMissingData, path.string() + " does not exist");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

std::vector<std::string> ReadLines(const std::filesystem::path& path) {
  std::istringstream in(ReadTextFile(path));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace rirsde::io
