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

#include "rirsde/filter.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "rirsde/acoustics.h"
#include "rirsde/error.h"
#include "rirsde/synth.h"
#include "support/fixtures.h"

namespace rirsde {
namespace {

using testing::CraftedRirSpec;
using testing::MakeCraftedRir;
using testing::MakeFilterFixture;

std::map<RoomId, ReferenceProfile> ProfilesFor(const std::vector<RIRecording>& enrollment) {
  std::map<RoomId, std::vector<RIRecording>> by_room;
  for (const RIRecording& r : enrollment) by_room[r.room_id].push_back(r);
  std::map<RoomId, ReferenceProfile> out;
  for (const auto& [room, rirs] : by_room) out.emplace(room, BuildReferenceProfile(rirs));
  return out;
}

std::set<std::size_t> AcceptedSet(const BatchFilterResult& r) {
  return {r.accepted.begin(), r.accepted.end()};
}

TEST(FilterCriteria, DefaultsMatchPublishedConstants) {
  const FilterCriteria c;
  EXPECT_DOUBLE_EQ(c.t60_rel_tolerance, 0.20);
  EXPECT_DOUBLE_EQ(c.t60_hard_cutoff_s, 1.8695);
  EXPECT_DOUBLE_EQ(c.dist_min_m, 0.8);
  EXPECT_DOUBLE_EQ(c.dist_max_m, 7.1);
  EXPECT_DOUBLE_EQ(c.edc_max_rms_dev_db, 6.0);
  EXPECT_DOUBLE_EQ(c.echo_density_max_rel_dev, 0.5);
  EXPECT_NO_THROW(ValidateCriteria(c));
}

TEST(FilterCriteria, Validation) {
  FilterCriteria c;
  c.dist_min_m = 8.0;
  EXPECT_THROW(ValidateCriteria(c), Error);
  c = {};
  c.t60_rel_tolerance = 0.0;
  EXPECT_THROW(ValidateCriteria(c), Error);
  c = {};
  c.edc_max_rms_dev_db = -1.0;
  EXPECT_THROW(ValidateCriteria(c), Error);
}

TEST(RejectReason, NamesRoundTrip) {
  for (RejectReason r : kAllRejectReasons) {
    EXPECT_EQ(ParseRejectReason(RejectReasonName(r)), r);
  }
  EXPECT_EQ(RejectReasonName(RejectReason::kT60AboveCutoff), "T60_ABOVE_CUTOFF");
  EXPECT_FALSE(ParseRejectReason("NOT_A_REASON").has_value());
}

TEST(BuildReferenceProfile, DuplicatesReproduceTheirMetrics) {
  const RIRecording rir = MakeCraftedRir({.id = "a", .distance_m = 2.0, .t60_s = 0.6});
  const ReferenceProfile p = BuildReferenceProfile(std::vector<RIRecording>{rir, rir});
  const AcousticMetrics m = Analyze(rir);
  EXPECT_DOUBLE_EQ(p.median_t60_s, m.t60_s);
  EXPECT_EQ(p.n_enrollment, 2u);
  ASSERT_EQ(p.median_edc_db.size(), static_cast<std::size_t>(kEdcGridPoints));
  const std::vector<double> grid =
      ResampledEdc(SchroederEdc(rir), m.direct_index, rir.sample_rate);
  EXPECT_EQ(p.median_edc_db, grid);
  for (int w = 0; w < kEchoWindows; ++w) {
    EXPECT_DOUBLE_EQ(p.echo_density_ref[w], m.echo_density.counts[w]);
  }
}

TEST(BuildReferenceProfile, MedianT60) {
  std::vector<RIRecording> rirs;
  std::vector<double> measured;
  for (double t60 : {0.4, 0.5, 0.9}) {
    rirs.push_back(MakeCraftedRir({.id = "x", .distance_m = 2.0, .t60_s = t60}));
    measured.push_back(Analyze(rirs.back()).t60_s);
  }
  EXPECT_DOUBLE_EQ(BuildReferenceProfile(rirs).median_t60_s, measured[1]);
  EXPECT_NEAR(measured[1], 0.5, 0.05);
}

TEST(BuildReferenceProfile, SynthesizedRoomNearSabine) {
  const ShoeboxRoom room = BuiltinRoom(4);
  std::vector<RIRecording> rirs;
  for (const SceneQuery& q : SampleScenes(room, 20, 3)) {
    rirs.push_back(NormalizeRir(SynthesizeRir(room, q)));
  }
  const ReferenceProfile p = BuildReferenceProfile(rirs);
  EXPECT_NEAR(p.median_t60_s, SabineT60(room), 0.2 * SabineT60(room));
  EXPECT_EQ(p.room_id, 4);
}

TEST(BuildReferenceProfile, Errors) {
  const RIRecording a = MakeCraftedRir({.id = "a", .room = 1});
  const RIRecording b = MakeCraftedRir({.id = "b", .room = 2});
  EXPECT_THROW(BuildReferenceProfile(std::vector<RIRecording>{a}), Error);
  EXPECT_THROW(BuildReferenceProfile(std::vector<RIRecording>{a, b}), Error);
}

TEST(ApplyQualityFilter, LongDecayAgainstShortProfile) {
  const RIRecording ref = MakeCraftedRir({.id = "r", .distance_m = 3.0, .t60_s = 1.0});
  const ReferenceProfile p =
      BuildReferenceProfile(std::vector<RIRecording>{ref, MakeCraftedRir({.id = "s",
                                                                          .distance_m = 3.0,
                                                                          .t60_s = 1.0,
                                                                          .seed = 2})});
  const RIRecording slow = MakeCraftedRir({.id = "t", .distance_m = 3.0, .t60_s = 2.0});
  const FilterDecision d = ApplyQualityFilter(slow, p, {});
  EXPECT_FALSE(d.accepted);
  EXPECT_TRUE(d.Has(RejectReason::kT60OutOfBand));
  EXPECT_TRUE(d.Has(RejectReason::kT60AboveCutoff));
}

TEST(ApplyQualityFilter, DistanceBounds) {
  const RIRecording ref = MakeCraftedRir({.id = "r", .distance_m = 3.0});
  const ReferenceProfile p = BuildReferenceProfile(std::vector<RIRecording>{ref, ref});
  const FilterDecision close =
      ApplyQualityFilter(MakeCraftedRir({.id = "c", .distance_m = 0.5}), p, {});
  EXPECT_EQ(close.reasons, std::vector<RejectReason>{RejectReason::kDistanceTooClose});
  const FilterDecision far =
      ApplyQualityFilter(MakeCraftedRir({.id = "f", .distance_m = 7.5}), p, {});
  EXPECT_TRUE(far.Has(RejectReason::kDistanceTooFar));
  EXPECT_FALSE(far.accepted);
}

TEST(ApplyQualityFilter, SelfConsistency) {
  const RIRecording rir = MakeCraftedRir({.id = "e", .distance_m = 2.5, .t60_s = 0.7});
  const ReferenceProfile p = BuildReferenceProfile(std::vector<RIRecording>{rir, rir});
  const FilterDecision d = ApplyQualityFilter(rir, p, {});
  EXPECT_TRUE(d.accepted);
  EXPECT_TRUE(d.reasons.empty());
  EXPECT_NEAR(d.snapshot.edc_rms_dev_db, 0.0, 1e-12);
}

TEST(ApplyQualityFilter, MetricFailureIsARejection) {
  const RIRecording ref = MakeCraftedRir({.id = "r", .distance_m = 3.0});
  const ReferenceProfile p = BuildReferenceProfile(std::vector<RIRecording>{ref, ref});
  RIRecording silent = MakeCraftedRir({.id = "z", .distance_m = 0.5});
  std::fill(silent.samples.begin(), silent.samples.end(), 0.0);
  FilterDecision d;
  ASSERT_NO_THROW(d = ApplyQualityFilter(silent, p, {}));
  EXPECT_FALSE(d.accepted);
  EXPECT_TRUE(d.error.has_value());
  EXPECT_TRUE(d.Has(RejectReason::kMetricExtractionFailed));
  EXPECT_TRUE(d.Has(RejectReason::kDistanceTooClose));
}

TEST(FilterBatch, CraftedCorpus) {
  const auto fx = MakeFilterFixture();
  ASSERT_EQ(fx.corpus.size(), 8u);
  const BatchFilterResult r = FilterBatch(fx.corpus, ProfilesFor(fx.enrollment), {});
  ASSERT_TRUE(r.yield.has_value());
  EXPECT_DOUBLE_EQ(*r.yield, 0.25);
  EXPECT_EQ(r.accepted.size() + r.rejected.size(), fx.corpus.size());
  for (const RejectedRecording& rej : r.rejected) {
    EXPECT_EQ(rej.decision.reasons, fx.expected[rej.index]) << fx.corpus[rej.index].rir_id;
  }
  for (std::size_t i : r.accepted) EXPECT_TRUE(fx.expected[i].empty());
  for (RejectReason reason : kAllRejectReasons) {
    if (reason == RejectReason::kMetricExtractionFailed) continue;
    EXPECT_GE(r.reason_histogram.count(reason) ? r.reason_histogram.at(reason) : 0, 1u)
        << RejectReasonName(reason);
  }
}

TEST(FilterBatch, EmptyAndVacuous) {
  const auto fx = MakeFilterFixture();
  const auto profiles = ProfilesFor(fx.enrollment);
  const BatchFilterResult empty = FilterBatch(std::vector<RIRecording>{}, profiles, {});
  EXPECT_FALSE(empty.yield.has_value());
  EXPECT_TRUE(empty.accepted.empty());
  EXPECT_TRUE(empty.rejected.empty());

  FilterCriteria open;
  open.t60_rel_tolerance = 1e9;
  open.t60_hard_cutoff_s = 1e9;
  open.dist_min_m = 0.0;
  open.dist_max_m = 100.0;
  open.edc_max_rms_dev_db = 1e9;
  open.echo_density_max_rel_dev = 1e9;
  const BatchFilterResult all = FilterBatch(fx.corpus, profiles, open);
  EXPECT_DOUBLE_EQ(all.yield.value(), 1.0);
}

TEST(FilterBatch, UnknownRoomIsNamed) {
  const auto fx = MakeFilterFixture();
  std::vector<RIRecording> corpus = fx.corpus;
  corpus[3].room_id = 17;
  try {
    FilterBatch(corpus, ProfilesFor(fx.enrollment), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownRoom);
    EXPECT_NE(std::string(e.what()).find("17"), std::string::npos) << e.what();
  }
}

TEST(FilterBatch, DeterministicAcrossThreadCounts) {
  const auto fx = MakeFilterFixture();
  const auto profiles = ProfilesFor(fx.enrollment);
  const BatchFilterResult a = FilterBatch(fx.corpus, profiles, {}, 1);
  const BatchFilterResult b = FilterBatch(fx.corpus, profiles, {}, 4);
  EXPECT_EQ(a.accepted, b.accepted);
  ASSERT_EQ(a.rejected.size(), b.rejected.size());
  for (std::size_t i = 0; i < a.rejected.size(); ++i) {
    EXPECT_EQ(a.rejected[i].index, b.rejected[i].index);
    EXPECT_EQ(a.rejected[i].decision.reasons, b.rejected[i].decision.reasons);
  }
}

// Fixture plus synthesized scenes so every criterion sits near its boundary
// somewhere in the batch.
std::vector<RIRecording> MixedBatch(const std::vector<RIRecording>& fixture) {
  std::vector<RIRecording> out = fixture;
  const ShoeboxRoom room = BuiltinRoom(1);
  for (const SceneQuery& q : SampleScenes(room, 30, 77)) {
    out.push_back(NormalizeRir(SynthesizeRir(room, q)));
  }
  return out;
}

TEST(FilterBatch, WideningAToleranceNeverShrinksAcceptance) {
  const auto fx = MakeFilterFixture();
  const auto profiles = ProfilesFor(fx.enrollment);
  const std::vector<RIRecording> batch = MixedBatch(fx.corpus);
  const FilterCriteria base;
  const std::set<std::size_t> accepted = AcceptedSet(FilterBatch(batch, profiles, base));

  std::vector<FilterCriteria> widened(6, base);
  widened[0].t60_rel_tolerance *= 1.5;
  widened[1].t60_hard_cutoff_s += 0.5;
  widened[2].dist_min_m -= 0.3;
  widened[3].dist_max_m += 1.0;
  widened[4].edc_max_rms_dev_db *= 1.5;
  widened[5].echo_density_max_rel_dev *= 1.5;
  for (std::size_t k = 0; k < widened.size(); ++k) {
    const std::set<std::size_t> wide = AcceptedSet(FilterBatch(batch, profiles, widened[k]));
    EXPECT_TRUE(std::includes(wide.begin(), wide.end(), accepted.begin(), accepted.end()))
        << "criterion " << k;
  }
}

TEST(FilterBatch, ReasonsFollowFromSnapshot) {
  const auto fx = MakeFilterFixture();
  const auto profiles = ProfilesFor(fx.enrollment);
  const std::vector<RIRecording> batch = MixedBatch(fx.corpus);
  const FilterCriteria c;
  const BatchFilterResult r = FilterBatch(batch, profiles, c);
  std::vector<std::pair<std::size_t, const FilterDecision*>> all;
  for (std::size_t k = 0; k < r.accepted.size(); ++k) {
    all.emplace_back(r.accepted[k], &r.accepted_decisions[k]);
  }
  for (const RejectedRecording& rej : r.rejected) all.emplace_back(rej.index, &rej.decision);
  for (const auto& [index, d] : all) {
    if (d->error) continue;
    const ReferenceProfile& p = profiles.at(batch[index].room_id);
    const DecisionSnapshot& s = d->snapshot;
    std::set<RejectReason> expect;
    if (std::abs(s.metrics.t60_s - p.median_t60_s) > c.t60_rel_tolerance * p.median_t60_s) {
      expect.insert(RejectReason::kT60OutOfBand);
    }
    if (s.metrics.t60_s > c.t60_hard_cutoff_s) expect.insert(RejectReason::kT60AboveCutoff);
    if (s.distance_m < c.dist_min_m) expect.insert(RejectReason::kDistanceTooClose);
    if (s.distance_m > c.dist_max_m) expect.insert(RejectReason::kDistanceTooFar);
    if (s.edc_rms_dev_db > c.edc_max_rms_dev_db) expect.insert(RejectReason::kEdcShapeMismatch);
    const double ref = p.echo_density_total();
    if (std::abs(s.echo_density_total - ref) > c.echo_density_max_rel_dev * ref) {
      expect.insert(RejectReason::kEarlyReflectionMismatch);
    }
    EXPECT_EQ(std::vector<RejectReason>(expect.begin(), expect.end()), d->reasons)
        << batch[index].rir_id;
    EXPECT_EQ(ReasonsFromSnapshot(s, p, c), d->reasons);
    EXPECT_EQ(d->accepted, d->reasons.empty());
    EXPECT_DOUBLE_EQ(s.distance_m, batch[index].source_receiver_distance());
  }
}

TEST(FilterBatch, AmplitudeScalingKeepsDecisions) {
  const auto fx = MakeFilterFixture();
  const auto profiles = ProfilesFor(fx.enrollment);
  std::vector<RIRecording> scaled = fx.corpus;
  for (RIRecording& r : scaled) {
    for (double& v : r.samples) v *= 0.05;
    r.norm_gain /= 0.05;
  }
  const BatchFilterResult a = FilterBatch(fx.corpus, profiles, {});
  const BatchFilterResult b = FilterBatch(scaled, profiles, {});
  EXPECT_EQ(a.accepted, b.accepted);
  for (std::size_t i = 0; i < a.rejected.size(); ++i) {
    EXPECT_EQ(a.rejected[i].decision.reasons, b.rejected[i].decision.reasons);
  }
}

}  // namespace
}  // namespace rirsde
