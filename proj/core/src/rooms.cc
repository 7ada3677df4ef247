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

#include <array>
#include <string>

#include "rirsde/error.h"
#include "rirsde/synth.h"

namespace rirsde {
namespace {

struct RoomSpec {
  double length;
  double width;
  double height;
  double absorption;
};

// Absorption chosen so Sabine T60 spans 0.30-0.80 s over rooms 1-10 and
// 0.50-1.20 s over rooms 11-20.
constexpr std::array<RoomSpec, kNumBuiltinRooms> kRooms = {{
    {4.0, 3.2, 2.6, 0.283},
    {4.5, 3.5, 2.7, 0.258},
    {5.0, 4.0, 3.0, 0.250},
    {5.5, 4.2, 2.8, 0.222},
    {6.0, 4.5, 3.0, 0.213},
    {6.4, 4.8, 3.0, 0.200},
    {6.8, 5.0, 3.2, 0.193},
    {7.2, 5.4, 3.0, 0.178},
    {7.6, 5.8, 3.2, 0.175},
    {8.0, 6.0, 3.4, 0.172},
    {8.0, 6.5, 3.5, 0.285},
    {8.6, 7.0, 3.6, 0.259},
    {9.2, 7.2, 3.8, 0.240},
    {9.8, 7.6, 4.0, 0.227},
    {10.4, 8.0, 4.0, 0.211},
    {11.0, 8.4, 4.2, 0.202},
    {11.6, 8.8, 4.4, 0.195},
    {12.2, 9.0, 4.6, 0.188},
    {12.8, 9.6, 4.8, 0.184},
    {13.5, 10.0, 5.0, 0.180},
}};

}  // namespace

ShoeboxRoom BuiltinRoom(RoomId id) {
  if (id < 1 || id > kNumBuiltinRooms) {
    throw Error(ErrorCode::kUnknownRoom,
                "no built-in room with id " + std::to_string(id));
  }
  const RoomSpec& spec = kRooms[static_cast<std::size_t>(id - 1)];
  ShoeboxRoom room;
  room.dims = {spec.length, spec.width, spec.height};
  room.absorption = spec.absorption;
  room.room_id = id;
  room.seed = 0x5eed0000ULL + static_cast<std::uint64_t>(id);
  return room;
}

std::vector<ShoeboxRoom> BuiltinRooms() {
  std::vector<ShoeboxRoom> rooms;
  rooms.reserve(kNumBuiltinRooms);
  for (RoomId id = 1; id <= kNumBuiltinRooms; ++id) rooms.push_back(BuiltinRoom(id));
  return rooms;
}

}  // namespace rirsde
