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

#ifndef RIRSDE_ERROR_H_
#define RIRSDE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace rirsde {

enum class ErrorCode {
  kZeroEnergy,
  kInsufficientDecay,
  kGeometry,
  kInvalidArgument,
  kUnknownRoom,
  kSchemaMismatch,
  kIo,
  kMissingData,
  kTrainingDiverged,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kZeroEnergy:
      return "zero_energy";
    case ErrorCode::kInsufficientDecay:
      return "insufficient_decay";
    case ErrorCode::kGeometry:
      return "geometry";
    case ErrorCode::kInvalidArgument:
      return "invalid_argument";
    case ErrorCode::kUnknownRoom:
      return "unknown_room";
    case ErrorCode::kSchemaMismatch:
      return "schema_mismatch";
    case ErrorCode::kIo:
      return "io";
    case ErrorCode::kMissingData:
      return "missing_data";
    case ErrorCode::kTrainingDiverged:
      return "training_diverged";
  }
  return "unknown";
}

}  // namespace rirsde

#endif  // RIRSDE_ERROR_H_
