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

#ifndef RIRSDE_RNG_H_
#define RIRSDE_RNG_H_

#include <cstdint>
#include <random>

namespace rirsde {

// Portable seeded generator. The bit stream is std::mt19937_64, whose output
// sequence is fixed by the C++ standard; uniform and Gaussian variates are
// derived here (53-bit mantissa fill, Box-Muller) instead of through
// <random> distributions, whose algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1).
  double Uniform();
  // Uniform on [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Standard normal.
  double Gaussian();
  // Uniform integer on [0, n).
  std::uint64_t Below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t MixSeed(std::uint64_t a, std::uint64_t b);

}  // namespace rirsde

#endif  // RIRSDE_RNG_H_
