// Copyright 2026 the ucal authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>

namespace ucal {

// Component tags mixed into derived seeds so that independent parts of one
// run never share a stream.
enum class StreamTag : std::uint64_t {
  Split = 1,
  Synth = 2,
  Ecdf = 3,
  PatchAugment = 4,
  OracleCheck = 5,
  Test = 6,
};

std::uint64_t splitmix64(std::uint64_t x);

// Seed for stream `index` of component `tag` under a master seed.
std::uint64_t derive_seed(std::uint64_t master, StreamTag tag, std::uint64_t index);

// Random source with platform-independent draws: the engine is
// std::mt19937_64 and all conversions are done here rather than through
// <random> distributions, whose output is implementation-defined.
class SeedStream {
 public:
  explicit SeedStream(std::uint64_t seed) : engine_(seed) {}
  SeedStream(std::uint64_t master, StreamTag tag, std::uint64_t index)
      : engine_(derive_seed(master, tag, index)) {}

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, bound), bound >= 1, without modulo bias.
  std::uint64_t below(std::uint64_t bound);
  // Unit-rate exponential by inversion.
  double exponential();

 private:
  std::mt19937_64 engine_;
};

}  // namespace ucal
