// Copyright 2025 The mopl authors
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

#ifndef MOPL_RNG_HPP_
#define MOPL_RNG_HPP_

#include <cstdint>
#include <random>

namespace mopl {

// Addresses one reproducible random stream: (master_seed, stream_index)
// fully determines the draw sequence, and distinct stream indices give
// statistically independent streams.
struct RngSeed {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
};

// Seeded draw stream. Built on std::mt19937_64, whose output sequence is
// pinned by the standard, with hand-rolled transforms (Box-Muller, Knuth
// Poisson) instead of std::*_distribution, whose algorithms are
// implementation-defined. This keeps every seeded artifact byte-stable
// across standard libraries.
class RngStream {
 public:
  explicit RngStream(RngSeed seed);

  // Uniform on [0, 1).
  double uniform();
  // Uniform on (0, 1]; safe to pass through log().
  double uniform_pos();
  // Standard normal via Box-Muller (pairs; the spare is cached).
  double normal();
  // Poisson draw; rate 0 returns 0 without consuming randomness.
  std::uint64_t poisson(double rate);
  bool bernoulli(double p);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace mopl

#endif  // MOPL_RNG_HPP_
