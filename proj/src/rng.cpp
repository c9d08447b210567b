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

#include "mopl/rng.hpp"

#include <cmath>

namespace mopl {

RngStream::RngStream(RngSeed seed) {
  std::seed_seq seq{
      static_cast<std::uint32_t>(seed.master_seed & 0xffffffffu),
      static_cast<std::uint32_t>(seed.master_seed >> 32),
      static_cast<std::uint32_t>(seed.stream_index & 0xffffffffu),
      static_cast<std::uint32_t>(seed.stream_index >> 32)};
  engine_.seed(seq);
}

double RngStream::uniform() {
  // 53-bit mantissa mapping, [0, 1).
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_pos() {
  return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform_pos();
  double u2 = uniform();
  double radius = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * M_PI * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t RngStream::poisson(double rate) {
  if (rate <= 0.0) return 0;
  // Knuth's multiplication method; the rates used here are small (<= ~1).
  const double limit = std::exp(-rate);
  std::uint64_t k = 0;
  double product = uniform_pos();
  while (product > limit) {
    ++k;
    product *= uniform_pos();
  }
  return k;
}

bool RngStream::bernoulli(double p) { return uniform() < p; }

}  // namespace mopl
