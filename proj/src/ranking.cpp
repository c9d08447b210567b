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

#include "mopl/ranking.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mopl {

std::vector<std::size_t> scalarise(
    const std::vector<std::vector<double>>& scores,
    const ActionVector& weights) {
  std::vector<double> totals(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i].size() != weights.size()) {
      throw std::invalid_argument(
          "scalarise: score row length does not match weight length");
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      sum += weights[k] * scores[i][k];
    }
    totals[i] = sum;
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&totals](std::size_t l, std::size_t r) {
                     return totals[l] > totals[r];
                   });
  return order;
}

}  // namespace mopl
