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

#ifndef MOPL_RANKING_HPP_
#define MOPL_RANKING_HPP_

#include <cstddef>
#include <vector>

#include "mopl/policy.hpp"

namespace mopl {

// Orders items by descending weighted sum of their per-objective scores.
// `scores` is n_items rows of d objective scores each. Ties break by
// ascending item index, so the ordering is fully deterministic.
std::vector<std::size_t> scalarise(
    const std::vector<std::vector<double>>& scores,
    const ActionVector& weights);

}  // namespace mopl

#endif  // MOPL_RANKING_HPP_
