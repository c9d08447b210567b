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

#ifndef MOPL_DATASET_HPP_
#define MOPL_DATASET_HPP_

#include <cstddef>
#include <optional>
#include <vector>

#include "mopl/policy.hpp"

namespace mopl {

// One logged decision: the action that was taken, the observed reward, and
// the probability density the logging policy assigned to that action.
struct LoggedSample {
  ActionVector action;
  double reward = 0.0;
  double logging_density = 0.0;
};

struct LoggedDataset {
  std::size_t d = 0;
  std::vector<LoggedSample> samples;
  std::optional<Policy> logging_policy;

  std::size_t size() const { return samples.size(); }

  // Enforces: action lengths equal d, rewards finite, logging densities
  // strictly positive, and - when a logging policy descriptor is present -
  // the stored propensities agree with it to 1e-6 in log space. Throws
  // std::invalid_argument naming the offending 1-based sample index.
  void validate() const;
};

// Importance weights w_i = pi_target(a_i) / pi_0(a_i), formed as a single
// exponentiation of the log-density difference so that severe mismatch
// underflows to 0 instead of producing NaN. Deterministic targets are
// smoothed by the kernel (required for them, ignored otherwise).
std::vector<double> importance_weights(const LoggedDataset& dataset,
                                       const Policy& target,
                                       const std::optional<KernelConfig>&
                                           kernel);

}  // namespace mopl

#endif  // MOPL_DATASET_HPP_
