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

#include "mopl/dataset.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mopl {

namespace {
constexpr double kPropensityLogTolerance = 1e-6;

[[noreturn]] void sample_error(std::size_t index, const std::string& message) {
  throw std::invalid_argument("sample " + std::to_string(index + 1) + ": " +
                              message);
}

// exp(log_target) / stored_density, never NaN. The direct ratio is used
// whenever exp(log_target) is representable at full precision: IEEE division
// then makes "target equals logging policy" give exactly 1.0 (x/x == 1),
// which the log-difference route misses by an ulp when log(exp(x)) != x.
// Outside that range the log-space form keeps moderate ratios finite even
// though either density alone would under- or overflow.
double density_ratio(double log_target, double stored_density) {
  if (std::isinf(log_target) && log_target < 0.0) return 0.0;
  double numerator = std::exp(log_target);
  if (numerator >= std::numeric_limits<double>::min() &&
      numerator <= std::numeric_limits<double>::max() &&
      stored_density >= std::numeric_limits<double>::min()) {
    return numerator / stored_density;
  }
  return std::exp(log_target - std::log(stored_density));
}
}  // namespace

void LoggedDataset::validate() const {
  if (d == 0) throw std::invalid_argument("LoggedDataset: d must be positive");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const LoggedSample& s = samples[i];
    if (s.action.size() != d) {
      sample_error(i, "action has length " + std::to_string(s.action.size()) +
                          ", expected " + std::to_string(d));
    }
    for (double v : s.action) {
      if (!std::isfinite(v)) sample_error(i, "action entry not finite");
    }
    if (!std::isfinite(s.reward)) sample_error(i, "reward not finite");
    if (!(s.logging_density > 0.0) || !std::isfinite(s.logging_density)) {
      sample_error(i, "logging_density must be strictly positive");
    }
    if (logging_policy.has_value()) {
      double expected = log_density(*logging_policy, s.action);
      double stored = std::log(s.logging_density);
      if (!(std::abs(stored - expected) <= kPropensityLogTolerance)) {
        sample_error(i,
                     "stored propensity disagrees with the declared logging "
                     "policy (log-space gap " +
                         std::to_string(std::abs(stored - expected)) + ")");
      }
    }
  }
}

std::vector<double> importance_weights(
    const LoggedDataset& dataset, const Policy& target,
    const std::optional<KernelConfig>& kernel) {
  if (dataset.d != target.dim()) {
    throw std::invalid_argument(
        "importance_weights: dataset and target dimensions differ");
  }
  const bool deterministic = target.is_deterministic();
  if (deterministic && !kernel.has_value()) {
    throw std::invalid_argument(
        "deterministic policy has no density; supply a KernelConfig");
  }
  const ActionVector* point = nullptr;
  if (deterministic) {
    point = &std::get<Deterministic>(target.variant()).point;
    kernel->validate();
  }

  std::vector<double> weights(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const LoggedSample& s = dataset.samples[i];
    if (!(s.logging_density > 0.0)) {
      throw std::invalid_argument(
          "importance_weights: sample " + std::to_string(i + 1) +
          " has non-positive logging density (support violation in the data)");
    }
    double log_target = deterministic
                            ? kernel_log_density(*point, *kernel, s.action)
                            : log_density(target, s.action);
    weights[i] = density_ratio(log_target, s.logging_density);
  }
  return weights;
}

}  // namespace mopl
