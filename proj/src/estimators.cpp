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

#include "mopl/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "mopl/stats.hpp"

namespace mopl {

namespace {
constexpr double kDegenerateSlack = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_lengths(std::span<const double> weights,
                   std::span<const double> rewards) {
  if (weights.empty()) throw std::invalid_argument("empty input");
  if (weights.size() != rewards.size()) {
    throw std::invalid_argument("weights and rewards lengths differ");
  }
}

double total_weight(std::span<const double> weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) {
      throw std::invalid_argument("weights must be nonnegative");
    }
    sum += w;
  }
  return sum;
}
}  // namespace

double ips_value(std::span<const double> weights,
                 std::span<const double> rewards) {
  check_lengths(weights, rewards);
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) sum += weights[i] * rewards[i];
  return sum / static_cast<double>(weights.size());
}

double snips_value(std::span<const double> weights,
                   std::span<const double> rewards) {
  check_lengths(weights, rewards);
  double sum_wr = 0.0;
  double sum_w = total_weight(weights);
  if (!(sum_w > 0.0)) {
    throw std::invalid_argument("zero effective mass under target policy");
  }
  for (std::size_t i = 0; i < weights.size(); ++i)
    sum_wr += weights[i] * rewards[i];
  return sum_wr / sum_w;
}

double ips_variance(std::span<const double> weights,
                    std::span<const double> rewards, double ips,
                    double n_eff) {
  check_lengths(weights, rewards);
  if (n_eff <= 1.0 + kDegenerateSlack) throw DegenerateSampleSizeError();
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    double term = weights[i] * rewards[i] - ips;
    sum += term * term;
  }
  return sum / (n_eff - 1.0);
}

double snips_variance(std::span<const double> weights,
                      std::span<const double> rewards, double snips,
                      double n_eff) {
  check_lengths(weights, rewards);
  if (n_eff <= 1.0 + kDegenerateSlack) throw DegenerateSampleSizeError();
  double mean_w = total_weight(weights) / static_cast<double>(weights.size());
  if (!(mean_w > 0.0)) {
    throw std::invalid_argument("zero effective mass under target policy");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    double term = weights[i] * (rewards[i] - snips);
    sum += term * term;
  }
  return sum / ((n_eff - 1.0) * mean_w * mean_w);
}

double ess(std::span<const double> weights, std::span<const double> rewards,
           EssMethod method) {
  check_lengths(weights, rewards);
  const double n = static_cast<double>(weights.size());
  double sum_w = total_weight(weights);
  if (!(sum_w > 0.0)) {
    throw std::invalid_argument("zero effective mass under target policy");
  }
  if (method == EssMethod::kCltOnly) return n;

  const bool reward_dependent =
      method == EssMethod::kP2R || method == EssMethod::kDInfR;
  double denom = sum_w;
  if (reward_dependent) {
    double sum_wr = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      sum_wr += weights[i] * std::abs(rewards[i]);
    }
    if (sum_wr == 0.0) {
      // A zero-reward dataset carries no reward-weighting information; fall
      // back to the reward-independent counterpart.
      return ess(weights, rewards,
                 method == EssMethod::kP2R ? EssMethod::kP2 : EssMethod::kDInf);
    }
    denom = sum_wr;
  }

  double sum_sq = 0.0;
  double max_norm = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    double norm = weights[i];
    if (reward_dependent) norm *= std::abs(rewards[i]);
    norm /= denom;
    sum_sq += norm * norm;
    max_norm = std::max(max_norm, norm);
  }
  double value;
  if (method == EssMethod::kP2 || method == EssMethod::kP2R) {
    value = 1.0 / sum_sq;
  } else {
    value = 1.0 / max_norm;
  }
  return std::clamp(value, 1.0, n);
}

double corrected_sample_size(std::size_t n, double ess) {
  if (!(ess >= 1.0) || ess > static_cast<double>(n)) {
    throw std::invalid_argument("corrected_sample_size: ess outside [1, n]");
  }
  return 1.0 + static_cast<double>(n) * (ess - 1.0) / ess;
}

std::pair<double, double> confidence_interval(double value, double var_ess,
                                              double n_tilde, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("confidence_interval: alpha outside (0, 1)");
  }
  if (var_ess < 0.0) {
    throw std::invalid_argument("confidence_interval: negative variance");
  }
  if (n_tilde <= 1.0 + kDegenerateSlack) return {-kInf, kInf};
  double half = normal_quantile(1.0 - alpha / 2.0) * std::sqrt(var_ess / n_tilde);
  return {value - half, value + half};
}

SupportDiagnostics support_diagnostics(std::span<const double> weights) {
  if (weights.size() < 2) {
    throw std::invalid_argument("support_diagnostics: need at least 2 weights");
  }
  const double n = static_cast<double>(weights.size());
  double mean = 0.0;
  for (double w : weights) mean += w;
  mean /= n;
  double ss = 0.0;
  for (double w : weights) ss += (w - mean) * (w - mean);
  double sd = std::sqrt(ss / (n - 1.0));
  SupportDiagnostics diag;
  diag.mean_weight = mean;
  diag.flag = std::abs(mean - 1.0) > 3.0 * sd / std::sqrt(n);
  return diag;
}

double baseline_shifted_ips(std::span<const double> weights,
                            std::span<const double> rewards, double beta) {
  check_lengths(weights, rewards);
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    sum += weights[i] * (rewards[i] - beta);
  }
  return beta + sum / static_cast<double>(weights.size());
}

EvaluationReport evaluate(const LoggedDataset& dataset, const Policy& target,
                          const std::optional<KernelConfig>& kernel,
                          EstimatorKind kind, EssMethod method, double alpha) {
  if (dataset.size() == 0) {
    throw std::invalid_argument("evaluate: dataset is empty");
  }
  std::vector<double> weights = importance_weights(dataset, target, kernel);
  std::vector<double> rewards(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    rewards[i] = dataset.samples[i].reward;
  }

  EvaluationReport report;
  report.kind = kind;
  report.alpha = alpha;
  report.value = kind == EstimatorKind::kIps ? ips_value(weights, rewards)
                                             : snips_value(weights, rewards);
  report.ess = ess(weights, rewards, method);
  report.n_tilde = corrected_sample_size(dataset.size(), report.ess);

  if (report.n_tilde <= 1.0 + kDegenerateSlack) {
    report.variance = kInf;
    report.ci_low = -kInf;
    report.ci_high = kInf;
  } else {
    report.variance =
        kind == EstimatorKind::kIps
            ? ips_variance(weights, rewards, report.value, report.n_tilde)
            : snips_variance(weights, rewards, report.value, report.n_tilde);
    std::tie(report.ci_low, report.ci_high) =
        confidence_interval(report.value, report.variance, report.n_tilde,
                            alpha);
  }

  double sum_w = 0.0;
  double max_w = 0.0;
  for (double w : weights) {
    sum_w += w;
    max_w = std::max(max_w, w);
  }
  report.max_normalized_weight = max_w / sum_w;
  if (dataset.size() >= 2) {
    SupportDiagnostics diag = support_diagnostics(weights);
    report.mean_weight = diag.mean_weight;
    report.support_flag = diag.flag;
  } else {
    // Singleton dataset: the spread test needs N >= 2; the interval is
    // already infinite via n_tilde = 1.
    report.mean_weight = weights[0];
    report.support_flag = false;
  }
  return report;
}

}  // namespace mopl
