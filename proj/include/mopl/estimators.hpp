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

#ifndef MOPL_ESTIMATORS_HPP_
#define MOPL_ESTIMATORS_HPP_

#include <span>
#include <stdexcept>

#include "mopl/dataset.hpp"

namespace mopl {

enum class EstimatorKind { kIps, kSnips };

// How the effective sample size behind the corrected interval is estimated.
// kCltOnly applies no correction (ESS = N, the classical CLT interval);
// kP2 is the inverse sum of squared normalised weights, kDInf the inverse
// max normalised weight, and the R-variants reweight by |reward| first.
enum class EssMethod { kCltOnly, kP2, kP2R, kDInf, kDInfR };

// Raised where a formula's effective sample size degenerates (n_eff <= 1);
// callers map this to an infinite-width interval.
class DegenerateSampleSizeError : public std::runtime_error {
 public:
  DegenerateSampleSizeError()
      : std::runtime_error("degenerate effective sample size") {}
};

struct EvaluationReport {
  EstimatorKind kind = EstimatorKind::kSnips;
  double value = 0.0;
  double variance = 0.0;  // Var_ESS form; +inf when the interval degenerated
  double ess = 0.0;       // in [1, N]
  double n_tilde = 0.0;   // in [1, N]
  double ci_low = 0.0;
  double ci_high = 0.0;
  double alpha = 0.05;
  double mean_weight = 0.0;
  double max_normalized_weight = 0.0;  // in (0, 1]
  bool support_flag = false;
};

struct SupportDiagnostics {
  double mean_weight = 0.0;
  bool flag = false;
};

// (1/N) sum w_i r_i.
double ips_value(std::span<const double> weights,
                 std::span<const double> rewards);

// sum w_i r_i / sum w_i. Throws on zero total weight.
double snips_value(std::span<const double> weights,
                   std::span<const double> rewards);

// sum (w_i r_i - ips)^2 / (n_eff - 1). Throws DegenerateSampleSizeError when
// n_eff <= 1 + 1e-9.
double ips_variance(std::span<const double> weights,
                    std::span<const double> rewards, double ips, double n_eff);

// Delta-method form: sum (w_i r_i - w_i snips)^2 / ((n_eff - 1) * wbar^2),
// where wbar = (1/N) sum w_i with N the true dataset size. Only the variance
// normaliser takes the corrected sample size; the mean-weight factor is an
// estimate of E[w] from all N draws and stays at N.
double snips_variance(std::span<const double> weights,
                      std::span<const double> rewards, double snips,
                      double n_eff);

// Effective sample size per `method`, clamped to [1, N]. Reward-dependent
// methods with zero total |reward| mass fall back to their
// reward-independent counterpart. Throws on zero total weight.
double ess(std::span<const double> weights, std::span<const double> rewards,
           EssMethod method);

// N-tilde = 1 + n (ess - 1) / ess. Monotone in both arguments, maps the
// endpoints ess = 1 -> 1 and ess = n -> n.
double corrected_sample_size(std::size_t n, double ess);

// value +- z_(1-alpha/2) * sqrt(var_ess / n_tilde); degenerates to
// (-inf, +inf) when n_tilde <= 1 + 1e-9.
std::pair<double, double> confidence_interval(double value, double var_ess,
                                              double n_tilde, double alpha);

// mean weight plus a three-sigma test of the known-mean-1 statistic: the
// flag fires when |mean - 1| > 3 sd(w)/sqrt(N), signalling likely support
// violation or severe policy mismatch. Requires N >= 2.
SupportDiagnostics support_diagnostics(std::span<const double> weights);

// beta + (1/N) sum w_i (r_i - beta). Equals
// ips_value + beta * (1 - mean weight) as an algebraic identity.
double baseline_shifted_ips(std::span<const double> weights,
                            std::span<const double> rewards, double beta);

// Full pipeline: weights, point estimate, ESS, corrected sample size,
// corrected variance, the symmetric interval, and support diagnostics.
EvaluationReport evaluate(const LoggedDataset& dataset, const Policy& target,
                          const std::optional<KernelConfig>& kernel,
                          EstimatorKind kind, EssMethod method, double alpha);

}  // namespace mopl

#endif  // MOPL_ESTIMATORS_HPP_
