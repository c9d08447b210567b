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

#ifndef MOPL_LEARNER_HPP_
#define MOPL_LEARNER_HPP_

#include <functional>

#include "mopl/estimators.hpp"

namespace mopl {

// Configuration for pessimistic lower-bound policy learning. The objective
// maximised is value - z * sqrt(Var_ESS / N-tilde), i.e. the lower endpoint
// of the corrected interval; z defaults to the 97.5% normal quantile.
struct CrmConfig {
  EstimatorKind kind = EstimatorKind::kSnips;
  EssMethod method = EssMethod::kDInfR;
  double z = 1.959964;
  KernelConfig kernel;
  double step_size = 0.5;
  std::size_t max_iters = 200;
  double grad_tol = 1e-4;
  double fd_step = 1e-4;

  void validate() const;
};

struct TrajectoryPoint {
  std::size_t iteration = 0;
  double objective = 0.0;
  double grad_norm = 0.0;
};

struct LearnResult {
  ActionVector mu;
  std::vector<TrajectoryPoint> trajectory;  // objective non-decreasing
  EvaluationReport final_report;
};

// Lower endpoint of the corrected interval for the deterministic policy at
// mu, smoothed by config.kernel. Returns -infinity when the interval
// degenerates (N-tilde <= 1 or zero weight mass), so line searches reject
// such points instead of aborting.
double crm_lower_bound(const LoggedDataset& dataset, const ActionVector& mu,
                       const CrmConfig& config);

// Closed-form gradient of the SNIPS estimate of the kernel-smoothed
// deterministic policy at mu, using
// d w_i / d mu_k = w_i (a_ik - mu_k) / sigma_k^2 on normalised weights.
// Serves as the correctness oracle for the finite-difference optimiser.
ActionVector snips_analytic_gradient(const LoggedDataset& dataset,
                                     const ActionVector& mu,
                                     const KernelConfig& kernel);

// Central differences with per-coordinate step h * (1 + |mu_k|). Throws if
// any probed objective value is non-finite.
ActionVector finite_difference_gradient(
    const std::function<double(const ActionVector&)>& objective,
    const ActionVector& mu, double h);

// Gradient ascent on crm_lower_bound with backtracking (the step halves, up
// to 30 times, whenever it would not improve the objective). Stops at
// max_iters, at gradient norm < grad_tol, or when no improving step exists.
// Deterministic given its inputs.
LearnResult learn(const LoggedDataset& dataset, const CrmConfig& config,
                  const ActionVector& init);

}  // namespace mopl

#endif  // MOPL_LEARNER_HPP_
