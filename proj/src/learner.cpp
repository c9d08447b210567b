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

#include "mopl/learner.hpp"

#include <cmath>
#include <limits>

namespace mopl {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxBacktracks = 30;

double grad_norm(const ActionVector& g) {
  double ss = 0.0;
  for (double v : g) ss += v * v;
  return std::sqrt(ss);
}
}  // namespace

void CrmConfig::validate() const {
  kernel.validate();
  if (z < 0.0 || !std::isfinite(z)) {
    throw std::invalid_argument("CrmConfig: z must be nonnegative");
  }
  if (!(step_size > 0.0) || !(grad_tol > 0.0) || !(fd_step > 0.0)) {
    throw std::invalid_argument(
        "CrmConfig: step_size, grad_tol and fd_step must be positive");
  }
}

double crm_lower_bound(const LoggedDataset& dataset, const ActionVector& mu,
                       const CrmConfig& config) {
  if (dataset.size() == 0) {
    throw std::invalid_argument("crm_lower_bound: dataset is empty");
  }
  Policy target{Deterministic{mu}};
  std::vector<double> weights = importance_weights(dataset, target,
                                                   config.kernel);
  double sum_w = 0.0;
  for (double w : weights) sum_w += w;
  if (!(sum_w > 0.0)) return -kInf;

  std::vector<double> rewards(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    rewards[i] = dataset.samples[i].reward;
  }
  double value = config.kind == EstimatorKind::kIps
                     ? ips_value(weights, rewards)
                     : snips_value(weights, rewards);
  double n_tilde =
      corrected_sample_size(dataset.size(), ess(weights, rewards,
                                                config.method));
  if (n_tilde <= 1.0 + 1e-9) return -kInf;
  double var = config.kind == EstimatorKind::kIps
                   ? ips_variance(weights, rewards, value, n_tilde)
                   : snips_variance(weights, rewards, value, n_tilde);
  return value - config.z * std::sqrt(var / n_tilde);
}

ActionVector snips_analytic_gradient(const LoggedDataset& dataset,
                                     const ActionVector& mu,
                                     const KernelConfig& kernel) {
  if (dataset.size() == 0) {
    throw std::invalid_argument("snips_analytic_gradient: dataset is empty");
  }
  kernel.validate();
  if (mu.size() != dataset.d || kernel.bandwidth_sigmas.size() != dataset.d) {
    throw std::invalid_argument("snips_analytic_gradient: dimension mismatch");
  }
  const std::size_t n = dataset.size();
  const std::size_t d = dataset.d;

  // Normalised weights from shifted log space: scale-free, so the max-shift
  // keeps them well-conditioned under heavy kernel/logging mismatch.
  std::vector<double> log_w(n);
  double max_log = -kInf;
  for (std::size_t i = 0; i < n; ++i) {
    log_w[i] = kernel_log_density(mu, kernel, dataset.samples[i].action) -
               std::log(dataset.samples[i].logging_density);
    max_log = std::max(max_log, log_w[i]);
  }
  if (!std::isfinite(max_log)) {
    throw std::invalid_argument("zero effective mass under target policy");
  }
  std::vector<double> norm_w(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    norm_w[i] = std::exp(log_w[i] - max_log);
    sum += norm_w[i];
  }
  double snips = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    norm_w[i] /= sum;
    snips += norm_w[i] * dataset.samples[i].reward;
  }

  // grad_k = sum_i norm_w_i (r_i - snips) (a_ik - mu_k) / sigma_k^2.
  ActionVector grad(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double coef = norm_w[i] * (dataset.samples[i].reward - snips);
    for (std::size_t k = 0; k < d; ++k) {
      double s = kernel.bandwidth_sigmas[k];
      grad[k] += coef * (dataset.samples[i].action[k] - mu[k]) / (s * s);
    }
  }
  return grad;
}

ActionVector finite_difference_gradient(
    const std::function<double(const ActionVector&)>& objective,
    const ActionVector& mu, double h) {
  if (!(h > 0.0)) {
    throw std::invalid_argument("finite_difference_gradient: h must be > 0");
  }
  ActionVector grad(mu.size());
  ActionVector probe = mu;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    double step = h * (1.0 + std::abs(mu[k]));
    probe[k] = mu[k] + step;
    double up = objective(probe);
    probe[k] = mu[k] - step;
    double down = objective(probe);
    probe[k] = mu[k];
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw std::runtime_error(
          "finite_difference_gradient: non-finite objective evaluation");
    }
    grad[k] = (up - down) / (2.0 * step);
  }
  return grad;
}

LearnResult learn(const LoggedDataset& dataset, const CrmConfig& config,
                  const ActionVector& init) {
  config.validate();
  if (init.size() != dataset.d) {
    throw std::invalid_argument("learn: init dimension does not match dataset");
  }
  check_finite(init, "learn init");

  auto objective = [&](const ActionVector& mu) {
    return crm_lower_bound(dataset, mu, config);
  };

  ActionVector mu = init;
  double f = objective(mu);
  if (!std::isfinite(f)) {
    throw std::runtime_error(
        "initial point has degenerate effective sample size; widen kernel or "
        "change init");
  }

  LearnResult result;
  ActionVector g = finite_difference_gradient(objective, mu, config.fd_step);
  result.trajectory.push_back({0, f, grad_norm(g)});

  for (std::size_t iter = 1; iter <= config.max_iters; ++iter) {
    if (iter > 1) g = finite_difference_gradient(objective, mu, config.fd_step);
    double gn = grad_norm(g);
    if (gn < config.grad_tol) break;

    double step = config.step_size;
    bool accepted = false;
    ActionVector candidate(mu.size());
    double f_candidate = -kInf;
    for (int attempt = 0; attempt < kMaxBacktracks; ++attempt) {
      for (std::size_t k = 0; k < mu.size(); ++k) {
        candidate[k] = mu[k] + step * g[k];
      }
      f_candidate = objective(candidate);
      if (f_candidate > f) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no ascent direction left at this resolution
    mu = candidate;
    f = f_candidate;
    result.trajectory.push_back({iter, f, gn});
  }

  result.mu = mu;
  // Report at the learnt point; alpha recovered from the z multiplier.
  double alpha = std::erfc(config.z / std::sqrt(2.0));
  if (alpha <= 0.0) alpha = std::numeric_limits<double>::min();
  result.final_report =
      evaluate(dataset, Policy{Deterministic{mu}}, config.kernel, config.kind,
               config.method, alpha);
  return result;
}

}  // namespace mopl
