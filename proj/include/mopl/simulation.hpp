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

#ifndef MOPL_SIMULATION_HPP_
#define MOPL_SIMULATION_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mopl/estimators.hpp"

namespace mopl {

// Synthetic interval-coverage study: logged data from `logging` with Poisson
// rewards, evaluated against Gaussian targets centred at target_mean with the
// listed standard deviations. Replication r draws from stream (master_seed,
// r), restarted per cell, so output is independent of execution order and
// worker count.
struct CoverageConfig {
  std::size_t d = 5;
  Policy logging{IsotropicGaussian{ActionVector(5, 0.0), 1.0}};
  double target_mean = 0.5;
  std::vector<double> target_sigmas = {1.0, 0.5, 0.25, 0.125, 0.0625};
  std::vector<std::size_t> sample_sizes = {8,    16,   32,   64,   128,  256,
                                           512,  1024, 2048, 4096, 8192, 16384};
  std::size_t replications = 500;
  double alpha = 0.05;
  std::vector<EstimatorKind> kinds = {EstimatorKind::kSnips};
  std::vector<EssMethod> methods = {EssMethod::kCltOnly, EssMethod::kP2,
                                    EssMethod::kP2R, EssMethod::kDInf,
                                    EssMethod::kDInfR};
  std::uint64_t master_seed = 0;

  void validate() const;
};

struct CoverageRow {
  EstimatorKind kind;
  EssMethod method;
  double target_sigma = 0.0;
  std::size_t n = 0;
  double coverage = 0.0;
  double mean_ci_width = 0.0;  // +inf when any replication degenerated
  double mean_ess = 0.0;
};

// Smallest sample size at which a method's empirical coverage reaches
// `level` and stays there for every larger grid size, plus its reduction
// ratio against the uncorrected CltOnly baseline. Unreached cells are empty.
struct ReductionRow {
  EstimatorKind kind;
  EssMethod method;
  double target_sigma = 0.0;
  std::optional<std::size_t> n_star;
  std::optional<double> ratio_vs_clt;
};

// Geometry study of uniform-box vs Gaussian sampling in growing dimension:
// normalised distance-to-centre CDFs and centred-box masses.
struct CodConfig {
  std::vector<std::size_t> dims = {1, 2, 4, 8, 16};
  std::size_t n_samples = 100000;
  double normal_sigma = 0.25;
  std::vector<double> epsilons = {0.05, 0.10, 0.15, 0.20, 0.25,
                                  0.30, 0.35, 0.40, 0.45, 0.50};
  std::uint64_t master_seed = 0;

  void validate() const;
};

enum class CodFamily { kUniform, kNormal };

struct CodCdfRow {
  CodFamily family;
  std::size_t d = 0;
  double normalised_distance = 0.0;
  double cdf = 0.0;
};

struct CodMassRow {
  CodFamily family;
  std::size_t d = 0;
  double epsilon = 0.0;
  double empirical_fraction = 0.0;
  // Exact mass of {a : |a_k| <= eps for all k}: (2 eps)^d for the unit box,
  // (2 Phi(eps/sigma) - 1)^d for the Gaussian.
  double analytic_fraction = 0.0;
  // Exact mass of the complementary event that every coordinate falls
  // outside the band: (1 - 2 eps)^d resp. (2 (1 - Phi(eps/sigma)))^d.
  double all_outside_fraction = 0.0;
};

struct CodResult {
  std::vector<CodCdfRow> cdf;
  std::vector<CodMassRow> mass;
};

// Poisson reward rate for an action: max(0, 0.1 * mean of the weights).
double poisson_rate(const ActionVector& action);

// One Poisson reward draw for the action, from a fresh stream / an existing
// stream.
std::uint64_t poisson_reward(const ActionVector& action, RngSeed seed);
std::uint64_t poisson_reward(const ActionVector& action, RngStream& rng);

// Exact expected Poisson reward under a Gaussian target with common mean m
// per dimension: with abar ~ N(m, s^2), s = sqrt(sum sigma_k^2)/d, the
// rectified mean gives 0.1 (m Phi(m/s) + s phi(m/s)).
double true_value(const Policy& target);

std::vector<CoverageRow> run_coverage_study(const CoverageConfig& config);

std::vector<ReductionRow> min_sample_size_for_coverage(
    const std::vector<CoverageRow>& rows, double level);

CodResult run_cod_study(const CodConfig& config);

// Raw normalised distances for one (family, d) cell; the same draws the
// study tabulates, exposed for distribution tests.
std::vector<double> cod_normalised_distances(CodFamily family, std::size_t d,
                                             std::size_t n, double normal_sigma,
                                             RngSeed seed);

// Reward probability surface of the learning benchmark:
// p(a) = exp(-||a - 0.3||^2 / 2), maximised at a* = 0.3 per dimension.
double benchmark_reward_probability(const ActionVector& action);

// Logged dataset with standard-normal logging policy, Bernoulli(p(a))
// rewards and exact recorded propensities. The expected-reward surface has
// its unique maximiser at 0.3 per dimension.
LoggedDataset make_learning_benchmark(RngSeed seed, std::size_t n,
                                      std::size_t d);

// Worker count for study parallelism: the MOPL_WORKERS environment variable
// when set, otherwise the hardware concurrency. Never affects output bytes.
unsigned simulation_worker_count();

}  // namespace mopl

#endif  // MOPL_SIMULATION_HPP_
