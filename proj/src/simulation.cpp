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

#include "mopl/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <tuple>
#include <thread>

#include "mopl/stats.hpp"

namespace mopl {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// Runs fn(i) for i in [0, count) over `workers` threads. Each index writes
// only its own output slot, so scheduling never changes results.
void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  unsigned used = std::max(1u, std::min<unsigned>(workers, count));
  if (used == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(used);
  for (unsigned t = 0; t < used; ++t) {
    pool.emplace_back([t, used, count, &fn] {
      for (std::size_t i = t; i < count; i += used) fn(i);
    });
  }
  for (std::thread& th : pool) th.join();
}

struct CellOutcome {
  bool covered = false;
  double width = 0.0;
  double ess_value = 0.0;
};
}  // namespace

unsigned simulation_worker_count() {
  if (const char* env = std::getenv("MOPL_WORKERS")) {
    char* end = nullptr;
    long parsed = std::strtol(env, &end, 10);
    if (end && *end == '\0' && parsed >= 1) return static_cast<unsigned>(parsed);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

double poisson_rate(const ActionVector& action) {
  if (action.empty()) return 0.0;
  double mean = 0.0;
  for (double v : action) mean += v;
  mean /= static_cast<double>(action.size());
  return std::max(0.0, 0.1 * mean);
}

std::uint64_t poisson_reward(const ActionVector& action, RngStream& rng) {
  return rng.poisson(poisson_rate(action));
}

std::uint64_t poisson_reward(const ActionVector& action, RngSeed seed) {
  RngStream rng(seed);
  return poisson_reward(action, rng);
}

double true_value(const Policy& target) {
  double mean = 0.0;
  double sum_var = 0.0;
  if (const auto* iso = std::get_if<IsotropicGaussian>(&target.variant())) {
    mean = iso->mean[0];
    for (double m : iso->mean) {
      if (std::abs(m - mean) > 1e-12) {
        throw std::invalid_argument(
            "true_value: target must share one mean across dimensions");
      }
    }
    sum_var = static_cast<double>(iso->mean.size()) * iso->sigma * iso->sigma;
  } else if (const auto* diag =
                 std::get_if<DiagonalGaussian>(&target.variant())) {
    mean = diag->mean[0];
    for (double m : diag->mean) {
      if (std::abs(m - mean) > 1e-12) {
        throw std::invalid_argument(
            "true_value: target must share one mean across dimensions");
      }
    }
    for (double s : diag->sigmas) sum_var += s * s;
  } else {
    throw std::invalid_argument("true_value: target must be Gaussian");
  }
  double d = static_cast<double>(target.dim());
  double s = std::sqrt(sum_var) / d;  // sd of the coordinate average
  return 0.1 * (mean * normal_cdf(mean / s) + s * normal_pdf(mean / s));
}

void CoverageConfig::validate() const {
  if (d == 0) throw std::invalid_argument("CoverageConfig: d must be positive");
  if (logging.dim() != d) {
    throw std::invalid_argument("CoverageConfig: logging policy dimension");
  }
  if (logging.is_deterministic()) {
    throw std::invalid_argument(
        "CoverageConfig: logging policy must be stochastic");
  }
  if (replications < 2) {
    throw std::invalid_argument("CoverageConfig: need at least 2 replications");
  }
  if (target_sigmas.empty() || sample_sizes.empty() || kinds.empty() ||
      methods.empty()) {
    throw std::invalid_argument("CoverageConfig: empty grid");
  }
  for (double s : target_sigmas) {
    if (!(s > 0.0)) {
      throw std::invalid_argument("CoverageConfig: target sigma must be > 0");
    }
  }
  for (std::size_t i = 1; i < sample_sizes.size(); ++i) {
    if (sample_sizes[i] <= sample_sizes[i - 1]) {
      throw std::invalid_argument(
          "CoverageConfig: sample sizes must be strictly increasing");
    }
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("CoverageConfig: alpha outside (0, 1)");
  }
}

std::vector<CoverageRow> run_coverage_study(const CoverageConfig& config) {
  config.validate();
  const std::size_t n_kinds = config.kinds.size();
  const std::size_t n_methods = config.methods.size();
  const double z = normal_quantile(1.0 - config.alpha / 2.0);
  const unsigned workers = simulation_worker_count();

  std::vector<CoverageRow> rows;
  rows.reserve(config.target_sigmas.size() * config.sample_sizes.size() *
               n_kinds * n_methods);

  for (double sigma : config.target_sigmas) {
    Policy target{
        IsotropicGaussian{ActionVector(config.d, config.target_mean), sigma}};
    const double truth = true_value(target);

    for (std::size_t n : config.sample_sizes) {
      // One slot per (replication, kind, method); filled in parallel,
      // folded in replication order.
      std::vector<CellOutcome> slots(config.replications * n_kinds *
                                     n_methods);

      parallel_for(
          config.replications, workers, [&](std::size_t rep) {
            RngStream rng(
                {config.master_seed, static_cast<std::uint64_t>(rep)});
            std::vector<double> rewards(n);
            std::vector<double> weights(n);
            double sum_w = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
              ActionVector a = sample_one(config.logging, rng);
              rewards[i] =
                  static_cast<double>(rng.poisson(poisson_rate(a)));
              weights[i] =
                  std::exp(log_density(target, a) -
                           log_density(config.logging, a));
              sum_w += weights[i];
            }

            CellOutcome* base = &slots[rep * n_kinds * n_methods];
            for (std::size_t mi = 0; mi < n_methods; ++mi) {
              const EssMethod method = config.methods[mi];
              double ess_value = 1.0;
              double n_tilde = 1.0;
              bool degenerate = true;
              if (sum_w > 0.0) {
                ess_value = ess(weights, rewards, method);
                n_tilde = corrected_sample_size(n, ess_value);
                degenerate = n_tilde <= 1.0 + 1e-9;
              } else if (method == EssMethod::kCltOnly) {
                ess_value = static_cast<double>(n);
                n_tilde = ess_value;
              }

              for (std::size_t ki = 0; ki < n_kinds; ++ki) {
                const EstimatorKind kind = config.kinds[ki];
                CellOutcome& out = base[ki * n_methods + mi];
                out.ess_value = ess_value;
                if (sum_w == 0.0 && kind == EstimatorKind::kIps &&
                    method == EssMethod::kCltOnly) {
                  // IPS stays defined with zero mass: value 0, zero spread.
                  out.covered = truth == 0.0;
                  out.width = 0.0;
                  continue;
                }
                if (sum_w == 0.0 || degenerate) {
                  // Degraded to the infinite-width interval rather than a
                  // dropped replication.
                  out.covered = true;
                  out.width = kInf;
                  continue;
                }
                double value = kind == EstimatorKind::kIps
                                   ? ips_value(weights, rewards)
                                   : snips_value(weights, rewards);
                double var =
                    kind == EstimatorKind::kIps
                        ? ips_variance(weights, rewards, value, n_tilde)
                        : snips_variance(weights, rewards, value, n_tilde);
                double half = z * std::sqrt(var / n_tilde);
                out.covered = value - half <= truth && truth <= value + half;
                out.width = 2.0 * half;
              }
            }
          });

      for (std::size_t ki = 0; ki < n_kinds; ++ki) {
        for (std::size_t mi = 0; mi < n_methods; ++mi) {
          CoverageRow row;
          row.kind = config.kinds[ki];
          row.method = config.methods[mi];
          row.target_sigma = sigma;
          row.n = n;
          double covered = 0.0;
          double width_sum = 0.0;
          double ess_sum = 0.0;
          for (std::size_t rep = 0; rep < config.replications; ++rep) {
            const CellOutcome& out =
                slots[(rep * n_kinds + ki) * n_methods + mi];
            covered += out.covered ? 1.0 : 0.0;
            width_sum += out.width;
            ess_sum += out.ess_value;
          }
          const double reps = static_cast<double>(config.replications);
          row.coverage = covered / reps;
          row.mean_ci_width = width_sum / reps;
          row.mean_ess = ess_sum / reps;
          rows.push_back(row);
        }
      }
    }
  }
  return rows;
}

std::vector<ReductionRow> min_sample_size_for_coverage(
    const std::vector<CoverageRow>& rows, double level) {
  // Group coverage curves by (kind, method, sigma).
  using Key = std::tuple<EstimatorKind, EssMethod, double>;
  std::map<Key, std::map<std::size_t, double>> curves;
  for (const CoverageRow& row : rows) {
    curves[{row.kind, row.method, row.target_sigma}][row.n] = row.coverage;
  }

  auto find_n_star =
      [&](const std::map<std::size_t, double>& curve) -> std::optional<std::size_t> {
    std::optional<std::size_t> best;
    for (auto it = curve.rbegin(); it != curve.rend(); ++it) {
      if (it->second >= level) {
        best = it->first;
      } else {
        break;  // must hold at every larger grid size
      }
    }
    return best;
  };

  std::vector<ReductionRow> result;
  for (const auto& [key, curve] : curves) {
    const auto& [kind, method, sigma] = key;
    ReductionRow row;
    row.kind = kind;
    row.method = method;
    row.target_sigma = sigma;
    row.n_star = find_n_star(curve);
    auto clt = curves.find({kind, EssMethod::kCltOnly, sigma});
    if (row.n_star.has_value() && clt != curves.end()) {
      std::optional<std::size_t> clt_star = find_n_star(clt->second);
      if (clt_star.has_value()) {
        row.ratio_vs_clt = static_cast<double>(*clt_star) /
                           static_cast<double>(*row.n_star);
      }
    }
    result.push_back(row);
  }
  return result;
}

void CodConfig::validate() const {
  if (dims.empty()) throw std::invalid_argument("CodConfig: empty dims");
  for (std::size_t d : dims) {
    if (d == 0) throw std::invalid_argument("CodConfig: dims must be positive");
  }
  if (n_samples == 0) {
    throw std::invalid_argument("CodConfig: n_samples must be positive");
  }
  if (!(normal_sigma > 0.0)) {
    throw std::invalid_argument("CodConfig: normal_sigma must be positive");
  }
  for (double e : epsilons) {
    if (!(e > 0.0 && e <= 0.5)) {
      throw std::invalid_argument("CodConfig: epsilons must lie in (0, 0.5]");
    }
  }
}

std::vector<double> cod_normalised_distances(CodFamily family, std::size_t d,
                                             std::size_t n, double normal_sigma,
                                             RngSeed seed) {
  RngStream rng(seed);
  const double normaliser = std::sqrt(0.25 * static_cast<double>(d));
  std::vector<double> distances(n);
  for (std::size_t i = 0; i < n; ++i) {
    double ss = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      double x = family == CodFamily::kUniform ? rng.uniform() - 0.5
                                               : normal_sigma * rng.normal();
      ss += x * x;
    }
    distances[i] = std::sqrt(ss) / normaliser;
  }
  return distances;
}

CodResult run_cod_study(const CodConfig& config) {
  config.validate();
  constexpr std::size_t kCdfGridPoints = 1000;
  const std::vector<CodFamily> families = {CodFamily::kUniform,
                                           CodFamily::kNormal};
  struct Task {
    CodFamily family;
    std::size_t d;
    std::vector<CodCdfRow> cdf;
    std::vector<CodMassRow> mass;
  };
  std::vector<Task> tasks;
  for (CodFamily family : families) {
    for (std::size_t d : config.dims) tasks.push_back({family, d, {}, {}});
  }

  parallel_for(tasks.size(), simulation_worker_count(), [&](std::size_t ti) {
    Task& task = tasks[ti];
    RngStream rng({config.master_seed, static_cast<std::uint64_t>(ti)});
    const double normaliser = std::sqrt(0.25 * static_cast<double>(task.d));
    const std::size_t n = config.n_samples;

    std::vector<double> distances(n);
    std::vector<double> eps_sorted = config.epsilons;
    std::sort(eps_sorted.begin(), eps_sorted.end());
    std::vector<std::size_t> in_box(eps_sorted.size(), 0);

    for (std::size_t i = 0; i < n; ++i) {
      double ss = 0.0;
      double max_abs = 0.0;
      for (std::size_t k = 0; k < task.d; ++k) {
        double x = task.family == CodFamily::kUniform
                       ? rng.uniform() - 0.5
                       : config.normal_sigma * rng.normal();
        ss += x * x;
        max_abs = std::max(max_abs, std::abs(x));
      }
      distances[i] = std::sqrt(ss) / normaliser;
      // The point lies in the eps-box exactly when max_abs <= eps.
      auto first = std::lower_bound(eps_sorted.begin(), eps_sorted.end(),
                                    max_abs);
      for (std::size_t e = first - eps_sorted.begin(); e < eps_sorted.size();
           ++e) {
        ++in_box[e];
      }
    }

    std::sort(distances.begin(), distances.end());
    task.cdf.reserve(kCdfGridPoints);
    std::size_t cursor = 0;
    for (std::size_t j = 1; j <= kCdfGridPoints; ++j) {
      double x = static_cast<double>(j) / kCdfGridPoints;
      while (cursor < n && distances[cursor] <= x) ++cursor;
      task.cdf.push_back({task.family, task.d, x,
                          static_cast<double>(cursor) / n});
    }

    task.mass.reserve(eps_sorted.size());
    for (std::size_t e = 0; e < eps_sorted.size(); ++e) {
      double eps = eps_sorted[e];
      double per_dim_inside =
          task.family == CodFamily::kUniform
              ? 2.0 * eps
              : 2.0 * normal_cdf(eps / config.normal_sigma) - 1.0;
      CodMassRow row;
      row.family = task.family;
      row.d = task.d;
      row.epsilon = eps;
      row.empirical_fraction = static_cast<double>(in_box[e]) / n;
      row.analytic_fraction =
          std::pow(per_dim_inside, static_cast<double>(task.d));
      row.all_outside_fraction =
          std::pow(1.0 - per_dim_inside, static_cast<double>(task.d));
      task.mass.push_back(row);
    }
  });

  CodResult result;
  for (Task& task : tasks) {
    result.cdf.insert(result.cdf.end(), task.cdf.begin(), task.cdf.end());
    result.mass.insert(result.mass.end(), task.mass.begin(), task.mass.end());
  }
  return result;
}

double benchmark_reward_probability(const ActionVector& action) {
  double ss = 0.0;
  for (double v : action) {
    double diff = v - 0.3;
    ss += diff * diff;
  }
  return std::exp(-0.5 * ss);
}

LoggedDataset make_learning_benchmark(RngSeed seed, std::size_t n,
                                      std::size_t d) {
  if (n == 0 || d == 0) {
    throw std::invalid_argument("make_learning_benchmark: n and d positive");
  }
  Policy logging{IsotropicGaussian{ActionVector(d, 0.0), 1.0}};
  RngStream rng(seed);
  LoggedDataset dataset;
  dataset.d = d;
  dataset.samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    LoggedSample s;
    s.action = sample_one(logging, rng);
    s.reward = rng.bernoulli(benchmark_reward_probability(s.action)) ? 1.0 : 0.0;
    s.logging_density = std::exp(log_density(logging, s.action));
    dataset.samples.push_back(std::move(s));
  }
  dataset.logging_policy = logging;
  return dataset;
}

}  // namespace mopl
