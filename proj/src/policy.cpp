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

#include "mopl/policy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mopl {

namespace {
constexpr double kLog2Pi = 1.8378770664093453;

void check_positive_scales(const std::vector<double>& s, const char* what) {
  for (double v : s) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string(what) +
                                  ": scale parameters must be positive and "
                                  "finite");
    }
  }
}

void check_dim(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(expected) + " vs " +
                                std::to_string(got) + ")");
  }
}

double diagonal_gaussian_log_density(const ActionVector& mean,
                                     const std::vector<double>& sigmas,
                                     const ActionVector& a) {
  double quad = 0.0;
  double log_scale = 0.0;
  for (std::size_t k = 0; k < mean.size(); ++k) {
    double z = (a[k] - mean[k]) / sigmas[k];
    quad += z * z;
    log_scale += std::log(sigmas[k]);
  }
  return -0.5 * quad - log_scale -
         0.5 * static_cast<double>(mean.size()) * kLog2Pi;
}
}  // namespace

void check_finite(const ActionVector& a, const char* what) {
  for (double v : a) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument(std::string(what) +
                                  ": entries must be finite");
    }
  }
}

KernelConfig KernelConfig::isotropic(double sigma, std::size_t d) {
  KernelConfig k{std::vector<double>(d, sigma)};
  k.validate();
  return k;
}

void KernelConfig::validate() const {
  if (bandwidth_sigmas.empty()) {
    throw std::invalid_argument("KernelConfig: empty bandwidth");
  }
  check_positive_scales(bandwidth_sigmas, "KernelConfig");
}

Policy::Policy(Variant v) : variant_(std::move(v)) {
  std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, IsotropicGaussian>) {
          check_finite(p.mean, "IsotropicGaussian mean");
          check_positive_scales({p.sigma}, "IsotropicGaussian");
          if (p.mean.empty())
            throw std::invalid_argument("IsotropicGaussian: empty mean");
        } else if constexpr (std::is_same_v<T, DiagonalGaussian>) {
          check_finite(p.mean, "DiagonalGaussian mean");
          check_positive_scales(p.sigmas, "DiagonalGaussian");
          if (p.mean.empty())
            throw std::invalid_argument("DiagonalGaussian: empty mean");
          check_dim(p.mean.size(), p.sigmas.size(), "DiagonalGaussian");
        } else if constexpr (std::is_same_v<T, UniformBox>) {
          check_finite(p.low, "UniformBox low");
          check_finite(p.high, "UniformBox high");
          check_dim(p.low.size(), p.high.size(), "UniformBox");
          if (p.low.empty())
            throw std::invalid_argument("UniformBox: empty bounds");
          for (std::size_t k = 0; k < p.low.size(); ++k) {
            if (!(p.low[k] < p.high[k])) {
              throw std::invalid_argument(
                  "UniformBox: low[k] must be strictly below high[k]");
            }
          }
        } else {
          check_finite(p.point, "Deterministic point");
          if (p.point.empty())
            throw std::invalid_argument("Deterministic: empty point");
        }
      },
      variant_);
}

std::size_t Policy::dim() const {
  return std::visit(
      [](const auto& p) -> std::size_t {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, IsotropicGaussian>) {
          return p.mean.size();
        } else if constexpr (std::is_same_v<T, DiagonalGaussian>) {
          return p.mean.size();
        } else if constexpr (std::is_same_v<T, UniformBox>) {
          return p.low.size();
        } else {
          return p.point.size();
        }
      },
      variant_);
}

bool Policy::is_deterministic() const {
  return std::holds_alternative<Deterministic>(variant_);
}

double log_density(const Policy& policy, const ActionVector& a) {
  check_dim(policy.dim(), a.size(), "log_density");
  return std::visit(
      [&a](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, IsotropicGaussian>) {
          std::vector<double> sigmas(p.mean.size(), p.sigma);
          return diagonal_gaussian_log_density(p.mean, sigmas, a);
        } else if constexpr (std::is_same_v<T, DiagonalGaussian>) {
          return diagonal_gaussian_log_density(p.mean, p.sigmas, a);
        } else if constexpr (std::is_same_v<T, UniformBox>) {
          double log_volume = 0.0;
          for (std::size_t k = 0; k < p.low.size(); ++k) {
            if (a[k] < p.low[k] || a[k] > p.high[k]) {
              return -std::numeric_limits<double>::infinity();
            }
            log_volume += std::log(p.high[k] - p.low[k]);
          }
          return -log_volume;
        } else {
          throw std::invalid_argument(
              "deterministic policy has no density; supply a KernelConfig");
        }
      },
      policy.variant());
}

double kernel_log_density(const ActionVector& point, const KernelConfig& kernel,
                          const ActionVector& a) {
  kernel.validate();
  check_dim(point.size(), kernel.bandwidth_sigmas.size(), "kernel_log_density");
  check_dim(point.size(), a.size(), "kernel_log_density");
  return diagonal_gaussian_log_density(point, kernel.bandwidth_sigmas, a);
}

ActionVector sample_one(const Policy& policy, RngStream& rng) {
  return std::visit(
      [&rng](const auto& p) -> ActionVector {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, IsotropicGaussian>) {
          ActionVector a(p.mean.size());
          for (std::size_t k = 0; k < a.size(); ++k) {
            a[k] = p.mean[k] + p.sigma * rng.normal();
          }
          return a;
        } else if constexpr (std::is_same_v<T, DiagonalGaussian>) {
          ActionVector a(p.mean.size());
          for (std::size_t k = 0; k < a.size(); ++k) {
            a[k] = p.mean[k] + p.sigmas[k] * rng.normal();
          }
          return a;
        } else if constexpr (std::is_same_v<T, UniformBox>) {
          ActionVector a(p.low.size());
          for (std::size_t k = 0; k < a.size(); ++k) {
            a[k] = p.low[k] + rng.uniform() * (p.high[k] - p.low[k]);
          }
          return a;
        } else {
          return p.point;
        }
      },
      policy.variant());
}

std::vector<ActionVector> sample(const Policy& policy, RngSeed seed,
                                 std::size_t n) {
  if (n == 0) throw std::invalid_argument("sample: n must be >= 1");
  RngStream rng(seed);
  std::vector<ActionVector> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(sample_one(policy, rng));
  return out;
}

}  // namespace mopl
