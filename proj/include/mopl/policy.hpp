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

#ifndef MOPL_POLICY_HPP_
#define MOPL_POLICY_HPP_

#include <cstddef>
#include <variant>
#include <vector>

#include "mopl/rng.hpp"

namespace mopl {

// A point in the d-dimensional continuous action space: the scalarisation
// weight vector. Entries must be finite; dimension agreement with the
// surrounding policy/dataset is enforced at the operation boundaries.
using ActionVector = std::vector<double>;

// Throws std::invalid_argument if any entry is NaN or infinite.
void check_finite(const ActionVector& a, const char* what);

// Diagonal Gaussian bandwidth used to smooth deterministic policies.
struct KernelConfig {
  std::vector<double> bandwidth_sigmas;

  static KernelConfig isotropic(double sigma, std::size_t d);
  void validate() const;  // all bandwidths strictly positive and finite
};

struct IsotropicGaussian {
  ActionVector mean;
  double sigma = 1.0;
};

struct DiagonalGaussian {
  ActionVector mean;
  std::vector<double> sigmas;
};

struct UniformBox {
  ActionVector low;
  ActionVector high;
};

// A point mass. It has no density: evaluating one against logged data goes
// through a Gaussian kernel (see importance_weights / kernel_log_density).
struct Deterministic {
  ActionVector point;
};

class Policy {
 public:
  using Variant =
      std::variant<IsotropicGaussian, DiagonalGaussian, UniformBox,
                   Deterministic>;

  explicit Policy(Variant v);  // validates shape invariants

  const Variant& variant() const { return variant_; }
  std::size_t dim() const;
  bool is_deterministic() const;

 private:
  Variant variant_;
};

// Log probability density of `a` under `policy`. UniformBox returns
// -log(volume) inside the box (boundary inclusive) and -infinity outside.
// Throws for Deterministic policies ("no density; supply a KernelConfig")
// and on dimension mismatch.
double log_density(const Policy& policy, const ActionVector& a);

// Log density at `a` of the diagonal Gaussian centred at `point` with the
// kernel's bandwidths. Symmetric in (point, a).
double kernel_log_density(const ActionVector& point, const KernelConfig& kernel,
                          const ActionVector& a);

// n i.i.d. draws, fully reproducible given the seed. Deterministic policies
// yield n copies of their point.
std::vector<ActionVector> sample(const Policy& policy, RngSeed seed,
                                 std::size_t n);

// Single draw from an existing stream (the building block of sample()).
ActionVector sample_one(const Policy& policy, RngStream& rng);

}  // namespace mopl

#endif  // MOPL_POLICY_HPP_
