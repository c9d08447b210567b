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

#ifndef MOPL_STATS_HPP_
#define MOPL_STATS_HPP_

namespace mopl {

// Standard normal density and distribution function.
double normal_pdf(double x);
double normal_cdf(double x);

// Quantile function of the standard normal distribution. Rational
// approximation (Acklam coefficients) polished with one Halley step against
// erfc, absolute error well below 1e-8 over (0, 1). Throws
// std::invalid_argument outside (0, 1).
double normal_quantile(double p);

}  // namespace mopl

#endif  // MOPL_STATS_HPP_
