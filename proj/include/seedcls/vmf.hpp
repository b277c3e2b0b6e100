// Copyright 2026 The seedcls Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "seedcls/random.hpp"

namespace seedcls {

/// Concentration cap; beyond this the distribution is numerically a point mass.
inline constexpr double kKappaMax = 1e5;

/// von Mises-Fisher distribution on the unit sphere in R^p.
struct VmfDistribution {
  std::vector<double> mu;  // unit mean direction
  double kappa = 0.0;      // concentration, in [0, kKappaMax]

  std::size_t dim() const { return mu.size(); }
};

/// log I_nu(x) for nu >= 0, x >= 0. Ascending series (in log space) for
/// x <= 200, Debye uniform asymptotic expansion above. Never forms I_nu.
double log_bessel_i(double nu, double x);

/// A_p(kappa) = I_{p/2}(kappa) / I_{p/2-1}(kappa), evaluated by Gauss's
/// continued fraction with modified Lentz iteration. A_p(0) = 0.
double bessel_ratio(std::size_t p, double kappa);

/// ln c_p(kappa), the log normalizer of the density on S^{p-1}.
double log_normalizer(std::size_t p, double kappa);

struct VmfFit {
  VmfDistribution dist;
  double mean_resultant_length = 0.0;
  int newton_iterations = 0;
};

/// Maximum-likelihood fit from unit vectors (rows of a t x p buffer or a list
/// of vectors). Mean direction is the normalized resultant; kappa starts at
/// the closed-form approximation R(p - R^2)/(1 - R^2) and is refined by Newton
/// steps on A_p(kappa) = R, each step clamped into [0, kKappaMax].
/// Throws ZeroResultant if the resultant vanishes.
VmfFit fit_vmf(std::span<const std::vector<double>> vectors);

inline VmfDistribution estimate(std::span<const std::vector<double>> vectors) {
  return fit_vmf(vectors).dist;
}

/// Uniform draw on S^{dim-1}.
std::vector<double> sample_uniform_sphere(std::size_t dim, Rng& rng);

/// One draw via Wood's rejection sampler, rotated onto mu by a Householder
/// reflection. kappa == 0 falls back to uniform sampling.
std::vector<double> sample_one(const VmfDistribution& dist, Rng& rng);

std::vector<std::vector<double>> sample(const VmfDistribution& dist, std::size_t n, Rng& rng);

/// ln c_p(kappa) + kappa * mu^T x.
double log_density(const VmfDistribution& dist, std::span<const double> x);

}  // namespace seedcls
