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

#include "seedcls/vmf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "seedcls/error.hpp"
#include "seedcls/vector_ops.hpp"

namespace seedcls {

namespace {

constexpr double kSeriesLimit = 200.0;

double log_bessel_i_series(double nu, double x) {
  // I_nu(x) = sum_k (x/2)^(nu+2k) / (k! Gamma(nu+k+1)); terms grow until
  // k ~ x/2 and then decay, so stop once well past the peak.
  const double log_half_x = std::log(0.5 * x);
  double term = nu * log_half_x - std::lgamma(nu + 1.0);
  double peak = term;
  std::vector<double> terms{term};
  for (double k = 0.0;; k += 1.0) {
    term += 2.0 * log_half_x - std::log(k + 1.0) - std::log(nu + k + 1.0);
    terms.push_back(term);
    peak = std::max(peak, term);
    if (term < peak - 40.0 && (0.25 * x * x) < (k + 1.0) * (nu + k + 1.0)) break;
  }
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - peak);
  return peak + std::log(sum);
}

double log_bessel_i_debye(double nu, double x) {
  const double r = std::hypot(nu, x);
  const double t2 = (nu / r) * (nu / r);
  const double p1 = (3.0 - 5.0 * t2) / 24.0;
  const double p2 = (81.0 + t2 * (-462.0 + t2 * 385.0)) / 1152.0;
  const double p3 = (30375.0 + t2 * (-369603.0 + t2 * (765765.0 - t2 * 425425.0))) / 414720.0;
  const double p4 =
      (4465125.0 + t2 * (-94121676.0 + t2 * (349922430.0 + t2 * (-446185740.0 + t2 * 185910725.0)))) /
      39813120.0;
  const double inv_r = 1.0 / r;
  const double correction = 1.0 + inv_r * (p1 + inv_r * (p2 + inv_r * (p3 + inv_r * p4)));
  const double eta_term = nu > 0.0 ? nu * std::log(x / (nu + r)) : 0.0;
  return r + eta_term - 0.5 * std::log(2.0 * std::numbers::pi * r) + std::log(correction);
}

}  // namespace

double log_bessel_i(double nu, double x) {
  if (nu < 0.0 || x < 0.0) throw Error(ErrorCode::kInvalidArgument, "log_bessel_i needs nu >= 0 and x >= 0");
  if (x == 0.0) return nu == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
  return x <= kSeriesLimit ? log_bessel_i_series(nu, x) : log_bessel_i_debye(nu, x);
}

double bessel_ratio(std::size_t p, double kappa) {
  if (p < 2) throw Error(ErrorCode::kInvalidArgument, "dimension must be >= 2");
  if (kappa < 0.0) throw Error(ErrorCode::kInvalidArgument, "kappa must be >= 0");
  if (kappa == 0.0) return 0.0;
  const double nu = 0.5 * static_cast<double>(p) - 1.0;

  // I_{nu+1}/I_nu = 1 / (b_1 + 1/(b_2 + 1/(b_3 + ...))), b_k = 2(nu+k)/x.
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  const double inv_x = 1.0 / kappa;
  double f = 2.0 * (nu + 1.0) * inv_x;
  if (f == 0.0) f = kTiny;
  double c = f;
  double d = 0.0;
  const double max_terms = 10.0 * kappa + 10000.0;
  for (double k = 2.0; k < max_terms; k += 1.0) {
    const double b = 2.0 * (nu + k) * inv_x;
    d = b + d;
    if (d == 0.0) d = kTiny;
    c = b + 1.0 / c;
    if (c == 0.0) c = kTiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < kEps) return 1.0 / f;
  }
  return std::exp(log_bessel_i(nu + 1.0, kappa) - log_bessel_i(nu, kappa));
}

double log_normalizer(std::size_t p, double kappa) {
  if (p < 2) throw Error(ErrorCode::kInvalidArgument, "dimension must be >= 2");
  const double half_p = 0.5 * static_cast<double>(p);
  const double nu = half_p - 1.0;
  if (kappa == 0.0) {
    // Reciprocal surface area of S^{p-1}: Gamma(p/2) / (2 pi^{p/2}).
    return std::lgamma(half_p) - std::log(2.0) - half_p * std::log(std::numbers::pi);
  }
  return nu * std::log(kappa) - half_p * std::log(2.0 * std::numbers::pi) - log_bessel_i(nu, kappa);
}

VmfFit fit_vmf(std::span<const std::vector<double>> vectors) {
  if (vectors.empty()) throw Error(ErrorCode::kInvalidArgument, "vMF fit needs at least one vector");
  const std::size_t p = vectors.front().size();
  if (p < 2) throw Error(ErrorCode::kInvalidArgument, "dimension must be >= 2");
  std::vector<double> resultant(p, 0.0);
  for (const auto& x : vectors) {
    if (x.size() != p) throw Error(ErrorCode::kDimensionMismatch, "vMF fit vectors differ in dimension");
    for (std::size_t k = 0; k < p; ++k) resultant[k] += x[k];
  }
  const double length = norm(resultant);
  if (length < 1e-12) throw Error(ErrorCode::kZeroResultant, "resultant of keyword vectors vanishes");

  VmfFit fit;
  fit.dist.mu = resultant;
  for (double& v : fit.dist.mu) v /= length;
  const double r = std::min(1.0, length / static_cast<double>(vectors.size()));
  fit.mean_resultant_length = r;
  if (r >= 1.0 - 1e-12) {
    fit.dist.kappa = kKappaMax;
    return fit;
  }

  const double pd = static_cast<double>(p);
  double kappa = std::clamp(r * (pd - r * r) / (1.0 - r * r), 0.0, kKappaMax);
  for (int it = 0; it < 50; ++it) {
    const double a = bessel_ratio(p, kappa);
    const double g = a - r;
    if (std::abs(g) < 1e-10) break;
    // dA/dk = 1 - A^2 - (p-1)/k * A, with limit 1/p at k = 0.
    const double slope = kappa > 0.0 ? 1.0 - a * a - (pd - 1.0) / kappa * a : 1.0 / pd;
    if (!(slope > 0.0)) break;
    kappa = std::clamp(kappa - g / slope, 0.0, kKappaMax);
    fit.newton_iterations = it + 1;
  }
  fit.dist.kappa = kappa;
  return fit;
}

std::vector<double> sample_uniform_sphere(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(dim);
  double n = 0.0;
  do {
    for (double& x : v) x = normal(rng);
    n = norm(v);
  } while (n < 1e-300);
  for (double& x : v) x /= n;
  return v;
}

std::vector<double> sample_one(const VmfDistribution& dist, Rng& rng) {
  const std::size_t p = dist.dim();
  if (p < 2) throw Error(ErrorCode::kInvalidArgument, "dimension must be >= 2");
  if (dist.kappa <= 0.0) return sample_uniform_sphere(p, rng);

  const double kappa = dist.kappa;
  const double pm1 = static_cast<double>(p - 1);
  // b = (-2k + sqrt(4k^2 + (p-1)^2)) / (p-1), rationalized to avoid cancellation.
  const double b = pm1 / (2.0 * kappa + std::sqrt(4.0 * kappa * kappa + pm1 * pm1));
  const double x0 = (1.0 - b) / (1.0 + b);
  const double c = kappa * x0 + pm1 * std::log(1.0 - x0 * x0);

  std::gamma_distribution<double> gamma(0.5 * pm1, 1.0);
  double w = 0.0;
  while (true) {
    const double g1 = gamma(rng);
    const double g2 = gamma(rng);
    const double z = g1 / (g1 + g2);
    w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
    const double u = uniform01(rng);
    if (kappa * w + pm1 * std::log(1.0 - x0 * w) - c >= std::log(u)) break;
  }

  // Sample in the frame where mu = e1, then reflect e1 onto mu.
  const std::vector<double> tangent = sample_uniform_sphere(p - 1, rng);
  const double s = std::sqrt(std::max(0.0, 1.0 - w * w));
  std::vector<double> x(p);
  x[0] = w;
  for (std::size_t k = 1; k < p; ++k) x[k] = s * tangent[k - 1];

  std::vector<double> u(dist.mu.begin(), dist.mu.end());
  for (double& v : u) v = -v;
  u[0] += 1.0;
  const double uu = dot(u, u);
  if (uu < 1e-24) return x;
  const double scale = 2.0 * dot(u, x) / uu;
  for (std::size_t k = 0; k < p; ++k) x[k] -= scale * u[k];
  return x;
}

std::vector<std::vector<double>> sample(const VmfDistribution& dist, std::size_t n, Rng& rng) {
  std::vector<std::vector<double>> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(sample_one(dist, rng));
  return out;
}

double log_density(const VmfDistribution& dist, std::span<const double> x) {
  return log_normalizer(dist.dim(), dist.kappa) + dist.kappa * dot(dist.mu, x);
}

}  // namespace seedcls
