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

#include <boost/math/special_functions/bessel.hpp>
#include <chrono>
#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "seedcls/vector_ops.hpp"
#include "seedcls/vmf.hpp"

using namespace seedcls;

namespace {

constexpr double kPi = std::numbers::pi;

double a3(double k) { return 1.0 / std::tanh(k) - 1.0 / k; }

std::vector<double> resultant_direction(const std::vector<std::vector<double>>& xs) {
  std::vector<double> s(xs[0].size(), 0.0);
  for (const auto& x : xs)
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += x[i];
  return normalized(s);
}

}  // namespace

TEST_CASE("log Bessel I against boost") {
  // long double keeps the oracle finite well past the double range
  for (double nu : {0.0, 0.5, 1.5, 4.0, 49.0, 149.0}) {
    for (double x : {1e-3, 0.5, 3.0, 30.0, 150.0, 199.0, 201.0, 700.0, 2000.0, 8000.0}) {
      const long double ref = boost::math::cyl_bessel_i(static_cast<long double>(nu), static_cast<long double>(x));
      const double expected = static_cast<double>(std::log(ref));
      CAPTURE(nu);
      CAPTURE(x);
      CHECK(log_bessel_i(nu, x) == doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("bessel ratio") {
  CHECK(bessel_ratio(3, 0.0) == 0.0);
  CHECK(bessel_ratio(100, 0.0) == 0.0);
  CHECK(std::abs(bessel_ratio(3, 2.0) - a3(2.0)) <= 1e-10);
  CHECK(bessel_ratio(10, 5.0) < bessel_ratio(10, 50.0));

  SUBCASE("p = 3 closed form over a grid") {
    for (double k = 0.05; k < 2000; k *= 1.3) CHECK(std::abs(bessel_ratio(3, k) - a3(k)) <= 1e-10);
  }
  SUBCASE("general p against boost") {
    for (std::size_t p : {2u, 5u, 10u, 100u}) {
      for (double k : {0.1, 1.0, 10.0, 80.0, 300.0}) {
        const double nu = p / 2.0;
        const double expected = boost::math::cyl_bessel_i(nu, k) / boost::math::cyl_bessel_i(nu - 1, k);
        CHECK(bessel_ratio(p, k) == doctest::Approx(expected).epsilon(1e-10));
      }
    }
  }
  SUBCASE("strictly increasing and inside [0, 1)") {
    for (std::size_t p : {2u, 3u, 10u, 100u}) {
      double prev = bessel_ratio(p, 0.0);
      for (double k = 0.01; k <= kKappaMax; k *= 1.2) {
        const double a = bessel_ratio(p, k);
        CHECK(a > prev);
        CHECK(a < 1.0);
        prev = a;
      }
    }
  }
}

TEST_CASE("log normalizer and density") {
  SUBCASE("p = 3 closed form") {
    for (double k : {0.5, 2.0, 10.0, 200.0}) {
      const double expected = std::log(k) - std::log(4 * kPi) - (k + std::log1p(-std::exp(-2 * k)) - std::log(2.0));
      CHECK(std::abs(log_normalizer(3, k) - expected) <= 1e-9);
    }
    CHECK(std::abs(std::exp(log_normalizer(3, 2.0)) - 2.0 / (4 * kPi * std::sinh(2.0))) <= 1e-9);
  }
  SUBCASE("kappa = 0 is uniform") {
    Rng rng(1);
    for (std::size_t p : {2u, 3u, 10u}) {
      const double area = 2 * std::pow(kPi, p / 2.0) / std::tgamma(p / 2.0);
      VmfDistribution d{testing::random_unit(p, rng), 0.0};
      for (int i = 0; i < 5; ++i) {
        CHECK(log_density(d, testing::random_unit(p, rng)) == doctest::Approx(-std::log(area)).epsilon(1e-12));
      }
    }
  }
  SUBCASE("antipodal difference") {
    Rng rng(2);
    VmfDistribution d{testing::random_unit(7, rng), 13.5};
    std::vector<double> neg(d.mu);
    for (double& x : neg) x = -x;
    CHECK(log_density(d, d.mu) - log_density(d, neg) == doctest::Approx(27.0).epsilon(1e-12));
  }
}

TEST_CASE("fit_vmf") {
  SUBCASE("identical vectors clamp kappa") {
    std::vector<std::vector<double>> xs(5, std::vector<double>{0.6, 0.8, 0.0});
    auto fit = fit_vmf(xs);
    CHECK(fit.dist.kappa == kKappaMax);
    CHECK(fit.mean_resultant_length == doctest::Approx(1.0));
    CHECK(fit.dist.mu[0] == doctest::Approx(0.6));
  }
  SUBCASE("antipodal vectors") {
    std::vector<std::vector<double>> xs{{1, 0}, {-1, 0}};
    CHECK(testing::thrown_code([&] { fit_vmf(xs); }) == "ZeroResultant");
  }
  SUBCASE("MLE solves A_p(kappa) = R and stays in range") {
    Rng rng(3);
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t p = 2 + uniform_index(rng, 60);
      std::vector<std::vector<double>> xs;
      for (std::size_t i = 0; i < 3 + uniform_index(rng, 30); ++i) xs.push_back(testing::random_unit(p, rng));
      auto fit = fit_vmf(xs);
      CHECK(fit.dist.kappa >= 0.0);
      CHECK(fit.dist.kappa <= kKappaMax);
      if (fit.dist.kappa < kKappaMax) {
        CHECK(std::abs(bessel_ratio(p, fit.dist.kappa) - fit.mean_resultant_length) <= 1e-9);
      }
      // duplicating every vector changes nothing
      auto doubled = xs;
      doubled.insert(doubled.end(), xs.begin(), xs.end());
      auto fit2 = fit_vmf(doubled);
      CHECK(fit2.dist.kappa == doctest::Approx(fit.dist.kappa).epsilon(1e-9));
      CHECK(dot(fit2.dist.mu, fit.dist.mu) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("sampling") {
  SUBCASE("round trip at kappa 50, p 10") {
    Rng rng(10);
    const auto start = std::chrono::steady_clock::now();
    VmfDistribution truth{testing::random_unit(10, rng), 50.0};
    auto xs = sample(truth, 10000, rng);
    auto est = estimate(xs);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(dot(est.mu, truth.mu) >= 0.999);
    CHECK(std::abs(est.kappa - 50.0) / 50.0 <= 0.10);
    CHECK(secs < 5.0);
    for (const auto& x : xs) CHECK(std::abs(norm(x) - 1.0) <= 1e-12);
  }
  SUBCASE("kappa 0 is uniform") {
    Rng rng(11);
    VmfDistribution d{testing::random_unit(8, rng), 0.0};
    auto xs = sample(d, 10000, rng);
    std::vector<double> s(8, 0.0);
    for (const auto& x : xs)
      for (int i = 0; i < 8; ++i) s[i] += x[i];
    CHECK(norm(s) / 10000.0 <= 0.05);
  }
  SUBCASE("kappa max concentrates") {
    Rng rng(12);
    for (std::size_t p : {3u, 100u}) {
      VmfDistribution d{testing::random_unit(p, rng), kKappaMax};
      for (const auto& x : sample(d, 2000, rng)) CHECK(dot(x, d.mu) >= 0.99);
    }
  }
  SUBCASE("mean direction converges with n") {
    Rng rng(13);
    double small = 0, large = 0;
    for (int rep = 0; rep < 20; ++rep) {
      VmfDistribution d{testing::random_unit(10, rng), 5.0};
      small += dot(resultant_direction(sample(d, 100, rng)), d.mu);
      large += dot(resultant_direction(sample(d, 10000, rng)), d.mu);
    }
    CHECK(large > small);
  }
  SUBCASE("p = 3 marginal of w matches its closed-form mean") {
    // E[mu . x] = A_3(kappa)
    Rng rng(14);
    VmfDistribution d{testing::random_unit(3, rng), 4.0};
    double s = 0;
    const int n = 100000;
    for (const auto& x : sample(d, n, rng)) s += dot(x, d.mu);
    CHECK(std::abs(s / n - a3(4.0)) < 0.005);
  }
}
