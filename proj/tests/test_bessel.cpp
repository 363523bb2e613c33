#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "torsionlab/bessel.hpp"
#include "torsionlab/error.hpp"

using namespace torsionlab;
using namespace torsionlab::bessel;

namespace {

constexpr double kPi = std::numbers::pi;

struct Frozen {
  double nu, z, scaled;
};

// exp(-z) I_nu(z) from 40-digit arithmetic.
const Frozen kFrozen[] = {
    {0, 10000.0, 0.0039894726746047321064},
    {200, 10000.0, 0.00053989841809842857601},
    {200, 150, 2.5534213606724003984e-54},
    {50, 60, 1.1124803610686486155e-10},
    {100, 30, 3.6940545501866372471e-53},
    {0.5, 0.1, 0.22868316607552338863},
    {3.7, 25.5, 0.060405221922435214671},
    {120, 5000, 0.0013366550621091690208},
    {0, 0.001, 0.99900074958351555937},
    {75.25, 80, 1.3313812539192500734e-16},
    {10, 22, 0.008707874488429938887},
};

double rel(double a, double b) { return std::abs(a / b - 1.0); }

// J_0(x) = (1/pi) int_0^pi cos(x sin th) dth; the trapezoid rule on this
// periodic integrand converges geometrically once n exceeds x.
double j0_integral(double x) {
  const int n = 600;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += std::cos(x * std::sin(kPi * (i + 0.5) / n));
  return s / n;
}

}  // namespace

TEST_SUITE("bessel") {
  TEST_CASE("half-order closed form") {
    CHECK(rel(bessel_i(0.5, 1.0, false), 0.9376748882454862) < 1e-14);
    for (int i = 0; i < 200; ++i) {
      const double z = 1e-3 * std::pow(3e4, i / 199.0);
      const double exact = std::sqrt(2.0 / (kPi * z)) * std::sinh(z);
      CHECK(rel(bessel_i(0.5, z, false), exact) < 1e-12);
    }
  }

  TEST_CASE("frozen high-precision values") {
    for (const auto& f : kFrozen) {
      INFO("nu = " << f.nu << ", z = " << f.z);
      CHECK(rel(bessel_i(f.nu, f.z, true), f.scaled) < 1e-12);
    }
  }

  TEST_CASE("agreement with an independent library where it does not overflow") {
    for (double nu : {0.0, 0.25, 1.0, 2.5, 7.0, 19.5, 60.0})
      for (double z : {0.01, 0.7, 3.0, 12.0, 24.0, 35.0, 49.0}) {
        INFO("nu = " << nu << ", z = " << z);
        const double ref = boost::math::cyl_bessel_i(nu, z);
        if (ref > 1e-290) CHECK(rel(bessel_i(nu, z, false), ref) < 2e-13);
      }
  }

  TEST_CASE("small-argument leading term") {
    const double nu = 2.5, z = 1e-6;
    const double lead = std::pow(z / 2, nu) / boost::math::tgamma(nu + 1);
    CHECK(std::abs(bessel_i(nu, z, false) / lead - 1.0) < 1e-8);
  }

  TEST_CASE("scaled form survives large arguments") {
    const double v = bessel_i(0.0, 700.0, true);
    CHECK(std::isfinite(v));
    CHECK(v > 0);
    CHECK(rel(v, 1.0 / std::sqrt(2 * kPi * 700.0) * (1 + 1.0 / (8 * 700.0))) < 1e-6);
    CHECK_THROWS_AS(bessel_i(0.0, 60.0, false), Error);
    CHECK_THROWS_AS(bessel_i(-1.0, 1.0, true), Error);
    CHECK_THROWS_AS(bessel_i(1.0, 0.0, true), Error);
  }

  TEST_CASE("evaluation regimes agree on their overlaps") {
    for (double nu : {0.0, 0.5, 3.0, 6.5})
      for (double z : {25.0, 30.0, 40.0}) {
        const double s = detail::i_scaled_series(nu, z);
        const double h = detail::i_scaled_hankel(nu, z);
        const double c = detail::i_scaled_continued_fraction(nu, z);
        CHECK(rel(s, c) < 1e-11);
        CHECK(rel(h, c) < 1e-11);
      }
    for (double nu : {20.0, 45.0, 90.0})
      for (double z : {nu * 0.8, nu, nu * 1.5}) {
        CHECK(rel(detail::i_scaled_series(nu, z), detail::i_scaled_continued_fraction(nu, z)) < 1e-11);
      }
  }

  TEST_CASE("J zeros: closed form and bisection oracle") {
    const auto half = bessel_j_zeros(0.5, std::pow(3.5 * kPi, 2));
    REQUIRE(half.size() == 3);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(half[k] - kPi * (k + 1)) < 1e-12);

    const auto z0 = bessel_j_zeros(0.0, 160.0 * 160.0);
    REQUIRE(z0.size() >= 50);
    CHECK(std::abs(z0[0] - 2.404825557695773) < 1e-10);
    CHECK(std::abs(z0[49] - 156.29503426853352) < 1e-10);
    // Bisection on the integral representation, bracketed around each zero.
    for (int k : {0, 9, 24, 49}) {
      double a = z0[k] - 0.3, b = z0[k] + 0.3;
      REQUIRE(j0_integral(a) * j0_integral(b) < 0);
      for (int it = 0; it < 100; ++it) {
        const double m = 0.5 * (a + b);
        (j0_integral(a) * j0_integral(m) <= 0 ? b : a) = m;
      }
      CHECK(std::abs(z0[k] - 0.5 * (a + b)) < 1e-10);
    }
  }

  TEST_CASE("J zeros: ordering properties") {
    double prev = 0.0;
    for (double nu : {0.0, 0.5, 1.0, 2.0, 5.0}) {
      const auto z = bessel_j_zeros(nu, 400.0);
      REQUIRE_FALSE(z.empty());
      CHECK(z[0] > nu);
      CHECK(z[0] > prev);
      prev = z[0];
      for (std::size_t k = 1; k < z.size(); ++k) CHECK(z[k] > z[k - 1]);
    }
    // Interlacing of consecutive integer orders.
    const auto a = bessel_j_zeros(3.0, 2500.0);
    const auto b = bessel_j_zeros(4.0, 2500.0);
    for (std::size_t k = 0; k + 1 < a.size() && k < b.size(); ++k) {
      CHECK(a[k] < b[k]);
      CHECK(b[k] < a[k + 1]);
    }
    CHECK(bessel_j_zeros(10.0, 100.0).empty());
    const auto mp = bessel_j_zeros(100.0, 160.0 * 160.0);
    REQUIRE(mp.size() >= 10);
    CHECK(rel(mp[0], 108.83616589840977436) < 1e-12);
    CHECK(rel(mp[9], 153.90027123997412318) < 1e-12);
  }

  TEST_CASE("zeros are roots of J") {
    for (double nu : {0.0, 1.5, 12.0}) {
      for (double z : bessel_j_zeros(nu, 1e4)) {
        CHECK(std::abs(bessel_j(nu, z)) < 1e-12);
        CHECK(std::abs(bessel_j_prime(nu, z)) > 1e-3);
      }
    }
  }
}
