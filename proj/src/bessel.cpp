#include "torsionlab/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>

#include "torsionlab/error.hpp"

namespace torsionlab::bessel {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kMaxIter = 200000;

void check_domain(double nu, double z) {
  require(std::isfinite(nu) && nu >= 0, ErrorKind::InvalidArgument,
          "Bessel order must be finite and nonnegative");
  require(std::isfinite(z) && z > 0, ErrorKind::InvalidArgument,
          "Bessel argument must be finite and positive");
}

}  // namespace

namespace detail {

double i_scaled_series(double nu, double z) {
  check_domain(nu, z);
  const double q = 0.25 * z * z;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < kMaxIter; ++k) {
    term *= q / (k * (nu + k));
    sum += term;
    if (term < kEps * 0.5 * sum && k > 0.5 * z) break;
  }
  const double log_prefactor = nu * std::log(0.5 * z) - std::lgamma(nu + 1.0) - z;
  return std::exp(log_prefactor) * sum;
}

double i_scaled_hankel(double nu, double z) {
  check_domain(nu, z);
  const double mu = 4 * nu * nu;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < kMaxIter; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = -term * (mu - odd * odd) / (8.0 * k * z);
    if (std::abs(next) >= std::abs(term)) break;  // asymptotic series turned
    term = next;
    sum += term;
    if (term == 0.0 || std::abs(term) < 0.5 * kEps * std::abs(sum)) break;
  }
  return sum / std::sqrt(2 * std::numbers::pi * z);
}

// Temme/Steed: ratio I_{nu+1}/I_nu from its continued fraction, scaled K_mu and
// K_{mu+1} (|mu| <= 1/2) from the second continued fraction, K recurred upward
// to nu, and I_nu from the Wronskian I_nu K_{nu+1} + I_{nu+1} K_nu = 1/z.
double i_scaled_continued_fraction(double nu, double z) {
  check_domain(nu, z);
  require(z >= 2, ErrorKind::InvalidArgument, "continued fraction regime needs z >= 2");

  double f = kTiny, c = kTiny, d = 0.0;
  for (int k = 1;; ++k) {
    require(k < kMaxIter, ErrorKind::InvalidArgument, "I ratio continued fraction did not converge");
    const double b = 2.0 * (nu + k) / z;
    d = b + d;
    if (d == 0.0) d = kTiny;
    d = 1.0 / d;
    c = b + 1.0 / c;
    if (c == 0.0) c = kTiny;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  const double ratio = f;

  const double nl = std::floor(nu + 0.5);
  const double xmu = nu - nl;
  const double xmu2 = xmu * xmu;
  double b = 2.0 * (1.0 + z);
  double dd = 1.0 / b;
  double h = dd, delh = dd;
  double q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25 - xmu2;
  double q = a1, cc = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 1;; ++i) {
    require(i < kMaxIter, ErrorKind::InvalidArgument, "K continued fraction did not converge");
    a -= 2 * i;
    cc = -a * cc / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += cc * qnew;
    b += 2.0;
    dd = 1.0 / (b + a * dd);
    delh = (b * dd - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  h = a1 * h;
  double k_lo = std::sqrt(std::numbers::pi / (2.0 * z)) / s;  // exp(z) K_mu(z)
  double k_hi = k_lo * (xmu + z + 0.5 - h) / z;                // exp(z) K_{mu+1}(z)
  for (int i = 1; i <= static_cast<int>(nl); ++i) {
    const double next = (xmu + i) * (2.0 / z) * k_hi + k_lo;
    k_lo = k_hi;
    k_hi = next;
  }
  return (1.0 / z) / (k_hi + ratio * k_lo);
}

}  // namespace detail

double bessel_i(double nu, double z, bool scaled) {
  check_domain(nu, z);
  if (!scaled && z > 50)
    fail(ErrorKind::InvalidArgument, "unscaled I_nu overflows for z > 50; request the scaled form");
  double v;
  if (z <= std::max(20.0, nu))
    v = detail::i_scaled_series(nu, z);
  else if (z >= 25.0 && z >= 0.5 * nu * nu)
    v = detail::i_scaled_hankel(nu, z);
  else
    v = detail::i_scaled_continued_fraction(nu, z);
  return scaled ? v : v * std::exp(z);
}

double bessel_j(double nu, double x) { return boost::math::cyl_bessel_j(nu, x); }

double bessel_j_prime(double nu, double x) { return boost::math::cyl_bessel_j_prime(nu, x); }

namespace {

// Every J_nu sample strictly inside (lo, hi) must carry the given sign.
bool same_sign_inside(double nu, double lo, double hi, int sign) {
  const double gap = hi - lo;
  const int pieces = std::max(2, static_cast<int>(std::ceil(gap / (0.5 * std::numbers::pi))));
  for (int i = 1; i < pieces; ++i) {
    const double v = bessel_j(nu, lo + gap * i / pieces);
    if (v * sign <= 0) return false;
  }
  return true;
}

}  // namespace

std::vector<double> bessel_j_zeros(double nu, double lambda_cutoff) {
  require(std::isfinite(nu) && nu >= 0, ErrorKind::InvalidArgument,
          "Bessel order must be finite and nonnegative");
  require(!std::isnan(lambda_cutoff), ErrorKind::InvalidArgument, "cutoff must be a number");
  std::vector<double> zeros;
  if (lambda_cutoff <= 0) return zeros;
  const double xmax = std::sqrt(lambda_cutoff);
  require(std::isfinite(xmax), ErrorKind::InvalidArgument, "cutoff must be finite");
  if (xmax <= nu) return zeros;

  constexpr int chunk = 256;
  std::vector<double> buf;
  for (int start = 1;; start += chunk) {
    buf.clear();
    boost::math::cyl_bessel_j_zero(nu, start, chunk, std::back_inserter(buf));
    bool done = false;
    for (double z : buf) {
      if (z > xmax) {
        done = true;
        break;
      }
      zeros.push_back(z);
    }
    if (done) break;
  }

  auto bad = [&](const std::string& what) {
    fail(ErrorKind::ZeroSearchFailed,
         "zeros of J_" + num(nu) + " below " + num(xmax) + ": " + what);
  };
  if (!zeros.empty() && !(zeros.front() > nu)) bad("first zero does not exceed the order");
  for (std::size_t k = 0; k < zeros.size(); ++k) {
    if (k > 0 && !(zeros[k] > zeros[k - 1])) bad("zeros not strictly increasing");
    const int expect = (k % 2 == 0) ? -1 : 1;
    if (bessel_j_prime(nu, zeros[k]) * expect <= 0) bad("derivative signs do not alternate");
  }
  // J_nu > 0 on (nu, j_1); no zero lies in (0, nu].
  double lo = nu;
  int sign = 1;
  for (double z : zeros) {
    if (!same_sign_inside(nu, lo, z, sign)) bad("sign change between computed zeros");
    lo = z;
    sign = -sign;
  }
  if (xmax > lo && !same_sign_inside(nu, lo, xmax, sign)) bad("sign change above the last zero");
  return zeros;
}

}  // namespace torsionlab::bessel
