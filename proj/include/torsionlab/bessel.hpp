#pragma once

#include <vector>

namespace torsionlab::bessel {

// Modified Bessel function of the first kind.  With scaled = true the result
// is exp(-z) I_nu(z); the unscaled form is refused for z > 50.
double bessel_i(double nu, double z, bool scaled);

// J_nu(x) and J_nu'(x).
double bessel_j(double nu, double x);
double bessel_j_prime(double nu, double x);

// All positive zeros j_{nu,k} with j_{nu,k}^2 <= lambda_cutoff, ascending.
// Every gap between consecutive zeros is checked for sign changes on a grid
// finer than the minimal zero spacing, so a skipped zero raises
// ZeroSearchFailed instead of silently dropping an eigenvalue.
std::vector<double> bessel_j_zeros(double nu, double lambda_cutoff);

namespace detail {

// Individual evaluation regimes of exp(-z) I_nu(z), exposed for overlap tests.
double i_scaled_series(double nu, double z);
double i_scaled_hankel(double nu, double z);
double i_scaled_continued_fraction(double nu, double z);

}  // namespace detail

}  // namespace torsionlab::bessel
