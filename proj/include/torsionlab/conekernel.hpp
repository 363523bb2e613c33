#pragma once

// Heat kernels and heat traces of the model cone C(F) = (0, 1] x F with the
// Friedrichs extension on every radial mode and Dirichlet conditions at x = 1,
// closed flat factors, their products, and least-squares extraction of the
// small-time expansion coefficients.

#include <cstddef>
#include <memory>
#include <vector>

#include "torsionlab/fiber.hpp"
#include "torsionlab/phg_index.hpp"

namespace torsionlab::cone {

// (1/2t) (x y)^{1/2} I_nu(x y / 2t) exp(-(x^2 + y^2)/4t), evaluated as
// (1/2t) (x y)^{1/2} [exp(-z) I_nu(z)] exp(-(x - y)^2/4t).
double cone_heat_kernel(double nu, double t, double x, double y);

// Radial eigenvalues j_{nu,k}^2 <= lambda_cutoff for every distinct order of a
// NuSpectrum.  Completeness needs nu_spectrum.cutoff >= sqrt(lambda_cutoff),
// since j_{nu,1} > nu.
struct ConeSpectrum {
  fiber::NuSpectrum nu_spectrum;
  double lambda_cutoff = 0.0;
  double weyl_exponent = 1.0;  // N(lambda) grows like lambda^weyl_exponent
  std::vector<double> orders;  // distinct nu, ascending
  std::vector<std::shared_ptr<const std::vector<double>>> zeros;        // j_{nu,k}
  std::vector<std::shared_ptr<const std::vector<double>>> eigenvalues;  // j_{nu,k}^2

  const std::vector<double>& zeros_for(double nu) const;
  std::size_t order_index(double nu) const;
};

ConeSpectrum build_cone_spectrum(const fiber::NuSpectrum& spectrum, double lambda_cutoff,
                                 double weyl_exponent);

struct TraceSamples {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> tail_bound;

  std::size_t size() const noexcept { return grid.size(); }
};

std::vector<double> log_grid(double t_min, double t_max, std::size_t points);

struct TraceValue {
  double value = 0.0;
  double tail = 0.0;  // certified bound on the eigenvalues above the cutoff
};

// Spectrum of one nonnegative operator: zero modes plus groups of positive
// eigenvalues (ascending, shared between degrees) with multiplicities,
// complete up to lambda_cutoff.  The tail beyond the cutoff is bounded through
// the envelope N(lambda) <= C lambda^d, with C twice the largest ratio seen on
// the computed spectrum:
//   sum_{lambda > L} exp(-t lambda) <= C t^{-d} Gamma(d + 1, t L).
class LevelSet {
 public:
  struct Group {
    double multiplicity = 0.0;
    std::shared_ptr<const std::vector<double>> lambdas;
  };

  LevelSet(std::vector<Group> groups, double zero_modes, double lambda_cutoff,
           double weyl_exponent);

  double zero_modes() const noexcept { return zero_modes_; }
  double lambda_min() const noexcept { return lambda_min_; }
  double lambda_cutoff() const noexcept { return lambda_cutoff_; }
  double weyl_exponent() const noexcept { return weyl_exponent_; }
  double weyl_constant() const noexcept { return weyl_constant_; }
  const std::vector<Group>& groups() const noexcept { return groups_; }

  // Sum of exp(-t lambda) over the computed positive eigenvalues.
  double positive_part(double t) const;
  double tail(double t) const;

 private:
  std::vector<Group> groups_;
  double zero_modes_ = 0.0;
  double lambda_cutoff_ = 0.0;
  double weyl_exponent_ = 1.0;
  double weyl_constant_ = 0.0;
  double lambda_min_ = 0.0;
};

// A heat trace as a signed sum of products of level sets, so Kunneth products
// stay exact and can be evaluated at any t.
class TraceFunction {
 public:
  TraceFunction() = default;
  explicit TraceFunction(std::shared_ptr<const LevelSet> set);
  static TraceFunction unit();  // trace of a point

  TraceFunction& operator+=(const TraceFunction& other);
  friend TraceFunction operator*(const TraceFunction& a, const TraceFunction& b);

  TraceValue evaluate(double t) const;
  // Trace minus the kernel contribution, without cancellation.
  double positive_part(double t) const;
  double kernel_dim() const;
  // Smallest positive eigenvalue (infinity when there is none).
  double lambda_min() const;
  // Throws TailNotCertified unless tail <= rel_tol * value at every t.
  TraceSamples sample(const std::vector<double>& grid, double rel_tol = 1e-10) const;

 private:
  struct Term {
    double coefficient = 1.0;
    std::vector<std::shared_ptr<const LevelSet>> factors;
  };
  std::vector<Term> terms_;
};

// Trace of the truncated cone in cone degree p.
TraceFunction cone_trace_function(const ConeSpectrum& spec, int p);
TraceSamples truncated_cone_trace(const ConeSpectrum& spec, int p, const std::vector<double>& t_grid);

// Per-degree traces of closed flat factors.
std::vector<TraceFunction> torus_traces(const std::vector<double>& periods, double lambda_cutoff);
std::vector<TraceFunction> circle_traces(double radius, double lambda_cutoff);
std::vector<TraceFunction> point_traces();

// Kunneth: Tr_k(A x B) = sum_{i+j=k} Tr_i(A) Tr_j(B), folded over the factors.
std::vector<TraceFunction> product_trace(const std::vector<std::vector<TraceFunction>>& factors);
std::vector<TraceSamples> product_trace(const std::vector<std::vector<TraceSamples>>& factors);

struct FittedExpansion {
  phg::ExpansionTemplate tpl;
  std::vector<double> coefficients;        // aligned with tpl.terms
  std::vector<double> coefficient_errors;  // max(regression stderr, window sensitivity)
  double residual = 0.0;                   // max relative misfit on the window
  double condition = 0.0;                  // of the column-normalized design matrix
  std::size_t samples_used = 0;
  double t_min = 0.0;
  double t_max = 0.0;

  double coefficient(const phg::Rational& exponent, bool log) const;
  double evaluate(double t) const;
};

struct FitOptions {
  double condition_limit = 1e12;
  // The window is the largest prefix of the grid (at least half of it) whose
  // misfit stays below this; exponentially small corrections such as
  // exp(-1/t) are thereby kept out of the coefficients.
  double window_residual = 1e-9;
  bool trim_window = true;
};

FittedExpansion fit_expansion(const TraceSamples& samples, const phg::ExpansionTemplate& tpl,
                              const FitOptions& options = {});

// max_t |sum_k (-1)^k (Tr_k(t) - betti_k)|.
double mckean_singer_defect(const std::vector<TraceSamples>& per_degree,
                            const std::vector<long>& betti);

// Parities of the Taylor coefficients in the front-face defining function of
// the model kernel H_cone(tau, s, s') exp(-|w|^2 / 4 tau), orders 0..max_order.
std::vector<phg::OrderParity> model_front_face_parities(int max_order);

}  // namespace torsionlab::cone
