#pragma once

// Spectral zeta functions near s = 0 from a fitted small-time expansion and
// numerical Mellin integrals, and the analytic torsion assembled from them.

#include <string>
#include <vector>

#include "torsionlab/conekernel.hpp"
#include "torsionlab/phg_index.hpp"

namespace torsionlab::zeta {

// Pole of Gamma(s) zeta(s) = int_0^oo t^{s-1} Tr(H - P) dt at s = location.
// leading is the coefficient of (s - location)^{-order}; residue that of
// (s - location)^{-1}.
struct ZetaPole {
  phg::Rational location;
  int order = 1;
  double leading = 0.0;
  double residue = 0.0;
  double error = 0.0;
};

struct ZetaDiagnostics {
  double split = 1.0;
  double t_min = 0.0;
  double lambda_min = 0.0;
  double remainder_integral = 0.0;  // int_{t_min}^{split} (Tr - fit) dt / t
  double remainder_error = 0.0;
  double large_t_integral = 0.0;    // int_{split}^oo (Tr - dim ker) dt / t
  double large_t_error = 0.0;
  double fit_error = 0.0;           // fit uncertainty propagated to zeta'(0)
  double truncation_error = 0.0;    // unfitted terms below t_min
};

struct ZetaData {
  int degree = 0;
  std::vector<ZetaPole> poles;
  bool regular_at_zero_predicted = true;
  double residue_at_zero = 0.0;  // residue of zeta itself at s = 0
  double residue_error = 0.0;
  double zeta0 = 0.0;               // coefficient of t^0 in Tr H
  double zeta0_minus_kernel = 0.0;  // zeta(0) of Tr(H - P)
  double zeta_prime0 = 0.0;
  double zeta0_error = 0.0;
  double zeta_prime0_error = 0.0;
  long kernel_dim = 0;
  ZetaDiagnostics diagnostics;
};

struct ZetaOptions {
  double split = 1.0;
  double quadrature_tol = 1e-11;
  double max_fit_residual = 1e-5;
  int max_panels = 64;  // quadrature budget per integral
};

// zeta(s) = (1/Gamma(s)) int_0^oo t^{s-1} Tr(H - P) dt near s = 0.  The fitted
// terms are integrated exactly on (0, split), Tr - fit numerically on
// (t_min, split) and Tr - dim ker on (split, oo), the last with a closed-form
// bound exp(-lambda_min (t - T)) beyond the quadrature range.
ZetaData zeta_near_zero(const cone::TraceSamples& samples, const cone::FittedExpansion& fit,
                        long kernel_dim, const cone::TraceFunction& trace, int degree = 0,
                        const ZetaOptions& options = {});

struct TorsionReport {
  std::vector<ZetaData> per_degree;
  int m = 0;
  std::string model;
  double log_T = 0.0;  // (1/2) sum_k (-1)^k k zeta_k'(0)
  double log_T_error = 0.0;
  double torsion_residue = 0.0;  // residue of the torsion zeta function at 0
  double torsion_residue_error = 0.0;
  bool per_degree_regular = true;
  bool residues_cancel = true;
  bool torsion_zeta_regular = true;
};

// Needs exactly one entry for every degree 0..m.
TorsionReport torsion_assemble(const std::vector<ZetaData>& per_degree, int m,
                               const std::string& model = "");

// Factors of a model space, e.g. "circle*cone:1" or "torus:2".
enum class FactorKind { Point, Circle, Torus, TruncatedCone };

struct Factor {
  FactorKind kind = FactorKind::Point;
  int dim = 0;  // manifold dimension
};

struct ModelDescriptor {
  std::vector<Factor> factors;
  int dimension() const;
};

ModelDescriptor parse_model_descriptor(const std::string& text);
std::string to_string(const ModelDescriptor& model);

// Kernel dimension in each degree 0..dim: zero for the Dirichlet-truncated
// cone, Betti numbers for closed flat factors, Kunneth across products.
std::vector<long> kernel_dimension(const ModelDescriptor& model);

}  // namespace torsionlab::zeta
