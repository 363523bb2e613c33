#pragma once

// Hodge spectra of flat model fibres and the fibre operator A of the rescaled
// edge Laplacian.  For a cone degree p (form degree l = p on the fibre), A acts
// on Lambda^{l-1}(F) + Lambda^l(F) as
//
//     [ Delta_{l-1} + c1^2      2(-1)^l delta_l ]
//     [ 2(-1)^l d_{l-1}         Delta_l + c2^2  ]
//
// and its eigenvalues nu^2 give the indicial roots 1/2 +- nu.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace torsionlab::fiber {

enum class FormType { Harmonic, Exact, Coexact };
std::string to_string(FormType t);

struct FiberEntry {
  int degree = 0;
  double mu2 = 0.0;  // eigenvalue of the fibre Hodge Laplacian
  long multiplicity = 0;
  FormType type = FormType::Harmonic;
};

// Eigen-data of the Hodge Laplacian on a flat torus R^f / (L_1 Z x ... x L_f Z).
// A circle of radius a is the one-dimensional torus with period 2 pi a.
struct FiberSpectrum {
  int dim_f = 0;
  std::vector<double> periods;
  double mu_max = 0.0;  // complete for every eigenvalue with mu <= mu_max
  std::vector<FiberEntry> entries;  // sorted by (degree, mu2, type)

  long multiplicity(int degree, double mu2, FormType type) const;
};

FiberSpectrum torus_spectrum(const std::vector<double>& periods, double mu_max);
FiberSpectrum circle_spectrum(double radius, double mu_max);

// Lattice frequencies xi = (2 pi k_i / L_i) sorted by |xi|^2 (ties broken
// lexicographically in k).
std::vector<std::vector<double>> lattice_frequencies(const std::vector<double>& periods,
                                                     double mu_max);

enum class Convention { PaperLiteral, GeometricOracle };
std::string to_string(Convention c);
Convention parse_convention(const std::string& text);

struct DiagonalConstants {
  double c1 = 0.0;  // Lambda^{l-1} slot
  double c2 = 0.0;  // Lambda^l slot
};
DiagonalConstants diagonal_constants(int f, int l, Convention convention);

enum class BlockKind { HarmonicEta, HarmonicMu, ExactEta, CoexactMu, PairLower, PairUpper };
std::string to_string(BlockKind k);

struct NuMode {
  double nu = 0.0;
  long multiplicity = 0;
  int cone_degree = 0;
  BlockKind origin = BlockKind::HarmonicMu;
  double mu2 = 0.0;  // fibre eigenvalue the block was built from

  std::pair<double, double> indicial_roots() const { return {0.5 - nu, 0.5 + nu}; }
  // nu = 0 carries the x^{1/2} log x solution branch next to x^{1/2}.
  bool log_branch() const { return nu == 0.0; }
};

struct NuSpectrum {
  std::vector<NuMode> modes;  // sorted by (nu, cone_degree)
  Convention convention = Convention::GeometricOracle;
  double cutoff = 0.0;  // every mode with nu <= cutoff is present

  // Modes of one cone degree.
  NuSpectrum degree(int p) const;
  long count() const;
};

// Eigenvalues nu^2 of A, one entry per block eigenvalue and multiplicity,
// for every fibre eigenvalue present in the spectrum.  Not filtered by any
// cutoff and not checked for sign.
struct BlockEigenvalue {
  double nu2 = 0.0;
  long multiplicity = 0;
  BlockKind origin = BlockKind::HarmonicMu;
  double mu2 = 0.0;
};
std::vector<BlockEigenvalue> a_block_eigenvalues(const FiberSpectrum& fiber, int p,
                                                 Convention convention);

// Smallest fibre mu needed so that every nu <= nu_cutoff in cone degree p is found.
double required_fiber_mu(int f, int p, Convention convention, double nu_cutoff);

// Closed-form diagonalization of A in cone degree p, keeping nu <= nu_cutoff.
// Throws NegativeBlockEigenvalue when a block has a negative eigenvalue and
// InvalidArgument when the fibre spectrum is not complete enough.
NuSpectrum a_spectrum(const FiberSpectrum& fiber, int p, Convention convention, double nu_cutoff);

// All cone degrees 0 .. f + 1 concatenated.
NuSpectrum a_spectrum_all_degrees(const FiberSpectrum& fiber, Convention convention,
                                  double nu_cutoff);

// Independent check: eigenvalues of A assembled as a dense Hermitian matrix on
// the lowest lattice Fourier modes (times constant form bases).  The mode set
// is the first n_modes frequencies, trimmed back to complete |xi|^2 shells;
// shell_mu2 reports the largest shell kept.
struct DenseAResult {
  std::vector<double> nu2;  // ascending
  double shell_mu2 = 0.0;
  std::size_t modes_used = 0;
};
DenseAResult dense_a_eigenvalues(const std::vector<double>& periods, int p, Convention convention,
                                 std::size_t n_modes = 64);

// Bipartite matching test for (P + 1/2)^2 = A_+ and (P - 1/2)^2 = A_-:
// each nu_+ must pair with a nu_- such that +-nu_+ - 1/2 = +-nu_- + 1/2.
// Modes within 1 of the common cutoff may stay unmatched (their partner lies
// beyond it).
bool gauss_bonnet_consistency(const NuSpectrum& plus, const NuSpectrum& minus, double tol);

// Union of the modes over the given cone degrees.
NuSpectrum merge(const std::vector<NuSpectrum>& parts);

}  // namespace torsionlab::fiber
