#pragma once

// Exact calculus of polyhomogeneous index sets.
//
// An index set is a set of pairs (exponent, logpower) describing which terms
// x^z (log x)^p may occur in an expansion at one boundary face.  Sets are held
// as finite lists of generators; each generator is an arithmetic progression
// of exponents {start + k * stride : k in N0} carrying a maximal log power.
// Membership of (z, p) means some generator contains z with p <= its log power.
// A stride of zero denotes a single exponent.
//
// Everything in this module is exact rational arithmetic.  Coincidences of
// exponents are what create log terms, so no tolerance is ever used.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace torsionlab::phg {

using Rational = boost::rational<std::int64_t>;

// "p/q" with q > 0, always including the denominator.
std::string to_string(const Rational& r);
Rational parse_rational(const std::string& text);
double to_double(const Rational& r);

struct IndexTerm {
  Rational exponent;
  int logpower = 0;

  friend bool operator==(const IndexTerm&, const IndexTerm&) = default;
};

struct Generator {
  IndexTerm base;
  Rational stride{0};  // 0: single exponent; > 0: progression

  bool contains_exponent(const Rational& z) const;
  friend bool operator==(const Generator&, const Generator&) = default;
};

class IndexSet {
 public:
  IndexSet() = default;

  static IndexSet empty() { return {}; }
  static IndexSet point(Rational exponent, int logpower = 0);
  // N0-closure of the given terms (Melrose's condition: (z,p) in E => (z+1,p) in E).
  static IndexSet closed(const std::vector<IndexTerm>& terms);
  // {start + k * step : k in N0}, all with the given log power.
  static IndexSet progression(Rational start, Rational step, int logpower = 0);

  void add(const Generator& g);

  bool is_empty() const noexcept { return generators_.empty(); }
  const std::vector<Generator>& generators() const noexcept { return generators_; }

  // True iff the set is closed under exponent + 1.
  bool closure() const;

  bool contains(const Rational& exponent, int logpower = 0) const;
  // Largest log power at this exponent, or -1 when absent.
  int max_logpower(const Rational& exponent) const;
  std::optional<Rational> min_exponent() const;

  // All exponents <= upto with their maximal log power, sorted by exponent.
  std::vector<IndexTerm> enumerate(const Rational& upto) const;

  // Drops generators contained in another generator.
  void normalize();

 private:
  std::vector<Generator> generators_;
};

// Semantic equality of two sets restricted to exponents <= upto.
bool equal_upto(const IndexSet& a, const IndexSet& b, const Rational& upto);

IndexSet set_union(const IndexSet& e, const IndexSet& f);
// E u F u {(z, p + q + 1) : (z, p) in E, (z, q) in F}.
IndexSet extended_union(const IndexSet& e, const IndexSet& f);
IndexSet shift(const IndexSet& e, const Rational& c);
// Multiplies every exponent (and stride) by a positive factor.
IndexSet scale(const IndexSet& e, const Rational& factor);

// Index families of a composition of two heat-type operators with front-face
// orders l and l_prime.
struct CompositionIndex {
  IndexSet left;   // P_lf
  IndexSet right;  // P_rf
  int ff_order = 0;
};

CompositionIndex compose_index(int l, int l_prime, const IndexSet& e_lf, const IndexSet& e_rf,
                               const IndexSet& e_prime_lf, const IndexSet& e_prime_rf);

// t-expansion index set of the trace, from the index sets of the trace density
// at the temporal diagonal and the front face.  t lifts to rho_ff^2 rho_td^2,
// so exponents are halved before the extended union.  The corner face must
// have strictly positive exponents for the fibre integrals to converge; the
// caller asserts this through corner_integrable.
IndexSet pushforward_trace_index(const IndexSet& g_td, const IndexSet& g_ff,
                                 bool corner_integrable = true);

enum class TermSource { TemporalDiagonal, FrontFace, Boundary };
std::string to_string(TermSource s);

struct TemplateTerm {
  Rational exponent;
  bool log = false;
  TermSource source = TermSource::TemporalDiagonal;

  friend bool operator==(const TemplateTerm&, const TemplateTerm&) = default;
};

struct ExpansionTemplate {
  std::vector<TemplateTerm> terms;  // sorted by (exponent, log)
  int m = 0;
  int b = 0;
  bool even = false;
  bool boundary = false;
  Rational cutoff{3};

  bool has_term(const Rational& exponent, bool log) const;
  Rational min_exponent() const;
  // Checks ordering, uniqueness and that every log term has its pure power.
  bool valid() const;
};

// Index family of the trace density tr(H) * (b-density factors) on the
// diagonal heat space of a simple edge space of dimension m with edge
// dimension b: rho_td^{-m} times even powers at td, rho_ff^{-b-1} times a
// smooth (even: even) function at ff, shifted by the rho_ff density factor.
struct TraceDensityIndex {
  IndexSet td;
  IndexSet ff;
};
TraceDensityIndex trace_density_index(int m, int b, bool even);

// Predicted heat-trace template.  The boundary flag merges the half-integer
// series (l + 1 - m)/2 contributed by a smooth Dirichlet boundary, which the
// truncated numerical models carry at x = 1.  Requires 0 <= b <= m - 2, or
// b = m - 1 for a zero-dimensional fibre (the half-line model).
ExpansionTemplate heat_trace_structure(int m, int b, bool even, bool boundary,
                                       const Rational& cutoff = Rational{3});

struct Pole {
  Rational location;
  int order = 1;
};

struct ZetaPoleStructure {
  std::vector<Pole> poles;  // poles of Gamma(s) zeta(s), sorted by location
  bool regular_at_zero = true;
  bool has_t0_term = false;  // false => the t^0 coefficient vanishes identically
  std::string zeta0_rule;
};

ZetaPoleStructure zeta_pole_structure(const ExpansionTemplate& tpl);

enum class Parity { Even, Odd };

struct OrderParity {
  int order = 0;
  Parity parity = Parity::Even;
};

// True iff the coefficient at every supplied order k has parity (-1)^k.
bool even_parity_check(const std::vector<OrderParity>& coefficients);

}  // namespace torsionlab::phg
