#include "torsionlab/phg_index.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "torsionlab/error.hpp"

namespace torsionlab::phg {

namespace {

using i128 = __int128;

std::int64_t checked_narrow(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN)
    fail(ErrorKind::InvalidArgument, "index arithmetic overflow");
  return static_cast<std::int64_t>(v);
}

i128 floor_mod(i128 a, i128 m) {
  i128 r = a % m;
  return r < 0 ? r + m : r;
}

// Inverse of a modulo m for coprime a, m (m >= 1).
i128 mod_inverse(i128 a, i128 m) {
  i128 old_r = floor_mod(a, m), r = m, old_s = 1, s = 0;
  while (r != 0) {
    i128 q = old_r / r;
    i128 tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  return floor_mod(old_s, m);
}

struct Progression {
  Rational start;
  Rational stride;
};

std::optional<Progression> intersect(const Progression& p, const Progression& q) {
  if (p.stride == Rational{0} && q.stride == Rational{0}) {
    if (p.start == q.start) return p;
    return std::nullopt;
  }
  if (p.stride == Rational{0} || q.stride == Rational{0}) {
    const Progression& pt = p.stride == Rational{0} ? p : q;
    const Progression& pr = p.stride == Rational{0} ? q : p;
    Generator g{{pr.start, 0}, pr.stride};
    if (g.contains_exponent(pt.start)) return Progression{pt.start, Rational{0}};
    return std::nullopt;
  }
  // Scale everything to integers and solve A + S i = B + U j by CRT.
  std::int64_t d = 1;
  for (const Rational* r : {&p.start, &p.stride, &q.start, &q.stride})
    d = std::lcm(d, r->denominator());
  auto as_int = [d](const Rational& r) -> i128 {
    return static_cast<i128>(r.numerator()) * (d / r.denominator());
  };
  const i128 a = as_int(p.start), s = as_int(p.stride);
  const i128 b = as_int(q.start), u = as_int(q.stride);
  const i128 g = std::gcd(static_cast<std::int64_t>(s), static_cast<std::int64_t>(u));
  const i128 diff = b - a;
  if (diff % g != 0) return std::nullopt;
  const i128 u_red = u / g;
  i128 i0 = 0;
  if (u_red > 1) i0 = floor_mod((diff / g) % u_red * mod_inverse(s / g, u_red), u_red);
  const i128 x0 = a + s * i0;
  const i128 l = s * u_red;
  const i128 lo = std::max(a, b);
  const i128 x = lo + floor_mod(x0 - lo, l);
  return Progression{Rational(checked_narrow(x), d), Rational(checked_narrow(l), d)};
}

}  // namespace

std::string to_string(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational parse_rational(const std::string& text) {
  try {
    std::size_t used = 0;
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
      const std::int64_t num = std::stoll(text.substr(0, slash), &used);
      if (used != slash) throw std::invalid_argument(text);
      const std::string den_text = text.substr(slash + 1);
      const std::int64_t den = std::stoll(den_text, &used);
      if (used != den_text.size() || den == 0) throw std::invalid_argument(text);
      return Rational(num, den);
    }
    const auto dot = text.find('.');
    if (dot != std::string::npos) {
      const std::string digits = text.substr(0, dot) + text.substr(dot + 1);
      const std::int64_t num = std::stoll(digits, &used);
      if (used != digits.size()) throw std::invalid_argument(text);
      std::int64_t den = 1;
      for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
      return Rational(num, den);
    }
    const std::int64_t num = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return Rational(num);
  } catch (const std::logic_error&) {
    fail(ErrorKind::InvalidArgument, "not a rational number: '" + text + "'");
  }
}

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

bool Generator::contains_exponent(const Rational& z) const {
  if (stride == Rational{0}) return z == base.exponent;
  const Rational steps = (z - base.exponent) / stride;
  return steps >= 0 && steps.denominator() == 1;
}

IndexSet IndexSet::point(Rational exponent, int logpower) {
  IndexSet e;
  e.add({{exponent, logpower}, Rational{0}});
  return e;
}

IndexSet IndexSet::closed(const std::vector<IndexTerm>& terms) {
  IndexSet e;
  for (const auto& t : terms) e.add({t, Rational{1}});
  e.normalize();
  return e;
}

IndexSet IndexSet::progression(Rational start, Rational step, int logpower) {
  IndexSet e;
  e.add({{start, logpower}, step});
  return e;
}

void IndexSet::add(const Generator& g) {
  if (g.base.logpower < 0) fail(ErrorKind::InvalidArgument, "log power must be nonnegative");
  if (g.stride < 0) fail(ErrorKind::InvalidArgument, "generator stride must be nonnegative");
  generators_.push_back(g);
}

bool IndexSet::closure() const {
  return std::all_of(generators_.begin(), generators_.end(), [](const Generator& g) {
    return g.stride > 0 && (Rational{1} / g.stride).denominator() == 1;
  });
}

bool IndexSet::contains(const Rational& exponent, int logpower) const {
  return max_logpower(exponent) >= logpower;
}

int IndexSet::max_logpower(const Rational& exponent) const {
  int best = -1;
  for (const auto& g : generators_)
    if (g.contains_exponent(exponent)) best = std::max(best, g.base.logpower);
  return best;
}

std::optional<Rational> IndexSet::min_exponent() const {
  std::optional<Rational> best;
  for (const auto& g : generators_)
    if (!best || g.base.exponent < *best) best = g.base.exponent;
  return best;
}

std::vector<IndexTerm> IndexSet::enumerate(const Rational& upto) const {
  std::map<Rational, int> found;
  for (const auto& g : generators_) {
    for (Rational z = g.base.exponent; z <= upto; z += g.stride) {
      auto [it, inserted] = found.emplace(z, g.base.logpower);
      if (!inserted) it->second = std::max(it->second, g.base.logpower);
      if (g.stride == Rational{0}) break;
    }
  }
  std::vector<IndexTerm> out;
  out.reserve(found.size());
  for (const auto& [z, p] : found) out.push_back({z, p});
  return out;
}

void IndexSet::normalize() {
  auto covers = [](const Generator& h, const Generator& g) {
    if (h.base.logpower < g.base.logpower) return false;
    if (!h.contains_exponent(g.base.exponent)) return false;
    if (g.stride == Rational{0}) return true;
    return h.stride > 0 && (g.stride / h.stride).denominator() == 1;
  };
  std::vector<Generator> kept;
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < generators_.size() && !redundant; ++j) {
      if (i == j || !covers(generators_[j], generators_[i])) continue;
      // Identical generators: keep the first occurrence only.
      redundant = !(covers(generators_[i], generators_[j]) && i < j);
    }
    if (!redundant) kept.push_back(generators_[i]);
  }
  std::sort(kept.begin(), kept.end(), [](const Generator& a, const Generator& b) {
    if (a.base.exponent != b.base.exponent) return a.base.exponent < b.base.exponent;
    if (a.stride != b.stride) return a.stride < b.stride;
    return a.base.logpower < b.base.logpower;
  });
  generators_ = std::move(kept);
}

bool equal_upto(const IndexSet& a, const IndexSet& b, const Rational& upto) {
  const auto ea = a.enumerate(upto);
  const auto eb = b.enumerate(upto);
  return ea == eb;
}

IndexSet set_union(const IndexSet& e, const IndexSet& f) {
  IndexSet out = e;
  for (const auto& g : f.generators()) out.add(g);
  out.normalize();
  return out;
}

IndexSet extended_union(const IndexSet& e, const IndexSet& f) {
  IndexSet out = set_union(e, f);
  for (const auto& g : e.generators()) {
    for (const auto& h : f.generators()) {
      const auto common = intersect({g.base.exponent, g.stride}, {h.base.exponent, h.stride});
      if (!common) continue;
      out.add({{common->start, g.base.logpower + h.base.logpower + 1}, common->stride});
    }
  }
  out.normalize();
  return out;
}

IndexSet shift(const IndexSet& e, const Rational& c) {
  IndexSet out;
  for (auto g : e.generators()) {
    g.base.exponent += c;
    out.add(g);
  }
  return out;
}

IndexSet scale(const IndexSet& e, const Rational& factor) {
  if (factor <= 0) fail(ErrorKind::InvalidArgument, "scale factor must be positive");
  IndexSet out;
  for (auto g : e.generators()) {
    g.base.exponent *= factor;
    g.stride *= factor;
    out.add(g);
  }
  return out;
}

CompositionIndex compose_index(int l, int l_prime, const IndexSet& e_lf, const IndexSet& e_rf,
                               const IndexSet& e_prime_lf, const IndexSet& e_prime_rf) {
  const auto lo_left = e_lf.min_exponent();
  const auto lo_right = e_prime_rf.min_exponent();
  if (lo_left && lo_right && *lo_left + *lo_right <= -1) {
    fail(ErrorKind::IntegrabilityViolation,
         "E_lf + E'_rf = " + to_string(*lo_left + *lo_right) + " must exceed -1");
  }
  CompositionIndex out;
  out.left = extended_union(e_prime_lf, shift(e_lf, Rational{l_prime}));
  out.right = extended_union(e_rf, shift(e_prime_rf, Rational{l}));
  out.ff_order = l + l_prime;
  return out;
}

IndexSet pushforward_trace_index(const IndexSet& g_td, const IndexSet& g_ff,
                                 bool corner_integrable) {
  if (!corner_integrable)
    fail(ErrorKind::IntegrabilityViolation,
         "corner-face exponents must be strictly positive for the fibre integral to converge");
  const Rational half{1, 2};
  return extended_union(scale(g_td, half), scale(g_ff, half));
}

std::string to_string(TermSource s) {
  switch (s) {
    case TermSource::TemporalDiagonal: return "td";
    case TermSource::FrontFace: return "ff";
    case TermSource::Boundary: return "bdry";
  }
  return "td";
}

bool ExpansionTemplate::has_term(const Rational& exponent, bool log) const {
  return std::any_of(terms.begin(), terms.end(), [&](const TemplateTerm& t) {
    return t.exponent == exponent && t.log == log;
  });
}

Rational ExpansionTemplate::min_exponent() const {
  if (terms.empty()) fail(ErrorKind::InvalidArgument, "empty expansion template");
  return terms.front().exponent;
}

bool ExpansionTemplate::valid() const {
  for (std::size_t i = 1; i < terms.size(); ++i) {
    const auto& a = terms[i - 1];
    const auto& b = terms[i];
    if (a.exponent > b.exponent) return false;
    if (a.exponent == b.exponent && (a.log || !b.log)) return false;
  }
  return std::all_of(terms.begin(), terms.end(), [this](const TemplateTerm& t) {
    return !t.log || has_term(t.exponent, false);
  });
}

TraceDensityIndex trace_density_index(int m, int b, bool even) {
  TraceDensityIndex out;
  // No odd terms at td; the kernel is rho_ff^{-b-1} times a smooth function at
  // ff and the trace density carries one extra factor of rho_ff.
  out.td = IndexSet::progression(Rational{-m}, Rational{2});
  out.ff = shift(IndexSet::progression(Rational{-b - 1}, Rational{even ? 2 : 1}), Rational{1});
  return out;
}

ExpansionTemplate heat_trace_structure(int m, int b, bool even, bool boundary,
                                       const Rational& cutoff) {
  if (m < 1) fail(ErrorKind::InvalidDimensions, "m must be at least 1");
  if (b < 0) fail(ErrorKind::InvalidDimensions, "b must be nonnegative");
  if (b > m - 1)
    fail(ErrorKind::InvalidDimensions,
         "b must satisfy b ≤ m−2 (b = m−1 only for a point fibre)");

  const auto density = trace_density_index(m, b, even);
  const IndexSet trace = pushforward_trace_index(density.td, density.ff);
  const IndexSet td_half = scale(density.td, Rational{1, 2});

  ExpansionTemplate tpl;
  tpl.m = m;
  tpl.b = b;
  tpl.even = even;
  tpl.boundary = boundary;
  tpl.cutoff = cutoff;
  for (const auto& term : trace.enumerate(cutoff)) {
    const TermSource src =
        td_half.contains(term.exponent) ? TermSource::TemporalDiagonal : TermSource::FrontFace;
    tpl.terms.push_back({term.exponent, false, src});
    if (term.logpower >= 1) tpl.terms.push_back({term.exponent, true, TermSource::FrontFace});
  }
  if (boundary) {
    for (int l = 0;; ++l) {
      const Rational z(l + 1 - m, 2);
      if (z > cutoff) break;
      if (!tpl.has_term(z, false)) tpl.terms.push_back({z, false, TermSource::Boundary});
    }
  }
  std::sort(tpl.terms.begin(), tpl.terms.end(), [](const TemplateTerm& a, const TemplateTerm& b) {
    if (a.exponent != b.exponent) return a.exponent < b.exponent;
    return !a.log && b.log;
  });
  return tpl;
}

ZetaPoleStructure zeta_pole_structure(const ExpansionTemplate& tpl) {
  ZetaPoleStructure out;
  for (const auto& t : tpl.terms) {
    const Rational loc = -t.exponent;
    const int order = t.log ? 2 : 1;
    if (!out.poles.empty() && out.poles.back().location == loc) {
      out.poles.back().order = std::max(out.poles.back().order, order);
    } else {
      out.poles.push_back({loc, order});
    }
  }
  std::sort(out.poles.begin(), out.poles.end(),
            [](const Pole& a, const Pole& b) { return a.location < b.location; });
  out.regular_at_zero = !tpl.has_term(Rational{0}, true);
  out.has_t0_term = tpl.has_term(Rational{0}, false);
  out.zeta0_rule = "zeta(0) = c0 - dim ker, c0 the coefficient of t^0";
  if (!out.has_t0_term) out.zeta0_rule += "; no t^0 term, so c0 = 0 and zeta(0) = -dim ker";
  if (!out.regular_at_zero) out.zeta0_rule += "; t^0 log t present, zeta has a simple pole at 0";
  return out;
}

bool even_parity_check(const std::vector<OrderParity>& coefficients) {
  return std::all_of(coefficients.begin(), coefficients.end(), [](const OrderParity& c) {
    const bool even_order = ((c.order % 2) + 2) % 2 == 0;
    return (c.parity == Parity::Even) == even_order;
  });
}

}  // namespace torsionlab::phg
