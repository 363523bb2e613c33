#include "torsionlab/fiber.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

#include <Eigen/Dense>

#include "torsionlab/error.hpp"

namespace torsionlab::fiber {

namespace {

constexpr double kShellTol = 1e-12;

bool same_value(double a, double b) {
  return std::abs(a - b) <= kShellTol * std::max({1.0, std::abs(a), std::abs(b)});
}

long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Basis of Lambda^k(R^f) as sorted index subsets encoded in bitmasks.
std::vector<unsigned> form_basis(int f, int k) {
  std::vector<unsigned> out;
  if (k < 0 || k > f) return out;
  for (unsigned mask = 0; mask < (1u << f); ++mask)
    if (std::popcount(mask) == k) out.push_back(mask);
  return out;
}

// Matrix of xi ^ . : Lambda^k -> Lambda^{k+1} in the standard bases.
Eigen::MatrixXd wedge_matrix(const std::vector<double>& xi, int k) {
  const int f = static_cast<int>(xi.size());
  const auto from = form_basis(f, k);
  const auto to = form_basis(f, k + 1);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(to.size()),
                                            static_cast<Eigen::Index>(from.size()));
  for (std::size_t c = 0; c < from.size(); ++c) {
    for (int j = 0; j < f; ++j) {
      const unsigned bit = 1u << j;
      if (from[c] & bit) continue;
      const int before = std::popcount(from[c] & (bit - 1));
      const unsigned target = from[c] | bit;
      const auto r = std::find(to.begin(), to.end(), target) - to.begin();
      w(r, static_cast<Eigen::Index>(c)) += (before % 2 == 0 ? 1.0 : -1.0) * xi[j];
    }
  }
  return w;
}

long matrix_rank(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(1e-10);
  return lu.rank();
}

struct Shell {
  double mu2;
  std::vector<std::vector<double>> xis;
};

std::vector<Shell> group_shells(const std::vector<std::vector<double>>& freqs) {
  std::vector<Shell> shells;
  for (const auto& xi : freqs) {
    double mu2 = 0.0;
    for (double v : xi) mu2 += v * v;
    if (mu2 == 0.0) continue;
    if (shells.empty() || !same_value(shells.back().mu2, mu2)) shells.push_back({mu2, {}});
    shells.back().xis.push_back(xi);
  }
  return shells;
}

void validate_periods(const std::vector<double>& periods) {
  require(!periods.empty(), ErrorKind::InvalidArgument, "torus needs at least one period");
  for (double l : periods)
    require(l > 0 && std::isfinite(l), ErrorKind::InvalidArgument, "torus periods must be positive");
}

}  // namespace

std::string to_string(FormType t) {
  switch (t) {
    case FormType::Harmonic: return "harmonic";
    case FormType::Exact: return "exact";
    case FormType::Coexact: return "coexact";
  }
  return "harmonic";
}

std::string to_string(Convention c) {
  return c == Convention::PaperLiteral ? "paper-literal" : "geometric-oracle";
}

Convention parse_convention(const std::string& text) {
  if (text == "paper-literal" || text == "PaperLiteral") return Convention::PaperLiteral;
  if (text == "geometric-oracle" || text == "geometric" || text == "GeometricOracle")
    return Convention::GeometricOracle;
  fail(ErrorKind::InvalidArgument, "unknown convention '" + text + "'");
}

std::string to_string(BlockKind k) {
  switch (k) {
    case BlockKind::HarmonicEta: return "harmonic-eta";
    case BlockKind::HarmonicMu: return "harmonic-mu";
    case BlockKind::ExactEta: return "exact-eta";
    case BlockKind::CoexactMu: return "coexact-mu";
    case BlockKind::PairLower: return "pair-lower";
    case BlockKind::PairUpper: return "pair-upper";
  }
  return "harmonic-mu";
}

long FiberSpectrum::multiplicity(int degree, double mu2, FormType type) const {
  long total = 0;
  for (const auto& e : entries)
    if (e.degree == degree && e.type == type && same_value(e.mu2, mu2)) total += e.multiplicity;
  return total;
}

std::vector<std::vector<double>> lattice_frequencies(const std::vector<double>& periods,
                                                     double mu_max) {
  validate_periods(periods);
  require(mu_max >= 0, ErrorKind::InvalidArgument, "mu_max must be nonnegative");
  const int f = static_cast<int>(periods.size());
  const double limit = mu_max * mu_max * (1.0 + kShellTol);
  std::vector<long> kmax(f);
  for (int i = 0; i < f; ++i)
    kmax[i] = static_cast<long>(std::floor(mu_max * periods[i] / (2 * std::numbers::pi))) + 1;

  struct Entry {
    double mu2;
    std::vector<long> k;
    std::vector<double> xi;
  };
  std::vector<Entry> found;
  std::vector<long> k(f);
  std::vector<double> xi(f);
  std::function<void(int, double)> rec = [&](int i, double acc) {
    if (i == f) {
      found.push_back({acc, k, xi});
      return;
    }
    for (long v = -kmax[i]; v <= kmax[i]; ++v) {
      const double x = 2 * std::numbers::pi * static_cast<double>(v) / periods[i];
      if (acc + x * x > limit) continue;
      k[i] = v;
      xi[i] = x;
      rec(i + 1, acc + x * x);
    }
  };
  rec(0, 0.0);
  std::sort(found.begin(), found.end(), [](const Entry& a, const Entry& b) {
    if (!same_value(a.mu2, b.mu2)) return a.mu2 < b.mu2;
    return a.k < b.k;
  });
  std::vector<std::vector<double>> out;
  out.reserve(found.size());
  for (auto& e : found) out.push_back(std::move(e.xi));
  return out;
}

FiberSpectrum torus_spectrum(const std::vector<double>& periods, double mu_max) {
  validate_periods(periods);
  FiberSpectrum spec;
  spec.dim_f = static_cast<int>(periods.size());
  spec.periods = periods;
  spec.mu_max = mu_max;
  const int f = spec.dim_f;
  const auto shells = group_shells(lattice_frequencies(periods, mu_max));

  for (int l = 0; l <= f; ++l) {
    spec.entries.push_back({l, 0.0, binomial(f, l), FormType::Harmonic});
    for (const auto& shell : shells) {
      long exact = 0, coexact = 0;
      for (const auto& xi : shell.xis) {
        const long ex = l >= 1 ? matrix_rank(wedge_matrix(xi, l - 1)) : 0;
        // Coexact l-forms are the image of interior multiplication by xi,
        // the adjoint of xi ^ . : Lambda^l -> Lambda^{l+1}.
        const long co = l < f ? matrix_rank(wedge_matrix(xi, l)) : 0;
        if (ex + co != binomial(f, l))
          fail(ErrorKind::InvalidArgument, "Hodge decomposition rank mismatch");
        exact += ex;
        coexact += co;
      }
      if (exact > 0) spec.entries.push_back({l, shell.mu2, exact, FormType::Exact});
      if (coexact > 0) spec.entries.push_back({l, shell.mu2, coexact, FormType::Coexact});
    }
  }
  return spec;
}

FiberSpectrum circle_spectrum(double radius, double mu_max) {
  require(radius > 0 && std::isfinite(radius), ErrorKind::InvalidArgument,
          "circle radius must be positive");
  return torus_spectrum({2 * std::numbers::pi * radius}, mu_max);
}

DiagonalConstants diagonal_constants(int f, int l, Convention convention) {
  DiagonalConstants c;
  c.c1 = l - (f + 3) / 2.0;
  c.c2 = convention == Convention::PaperLiteral ? l - (f + 1) / 2.0 : l - (f - 1) / 2.0;
  return c;
}

std::vector<BlockEigenvalue> a_block_eigenvalues(const FiberSpectrum& fiber, int p,
                                                 Convention convention) {
  const int f = fiber.dim_f;
  require(p >= 0 && p <= f + 1, ErrorKind::InvalidArgument,
          "cone degree must satisfy 0 <= p <= dim F + 1");
  const int l = p;
  const auto [c1, c2] = diagonal_constants(f, l, convention);
  const double sign = (l % 2 == 0) ? 1.0 : -1.0;
  std::vector<BlockEigenvalue> out;

  for (const auto& e : fiber.entries) {
    if (e.degree == l - 1) {
      switch (e.type) {
        case FormType::Harmonic:
          out.push_back({c1 * c1, e.multiplicity, BlockKind::HarmonicEta, 0.0});
          break;
        case FormType::Exact:
          out.push_back({e.mu2 + c1 * c1, e.multiplicity, BlockKind::ExactEta, e.mu2});
          break;
        case FormType::Coexact: {
          // Block on span{phi, d phi / mu}.
          if (l <= f && fiber.multiplicity(l, e.mu2, FormType::Exact) != e.multiplicity)
            fail(ErrorKind::InvalidArgument, "d is not an isomorphism on this eigenspace");
          const double mu = std::sqrt(e.mu2);
          const double a = e.mu2 + c1 * c1;
          const double d = e.mu2 + c2 * c2;
          const double off = 2 * sign * mu;
          const double mean = 0.5 * (a + d);
          const double radius = std::hypot(0.5 * (a - d), off);
          const double upper = mean + radius;
          const double lower = upper > 0 ? (a * d - off * off) / upper : mean - radius;
          out.push_back({lower, e.multiplicity, BlockKind::PairLower, e.mu2});
          out.push_back({upper, e.multiplicity, BlockKind::PairUpper, e.mu2});
          break;
        }
      }
    } else if (e.degree == l) {
      if (e.type == FormType::Harmonic)
        out.push_back({c2 * c2, e.multiplicity, BlockKind::HarmonicMu, 0.0});
      else if (e.type == FormType::Coexact)
        out.push_back({e.mu2 + c2 * c2, e.multiplicity, BlockKind::CoexactMu, e.mu2});
      // exact l-forms are the partners in the coupled blocks above
    }
  }
  return out;
}

double required_fiber_mu(int /*f*/, int /*p*/, Convention /*convention*/, double nu_cutoff) {
  // Every block eigenvalue built from mu satisfies nu^2 >= mu^2 - 2 mu.
  return 1.0 + std::sqrt(1.0 + nu_cutoff * nu_cutoff);
}

NuSpectrum NuSpectrum::degree(int p) const {
  NuSpectrum out;
  out.convention = convention;
  out.cutoff = cutoff;
  for (const auto& m : modes)
    if (m.cone_degree == p) out.modes.push_back(m);
  return out;
}

long NuSpectrum::count() const {
  long n = 0;
  for (const auto& m : modes) n += m.multiplicity;
  return n;
}

namespace {

void sort_modes(std::vector<NuMode>& modes) {
  std::stable_sort(modes.begin(), modes.end(), [](const NuMode& a, const NuMode& b) {
    if (a.nu != b.nu) return a.nu < b.nu;
    if (a.cone_degree != b.cone_degree) return a.cone_degree < b.cone_degree;
    return static_cast<int>(a.origin) < static_cast<int>(b.origin);
  });
}

}  // namespace

NuSpectrum a_spectrum(const FiberSpectrum& fiber, int p, Convention convention, double nu_cutoff) {
  require(nu_cutoff >= 0, ErrorKind::InvalidArgument, "nu cutoff must be nonnegative");
  const double need = required_fiber_mu(fiber.dim_f, p, convention, nu_cutoff);
  if (fiber.mu_max < need)
    fail(ErrorKind::InvalidArgument, "fibre spectrum is complete only up to mu = " +
                                         num(fiber.mu_max) + ", need " +
                                         num(need));
  NuSpectrum out;
  out.convention = convention;
  out.cutoff = nu_cutoff;
  for (const auto& blk : a_block_eigenvalues(fiber, p, convention)) {
    if (blk.nu2 < -1e-12 * std::max(1.0, blk.mu2))
      fail(ErrorKind::NegativeBlockEigenvalue,
           "A has eigenvalue " + std::to_string(blk.nu2) + " in cone degree " + std::to_string(p) +
               " (fibre mu^2 = " + num(blk.mu2) + ", convention " +
               to_string(convention) + ")");
    const double nu = std::sqrt(std::max(0.0, blk.nu2));
    if (nu > nu_cutoff) continue;
    out.modes.push_back({nu, blk.multiplicity, p, blk.origin, blk.mu2});
  }
  sort_modes(out.modes);
  return out;
}

NuSpectrum a_spectrum_all_degrees(const FiberSpectrum& fiber, Convention convention,
                                  double nu_cutoff) {
  std::vector<NuSpectrum> parts;
  for (int p = 0; p <= fiber.dim_f + 1; ++p)
    parts.push_back(a_spectrum(fiber, p, convention, nu_cutoff));
  return merge(parts);
}

NuSpectrum merge(const std::vector<NuSpectrum>& parts) {
  NuSpectrum out;
  if (parts.empty()) return out;
  out.convention = parts.front().convention;
  out.cutoff = parts.front().cutoff;
  for (const auto& s : parts) {
    out.cutoff = std::min(out.cutoff, s.cutoff);
    out.modes.insert(out.modes.end(), s.modes.begin(), s.modes.end());
  }
  std::erase_if(out.modes, [&](const NuMode& m) { return m.nu > out.cutoff; });
  sort_modes(out.modes);
  return out;
}

DenseAResult dense_a_eigenvalues(const std::vector<double>& periods, int p, Convention convention,
                                 std::size_t n_modes) {
  validate_periods(periods);
  const int f = static_cast<int>(periods.size());
  require(p >= 0 && p <= f + 1, ErrorKind::InvalidArgument,
          "cone degree must satisfy 0 <= p <= dim F + 1");
  require(n_modes >= 1, ErrorKind::InvalidArgument, "need at least one Fourier mode");

  const double min_period = *std::min_element(periods.begin(), periods.end());
  double radius = 2 * std::numbers::pi / min_period;
  std::vector<std::vector<double>> freqs;
  for (;;) {
    freqs = lattice_frequencies(periods, radius);
    if (freqs.size() > n_modes) break;
    radius *= 1.5;
  }
  auto norm2 = [](const std::vector<double>& xi) {
    double s = 0.0;
    for (double v : xi) s += v * v;
    return s;
  };
  std::size_t used = n_modes;
  while (used > 0 && same_value(norm2(freqs[used - 1]), norm2(freqs[used]))) --used;
  require(used > 0, ErrorKind::InvalidArgument, "first frequency shell exceeds the mode budget");

  const int l = p;
  const auto [c1, c2] = diagonal_constants(f, l, convention);
  const double sign = (l % 2 == 0) ? 1.0 : -1.0;
  const auto eta_dim = static_cast<Eigen::Index>(l >= 1 ? binomial(f, l - 1) : 0);
  const auto mu_dim = static_cast<Eigen::Index>(binomial(f, l));
  const Eigen::Index block = eta_dim + mu_dim;
  const auto n = static_cast<Eigen::Index>(used) * block;

  using cd = std::complex<double>;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t mode = 0; mode < used; ++mode) {
    const auto& xi = freqs[mode];
    const double mu2 = norm2(xi);
    const Eigen::Index o = static_cast<Eigen::Index>(mode) * block;
    for (Eigen::Index i = 0; i < eta_dim; ++i) a(o + i, o + i) = mu2 + c1 * c1;
    for (Eigen::Index i = 0; i < mu_dim; ++i) a(o + eta_dim + i, o + eta_dim + i) = mu2 + c2 * c2;
    if (eta_dim > 0 && mu_dim > 0) {
      // d = i xi ^ . on e^{i xi x} forms; delta is its adjoint.
      const Eigen::MatrixXd w = wedge_matrix(xi, l - 1);
      for (Eigen::Index r = 0; r < mu_dim; ++r) {
        for (Eigen::Index c = 0; c < eta_dim; ++c) {
          const cd dval = cd(0.0, 2 * sign * w(r, c));
          a(o + eta_dim + r, o + c) = dval;
          a(o + c, o + eta_dim + r) = std::conj(dval);
        }
      }
    }
  }
  DenseAResult out;
  out.modes_used = used;
  out.shell_mu2 = norm2(freqs[used - 1]);
  if (n > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    out.nu2.assign(ev.data(), ev.data() + ev.size());
  }
  return out;
}

namespace {

// Kuhn augmenting-path matching restricted to the given start vertices.
std::size_t match_from(const std::vector<std::vector<std::size_t>>& adj,
                       const std::vector<std::size_t>& starts, std::size_t n_right) {
  std::vector<long> owner(n_right, -1);
  std::vector<char> seen;
  std::function<bool(std::size_t)> augment = [&](std::size_t u) -> bool {
    for (std::size_t v : adj[u]) {
      if (seen[v]) continue;
      seen[v] = 1;
      if (owner[v] < 0 || augment(static_cast<std::size_t>(owner[v]))) {
        owner[v] = static_cast<long>(u);
        return true;
      }
    }
    return false;
  };
  std::size_t matched = 0;
  for (std::size_t u : starts) {
    seen.assign(n_right, 0);
    if (augment(u)) ++matched;
  }
  return matched;
}

std::vector<double> expand(const NuSpectrum& s, double cutoff) {
  std::vector<double> out;
  for (const auto& m : s.modes)
    if (m.nu <= cutoff)
      for (long i = 0; i < m.multiplicity; ++i) out.push_back(m.nu);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

bool gauss_bonnet_consistency(const NuSpectrum& plus, const NuSpectrum& minus, double tol) {
  const double cutoff = std::min(plus.cutoff, minus.cutoff);
  const auto left = expand(plus, cutoff);
  const auto right = expand(minus, cutoff);
  if (left.size() + right.size() < 10)
    fail(ErrorKind::TooFewModes, "need at least 10 modes below the common cutoff to match");

  auto compatible = [tol](double a, double b) {
    return std::abs(std::abs(a - b) - 1.0) <= tol || std::abs(a + b - 1.0) <= tol;
  };
  auto build = [&](const std::vector<double>& from, const std::vector<double>& to) {
    std::vector<std::vector<std::size_t>> adj(from.size());
    for (std::size_t i = 0; i < from.size(); ++i) {
      const auto lo = std::lower_bound(to.begin(), to.end(), from[i] - 1.0 - 2 * tol);
      for (auto it = lo; it != to.end() && *it <= from[i] + 1.0 + 2 * tol; ++it)
        if (compatible(from[i], *it)) adj[i].push_back(static_cast<std::size_t>(it - to.begin()));
    }
    return adj;
  };
  auto interior = [&](const std::vector<double>& v) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] <= cutoff - 1.0 - tol) idx.push_back(i);
    return idx;
  };
  // A matching covering the interior of each side separately implies one
  // covering both (Mendelsohn-Dulmage).
  const auto in_left = interior(left);
  const auto in_right = interior(right);
  return match_from(build(left, right), in_left, right.size()) == in_left.size() &&
         match_from(build(right, left), in_right, left.size()) == in_right.size();
}

}  // namespace torsionlab::fiber
