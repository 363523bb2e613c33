#include "torsionlab/conekernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>

#include <Eigen/Dense>
#include <boost/math/special_functions/gamma.hpp>

#include "torsionlab/bessel.hpp"
#include "torsionlab/error.hpp"
#include "torsionlab/parallel.hpp"
#include "torsionlab/summation.hpp"

namespace torsionlab::cone {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool same_order(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a));
}

bool positive_finite(double v) { return std::isfinite(v) && v > 0; }

}  // namespace

double cone_heat_kernel(double nu, double t, double x, double y) {
  require(std::isfinite(nu) && nu >= 0, ErrorKind::InvalidArgument, "nu must be nonnegative");
  require(positive_finite(t) && positive_finite(x) && positive_finite(y),
          ErrorKind::InvalidArgument, "t, x and y must be positive");
  const double z = x * y / (2 * t);
  const double d = x - y;
  return std::sqrt(x * y) / (2 * t) * bessel::bessel_i(nu, z, true) * std::exp(-d * d / (4 * t));
}

std::size_t ConeSpectrum::order_index(double nu) const {
  const auto it = std::lower_bound(orders.begin(), orders.end(), nu - 1e-12 * std::max(1.0, nu));
  if (it == orders.end() || !same_order(*it, nu))
    fail(ErrorKind::InvalidArgument, "order " + num(nu) + " not in the cone spectrum");
  return static_cast<std::size_t>(it - orders.begin());
}

const std::vector<double>& ConeSpectrum::zeros_for(double nu) const {
  return *zeros[order_index(nu)];
}

ConeSpectrum build_cone_spectrum(const fiber::NuSpectrum& spectrum, double lambda_cutoff,
                                 double weyl_exponent) {
  require(positive_finite(lambda_cutoff), ErrorKind::InvalidArgument,
          "eigenvalue cutoff must be positive and finite");
  require(positive_finite(weyl_exponent), ErrorKind::InvalidArgument,
          "Weyl exponent must be positive");
  require(spectrum.cutoff >= std::sqrt(lambda_cutoff), ErrorKind::InvalidArgument,
          "nu spectrum cutoff " + num(spectrum.cutoff) +
              " is below sqrt(lambda cutoff); eigenvalues would be missing");
  ConeSpectrum out;
  out.nu_spectrum = spectrum;
  out.lambda_cutoff = lambda_cutoff;
  out.weyl_exponent = weyl_exponent;
  std::vector<double> nus;
  for (const auto& m : spectrum.modes) nus.push_back(m.nu);
  std::sort(nus.begin(), nus.end());
  for (double nu : nus)
    if (out.orders.empty() || !same_order(out.orders.back(), nu)) out.orders.push_back(nu);

  out.zeros.resize(out.orders.size());
  out.eigenvalues.resize(out.orders.size());
  parallel_for(out.orders.size(), [&](std::size_t i) {
    auto z = std::make_shared<std::vector<double>>(bessel::bessel_j_zeros(out.orders[i], lambda_cutoff));
    auto l = std::make_shared<std::vector<double>>(z->size());
    for (std::size_t k = 0; k < z->size(); ++k) (*l)[k] = (*z)[k] * (*z)[k];
    out.zeros[i] = std::move(z);
    out.eigenvalues[i] = std::move(l);
  });
  return out;
}

std::vector<double> log_grid(double t_min, double t_max, std::size_t points) {
  require(positive_finite(t_min) && positive_finite(t_max) && t_min < t_max,
          ErrorKind::InvalidArgument, "grid needs 0 < t_min < t_max");
  require(points >= 2, ErrorKind::InvalidArgument, "grid needs at least two points");
  std::vector<double> g(points);
  const double a = std::log(t_min), b = std::log(t_max);
  for (std::size_t i = 0; i < points; ++i)
    g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
  g.front() = t_min;
  g.back() = t_max;
  return g;
}

LevelSet::LevelSet(std::vector<Group> groups, double zero_modes, double lambda_cutoff,
                   double weyl_exponent)
    : groups_(std::move(groups)),
      zero_modes_(zero_modes),
      lambda_cutoff_(lambda_cutoff),
      weyl_exponent_(weyl_exponent),
      lambda_min_(kInf) {
  require(zero_modes >= 0, ErrorKind::InvalidArgument, "zero-mode count must be nonnegative");
  require(lambda_cutoff > 0, ErrorKind::InvalidArgument, "cutoff must be positive");
  require(positive_finite(weyl_exponent), ErrorKind::InvalidArgument,
          "Weyl exponent must be positive");
  std::vector<std::pair<double, double>> all;
  for (const auto& g : groups_) {
    require(g.lambdas != nullptr && g.multiplicity >= 0, ErrorKind::InvalidArgument,
            "malformed eigenvalue group");
    for (std::size_t k = 0; k < g.lambdas->size(); ++k) {
      const double l = (*g.lambdas)[k];
      require(l > 0 && (k == 0 || l >= (*g.lambdas)[k - 1]), ErrorKind::InvalidArgument,
              "group eigenvalues must be positive and ascending");
      if (g.multiplicity > 0) all.emplace_back(l, g.multiplicity);
    }
    if (!g.lambdas->empty() && g.multiplicity > 0) lambda_min_ = std::min(lambda_min_, g.lambdas->front());
  }
  std::sort(all.begin(), all.end());
  double count = 0.0, ratio = 0.0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    count += all[i].second;
    if (i + 1 < all.size() && all[i + 1].first == all[i].first) continue;
    ratio = std::max(ratio, count / std::pow(all[i].first, weyl_exponent_));
  }
  weyl_constant_ = 2.0 * ratio;
}

double LevelSet::positive_part(double t) const {
  std::vector<double> partial(groups_.size(), 0.0);
  auto one = [&](std::size_t i) {
    CompensatedSum s;
    for (double l : *groups_[i].lambdas) {
      const double e = std::exp(-t * l);
      if (e == 0.0) break;
      s.add(e);
    }
    partial[i] = groups_[i].multiplicity * s.value();
  };
  if (groups_.size() >= 64)
    parallel_for(groups_.size(), one);
  else
    for (std::size_t i = 0; i < groups_.size(); ++i) one(i);
  CompensatedSum total;
  for (double v : partial) total.add(v);
  return total.value();
}

double LevelSet::tail(double t) const {
  if (!std::isfinite(lambda_cutoff_)) return 0.0;
  if (weyl_constant_ == 0.0) return kInf;  // nothing computed to calibrate against
  const double d = weyl_exponent_;
  return weyl_constant_ * std::pow(t, -d) * boost::math::tgamma(d + 1.0, t * lambda_cutoff_);
}

TraceFunction::TraceFunction(std::shared_ptr<const LevelSet> set) {
  require(set != nullptr, ErrorKind::InvalidArgument, "null level set");
  terms_.push_back({1.0, {std::move(set)}});
}

TraceFunction TraceFunction::unit() {
  TraceFunction f;
  f.terms_.push_back({1.0, {}});
  return f;
}

TraceFunction& TraceFunction::operator+=(const TraceFunction& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

TraceFunction operator*(const TraceFunction& a, const TraceFunction& b) {
  TraceFunction out;
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      TraceFunction::Term t{ta.coefficient * tb.coefficient, ta.factors};
      t.factors.insert(t.factors.end(), tb.factors.begin(), tb.factors.end());
      out.terms_.push_back(std::move(t));
    }
  }
  return out;
}

TraceValue TraceFunction::evaluate(double t) const {
  require(positive_finite(t), ErrorKind::InvalidArgument, "t must be positive");
  CompensatedSum value, tail;
  for (const auto& term : terms_) {
    double v = 1.0, upper = 1.0;
    for (const auto& f : term.factors) {
      const double fv = f->zero_modes() + f->positive_part(t);
      v *= fv;
      upper *= fv + f->tail(t);
    }
    value.add(term.coefficient * v);
    tail.add(std::abs(term.coefficient) * (upper - v));
  }
  return {value.value(), tail.value()};
}

double TraceFunction::positive_part(double t) const {
  require(positive_finite(t), ErrorKind::InvalidArgument, "t must be positive");
  CompensatedSum total;
  for (const auto& term : terms_) {
    const std::size_t n = term.factors.size();
    std::vector<double> k(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
      k[i] = term.factors[i]->zero_modes();
      p[i] = term.factors[i]->positive_part(t);
    }
    // Expand prod (k_i + p_i) - prod k_i over nonempty subsets.
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
      double v = term.coefficient;
      for (std::size_t i = 0; i < n; ++i) v *= (mask >> i & 1) ? p[i] : k[i];
      total.add(v);
    }
  }
  return total.value();
}

double TraceFunction::kernel_dim() const {
  double total = 0.0;
  for (const auto& term : terms_) {
    double v = term.coefficient;
    for (const auto& f : term.factors) v *= f->zero_modes();
    total += v;
  }
  return total;
}

double TraceFunction::lambda_min() const {
  double best = kInf;
  for (const auto& term : terms_) {
    if (term.coefficient == 0.0) continue;
    double base = 0.0;  // smallest eigenvalue of the product
    for (const auto& f : term.factors) base += f->zero_modes() > 0 ? 0.0 : f->lambda_min();
    if (base > 0) {
      best = std::min(best, base);
      continue;
    }
    for (const auto& f : term.factors)
      if (f->zero_modes() > 0) best = std::min(best, f->lambda_min());
  }
  return best;
}

TraceSamples TraceFunction::sample(const std::vector<double>& grid, double rel_tol) const {
  TraceSamples out;
  out.grid = grid;
  out.values.resize(grid.size());
  out.tail_bound.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto v = evaluate(grid[i]);
    if (!(v.tail <= rel_tol * std::abs(v.value)))
      fail(ErrorKind::TailNotCertified,
           "truncation bound " + num(v.tail) + " exceeds " + num(rel_tol) +
               " x trace at t = " + num(grid[i]) + "; raise the eigenvalue cutoff");
    out.values[i] = v.value;
    out.tail_bound[i] = v.tail;
  }
  return out;
}

TraceFunction cone_trace_function(const ConeSpectrum& spec, int p) {
  std::map<std::size_t, double> mult;
  for (const auto& m : spec.nu_spectrum.modes)
    if (m.cone_degree == p) mult[spec.order_index(m.nu)] += static_cast<double>(m.multiplicity);
  std::vector<LevelSet::Group> groups;
  for (const auto& [idx, count] : mult) groups.push_back({count, spec.eigenvalues[idx]});
  return TraceFunction(std::make_shared<LevelSet>(std::move(groups), 0.0, spec.lambda_cutoff,
                                                  spec.weyl_exponent));
}

TraceSamples truncated_cone_trace(const ConeSpectrum& spec, int p, const std::vector<double>& t_grid) {
  return cone_trace_function(spec, p).sample(t_grid);
}

std::vector<TraceFunction> torus_traces(const std::vector<double>& periods, double lambda_cutoff) {
  require(positive_finite(lambda_cutoff), ErrorKind::InvalidArgument,
          "eigenvalue cutoff must be positive and finite");
  const auto spec = fiber::torus_spectrum(periods, std::sqrt(lambda_cutoff));
  const int f = spec.dim_f;
  std::vector<TraceFunction> out;
  for (int l = 0; l <= f; ++l) {
    std::map<double, double> level;  // mu2 -> multiplicity
    double zero = 0.0;
    for (const auto& e : spec.entries) {
      if (e.degree != l) continue;
      if (e.type == fiber::FormType::Harmonic)
        zero += static_cast<double>(e.multiplicity);
      else
        level[e.mu2] += static_cast<double>(e.multiplicity);
    }
    std::map<double, std::vector<double>> by_mult;
    for (const auto& [mu2, m] : level) by_mult[m].push_back(mu2);
    std::vector<LevelSet::Group> groups;
    for (auto& [m, ls] : by_mult)
      groups.push_back({m, std::make_shared<const std::vector<double>>(std::move(ls))});
    out.emplace_back(std::make_shared<LevelSet>(std::move(groups), zero, lambda_cutoff, f / 2.0));
  }
  return out;
}

std::vector<TraceFunction> circle_traces(double radius, double lambda_cutoff) {
  require(positive_finite(radius), ErrorKind::InvalidArgument, "circle radius must be positive");
  return torus_traces({2 * std::numbers::pi * radius}, lambda_cutoff);
}

std::vector<TraceFunction> point_traces() { return {TraceFunction::unit()}; }

std::vector<TraceFunction> product_trace(const std::vector<std::vector<TraceFunction>>& factors) {
  require(!factors.empty(), ErrorKind::InvalidArgument, "product of no factors");
  std::vector<TraceFunction> acc = factors.front();
  for (std::size_t f = 1; f < factors.size(); ++f) {
    const auto& next = factors[f];
    std::vector<TraceFunction> out(acc.size() + next.size() - 1);
    for (std::size_t i = 0; i < acc.size(); ++i)
      for (std::size_t j = 0; j < next.size(); ++j) out[i + j] += acc[i] * next[j];
    acc = std::move(out);
  }
  return acc;
}

std::vector<TraceSamples> product_trace(const std::vector<std::vector<TraceSamples>>& factors) {
  require(!factors.empty() && !factors.front().empty(), ErrorKind::InvalidArgument,
          "product of no factors");
  const auto& grid = factors.front().front().grid;
  for (const auto& fac : factors) {
    require(!fac.empty(), ErrorKind::InvalidArgument, "factor without degrees");
    for (const auto& s : fac)
      require(s.grid == grid && s.values.size() == grid.size() && s.tail_bound.size() == grid.size(),
              ErrorKind::MismatchedGrids, "factor traces must share one t grid");
  }
  std::vector<TraceSamples> acc = factors.front();
  for (std::size_t f = 1; f < factors.size(); ++f) {
    const auto& next = factors[f];
    std::vector<TraceSamples> out(acc.size() + next.size() - 1);
    for (auto& o : out) {
      o.grid = grid;
      o.values.assign(grid.size(), 0.0);
      o.tail_bound.assign(grid.size(), 0.0);
    }
    for (std::size_t i = 0; i < acc.size(); ++i) {
      for (std::size_t j = 0; j < next.size(); ++j) {
        auto& o = out[i + j];
        for (std::size_t n = 0; n < grid.size(); ++n) {
          const double a = acc[i].values[n], b = next[j].values[n];
          const double ea = acc[i].tail_bound[n], eb = next[j].tail_bound[n];
          o.values[n] += a * b;
          o.tail_bound[n] += (a + ea) * (b + eb) - a * b;
        }
      }
    }
    acc = std::move(out);
  }
  return acc;
}

double FittedExpansion::coefficient(const phg::Rational& exponent, bool log) const {
  for (std::size_t j = 0; j < tpl.terms.size(); ++j)
    if (tpl.terms[j].exponent == exponent && tpl.terms[j].log == log) return coefficients[j];
  return 0.0;
}

namespace {

double basis(const phg::TemplateTerm& term, double t) {
  const double p = std::pow(t, phg::to_double(term.exponent));
  return term.log ? p * std::log(t) : p;
}

struct WindowFit {
  std::vector<double> coefficients;
  std::vector<double> stderrs;
  double residual = kInf;
  double condition = kInf;
};

WindowFit fit_prefix(const TraceSamples& s, const phg::ExpansionTemplate& tpl, std::size_t count) {
  const auto p = static_cast<Eigen::Index>(tpl.terms.size());
  const auto n = static_cast<Eigen::Index>(count);
  const double alpha_min = phg::to_double(tpl.min_exponent());
  Eigen::MatrixXd a(n, p);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = s.grid[static_cast<std::size_t>(i)];
    const double w = std::pow(t, -alpha_min);
    for (Eigen::Index j = 0; j < p; ++j) a(i, j) = w * basis(tpl.terms[static_cast<std::size_t>(j)], t);
    rhs(i) = w * s.values[static_cast<std::size_t>(i)];
  }
  Eigen::VectorXd scale = a.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < p; ++j) {
    if (scale(j) == 0.0) scale(j) = 1.0;
    a.col(j) /= scale(j);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  WindowFit out;
  out.condition = sv(p - 1) > 0 ? sv(0) / sv(p - 1) : kInf;
  const Eigen::VectorXd x = svd.solve(rhs);
  const Eigen::VectorXd r = rhs - a * x;
  const double sigma2 = n > p ? r.squaredNorm() / static_cast<double>(n - p) : 0.0;
  out.coefficients.resize(static_cast<std::size_t>(p));
  out.stderrs.resize(static_cast<std::size_t>(p));
  for (Eigen::Index j = 0; j < p; ++j) {
    out.coefficients[static_cast<std::size_t>(j)] = x(j) / scale(j);
    double var = 0.0;
    for (Eigen::Index k = 0; k < p; ++k) {
      const double v = svd.matrixV()(j, k) / sv(k);
      var += v * v;
    }
    out.stderrs[static_cast<std::size_t>(j)] = std::sqrt(sigma2 * var) / scale(j);
  }
  out.residual = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    double fit = 0.0;
    for (std::size_t j = 0; j < tpl.terms.size(); ++j)
      fit += out.coefficients[j] * basis(tpl.terms[j], s.grid[ii]);
    out.residual = std::max(out.residual, std::abs(fit - s.values[ii]) / std::abs(s.values[ii]));
  }
  return out;
}

}  // namespace

double FittedExpansion::evaluate(double t) const {
  CompensatedSum s;
  for (std::size_t j = 0; j < tpl.terms.size(); ++j) s.add(coefficients[j] * basis(tpl.terms[j], t));
  return s.value();
}

FittedExpansion fit_expansion(const TraceSamples& samples, const phg::ExpansionTemplate& tpl,
                              const FitOptions& options) {
  const std::size_t p = tpl.terms.size();
  const std::size_t n = samples.size();
  require(p > 0, ErrorKind::InvalidArgument, "empty expansion template");
  require(tpl.valid(), ErrorKind::InvalidArgument, "malformed expansion template");
  require(samples.values.size() == n && samples.tail_bound.size() == n, ErrorKind::MismatchedGrids,
          "sample arrays differ in length");
  if (n < 2 * p)
    fail(ErrorKind::InsufficientSamples, "need at least " + std::to_string(2 * p) +
                                             " samples for " + std::to_string(p) + " terms, got " +
                                             std::to_string(n));
  for (std::size_t i = 0; i < n; ++i) {
    require(positive_finite(samples.grid[i]) && (i == 0 || samples.grid[i] > samples.grid[i - 1]),
            ErrorKind::InvalidArgument, "sample grid must be positive and increasing");
    require(std::isfinite(samples.values[i]) && samples.values[i] != 0.0, ErrorKind::InvalidArgument,
            "sample values must be finite and nonzero");
  }

  const std::size_t smallest = std::max(2 * p, (n + 1) / 2);
  std::size_t chosen = n;
  WindowFit best = fit_prefix(samples, tpl, n);
  if (options.trim_window && !(best.residual <= options.window_residual)) {
    for (std::size_t count = n - 1; count >= smallest && count < n; --count) {
      WindowFit w = fit_prefix(samples, tpl, count);
      if (w.condition <= options.condition_limit && w.residual <= options.window_residual) {
        chosen = count;
        best = std::move(w);
        break;
      }
    }
  }
  if (!(best.condition <= options.condition_limit))
    fail(ErrorKind::IllConditioned, "fit condition number " + num(best.condition) +
                                        " exceeds " + num(options.condition_limit));

  FittedExpansion out;
  out.tpl = tpl;
  out.coefficients = best.coefficients;
  out.residual = best.residual;
  out.condition = best.condition;
  out.samples_used = chosen;
  out.t_min = samples.grid.front();
  out.t_max = samples.grid[chosen - 1];
  out.coefficient_errors = best.stderrs;
  const std::size_t shrunk = std::max(2 * p, chosen * 3 / 4);
  if (shrunk < chosen) {
    const WindowFit alt = fit_prefix(samples, tpl, shrunk);
    for (std::size_t j = 0; j < p; ++j)
      out.coefficient_errors[j] =
          std::max(out.coefficient_errors[j], std::abs(alt.coefficients[j] - best.coefficients[j]));
  }
  return out;
}

double mckean_singer_defect(const std::vector<TraceSamples>& per_degree,
                            const std::vector<long>& betti) {
  require(!per_degree.empty(), ErrorKind::InvalidArgument, "no degrees supplied");
  require(betti.size() == per_degree.size(), ErrorKind::InvalidArgument,
          "one Betti number per degree required");
  const auto& grid = per_degree.front().grid;
  for (const auto& s : per_degree)
    require(s.grid == grid && s.values.size() == grid.size(), ErrorKind::MismatchedGrids,
            "degree traces must share one t grid");
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CompensatedSum s;
    for (std::size_t k = 0; k < per_degree.size(); ++k) {
      const double sign = k % 2 == 0 ? 1.0 : -1.0;
      s.add(sign * per_degree[k].values[i]);
      s.add(-sign * static_cast<double>(betti[k]));
    }
    worst = std::max(worst, std::abs(s.value()));
  }
  return worst;
}

std::vector<phg::OrderParity> model_front_face_parities(int max_order) {
  require(max_order >= 0, ErrorKind::InvalidArgument, "order must be nonnegative");
  // On the front face w = rho * omega.  The radial cone factor does not
  // involve omega, so the rho-expansion comes from the Euclidean Gaussian:
  // exp(-rho^2 |omega|^2 / 4 tau) = sum_j (-|omega|^2 / 4 tau)^j rho^{2j} / j!.
  const std::vector<std::vector<double>> probes = {{0.3, -0.7}, {1.1, 0.4}, {-0.25, 0.9}};
  const double tau = 0.7;
  auto coefficient = [&](int k, const std::vector<double>& omega) {
    if (k % 2 != 0) return 0.0;
    double r2 = 0.0;
    for (double v : omega) r2 += v * v;
    const int j = k / 2;
    return std::pow(-r2 / (4 * tau), j) / std::tgamma(j + 1.0);
  };
  std::vector<phg::OrderParity> out;
  for (int k = 0; k <= max_order; ++k) {
    bool even = true, odd = true;
    for (const auto& omega : probes) {
      std::vector<double> flipped(omega.size());
      for (std::size_t i = 0; i < omega.size(); ++i) flipped[i] = -omega[i];
      const double a = coefficient(k, omega), b = coefficient(k, flipped);
      even = even && a == b;
      odd = odd && a == -b;
    }
    phg::Parity parity;
    const phg::Parity expected = k % 2 == 0 ? phg::Parity::Even : phg::Parity::Odd;
    const phg::Parity other = k % 2 == 0 ? phg::Parity::Odd : phg::Parity::Even;
    if (even && odd)  // vanishing coefficient
      parity = expected;
    else if (even || odd)
      parity = even ? phg::Parity::Even : phg::Parity::Odd;
    else
      parity = other;  // no definite parity
    out.push_back({k, parity});
  }
  return out;
}

}  // namespace torsionlab::cone
