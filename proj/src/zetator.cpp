#include "torsionlab/zetator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "torsionlab/error.hpp"
#include "torsionlab/summation.hpp"

namespace torsionlab::zeta {

namespace {

constexpr double kGamma = std::numbers::egamma;
// Third Taylor coefficient of 1/Gamma(s) = s + gamma s^2 + g3 s^3 + ...
constexpr double kG3 = 0.5 * kGamma * kGamma - std::numbers::pi * std::numbers::pi / 12.0;

// Laurent coefficients (s^-2, s^-1, s^0) at s = 0 of int_0^T t^{s-1} phi(t) dt.
struct Laurent {
  double m2 = 0.0;
  double m1 = 0.0;
  double a0 = 0.0;
};

Laurent mellin_head(const phg::TemplateTerm& term, double T) {
  const double alpha = phg::to_double(term.exponent);
  const double L = std::log(T);
  Laurent r;
  if (term.exponent == phg::Rational{0}) {
    if (term.log) {
      r.m2 = -1.0;
      r.a0 = 0.5 * L * L;
    } else {
      r.m1 = 1.0;
      r.a0 = L;
    }
  } else {
    const double p = std::pow(T, alpha);
    r.a0 = term.log ? p * (L / alpha - 1.0 / (alpha * alpha)) : p / alpha;
  }
  return r;
}

// Globally adaptive Gauss-Kronrod in u = log t (dt / t = du): the panel with
// the largest error estimate is bisected until the total error drops below
// max(tol |I|, floor) or the panel budget is spent.  floor is the roundoff
// level of the integrand, below which the estimates are noise.
double integrate_log(const std::function<double(double)>& f, double a, double b, double tol,
                     double floor, int max_panels, double* error) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  auto g = [&](double u) { return f(std::exp(u)); };
  struct Panel {
    double lo, hi, value, error;
  };
  auto eval = [&](double lo, double hi) {
    double err = 0.0;
    const double v = GK::integrate(g, lo, hi, 0, 0.0, &err);
    return Panel{lo, hi, v, err};
  };
  std::vector<Panel> panels{eval(std::log(a), std::log(b))};
  auto totals = [&](double& value, double& err) {
    CompensatedSum v, e;
    for (const auto& p : panels) {
      v += p.value;
      e += p.error;
    }
    value = v.value();
    err = e.value();
  };
  double value = 0.0, err = 0.0;
  totals(value, err);
  while (err > std::max(tol * std::abs(value), floor) && static_cast<int>(panels.size()) < max_panels) {
    const auto worst = std::max_element(panels.begin(), panels.end(),
                                        [](const Panel& x, const Panel& y) { return x.error < y.error; });
    const Panel p = *worst;
    const double mid = 0.5 * (p.lo + p.hi);
    *worst = eval(p.lo, mid);
    panels.insert(worst + 1, eval(mid, p.hi));
    totals(value, err);
  }
  *error = err;
  return value;
}

}  // namespace

ZetaData zeta_near_zero(const cone::TraceSamples& samples, const cone::FittedExpansion& fit,
                        long kernel_dim, const cone::TraceFunction& trace, int degree,
                        const ZetaOptions& options) {
  require(samples.size() > 0, ErrorKind::InsufficientSamples, "no trace samples");
  require(fit.coefficients.size() == fit.tpl.terms.size(), ErrorKind::InvalidArgument,
          "fit does not match its template");
  require(kernel_dim >= 0, ErrorKind::InvalidArgument, "kernel dimension must be nonnegative");
  if (!(fit.residual < options.max_fit_residual))
    fail(ErrorKind::FitResidualTooLarge, "fit residual " + num(fit.residual) +
                                             " is not below " +
                                             num(options.max_fit_residual));
  const double t_min = samples.grid.front();
  const double T = options.split;
  require(std::isfinite(T) && T > t_min, ErrorKind::InvalidArgument,
          "split point must exceed the smallest sample time");
  const double lambda_min = trace.lambda_min();
  if (!(std::isfinite(lambda_min) && lambda_min > 0))
    fail(ErrorKind::DecayRateUnknown, "no positive eigenvalue known to bound the large-t integral");

  const double K = static_cast<double>(kernel_dim);
  Laurent total;
  Laurent fit_err;
  for (std::size_t j = 0; j < fit.tpl.terms.size(); ++j) {
    const auto& term = fit.tpl.terms[j];
    const double c = fit.coefficients[j];
    const Laurent h = mellin_head(term, T);
    total.m2 += c * h.m2;
    total.m1 += c * h.m1;
    total.a0 += c * h.a0;
    // A coefficient error e changes the result by e times the head at t_min.
    const Laurent e = mellin_head(term, t_min);
    const double d = fit.coefficient_errors.empty() ? 0.0 : fit.coefficient_errors[j];
    fit_err.m2 += d * std::abs(e.m2);
    fit_err.m1 += d * std::abs(e.m1);
    fit_err.a0 += d * std::abs(e.a0);
  }
  total.m1 -= K;
  total.a0 -= K * std::log(T);

  ZetaData out;
  out.degree = degree;
  out.kernel_dim = kernel_dim;
  auto& diag = out.diagnostics;
  diag.split = T;
  diag.t_min = t_min;
  diag.lambda_min = lambda_min;

  auto remainder = [&](double t) { return trace.evaluate(t).value - fit.evaluate(t); };
  // Tr - fit cancels down from |Tr(t_min)|; Tr decreases, so this bounds the
  // roundoff accumulated over the whole range.
  const double eps = std::numeric_limits<double>::epsilon();
  const double noise = 100.0 * eps * std::abs(trace.evaluate(t_min).value) * std::log(T / t_min);
  diag.remainder_integral = integrate_log(remainder, t_min, T, options.quadrature_tol, noise,
                                          options.max_panels, &diag.remainder_error);
  // Terms beyond the template: their integral over (0, t_min) is of the size
  // of the remainder there (exponents above the cutoff are at least 1/2 apart).
  diag.truncation_error = 2.0 * std::abs(remainder(t_min));

  const double t_end = T + 50.0 / lambda_min;
  auto decaying = [&](double t) { return trace.positive_part(t); };
  diag.large_t_integral =
      integrate_log(decaying, T, t_end, options.quadrature_tol,
                    100.0 * eps * trace.positive_part(T) * std::log(t_end / T), options.max_panels,
                    &diag.large_t_error);
  diag.large_t_error += trace.positive_part(t_end) / (lambda_min * t_end);
  // Sample tails carry over to every evaluation of the trace.
  diag.large_t_error += trace.evaluate(T).tail * std::log(t_end / T);
  diag.remainder_error += trace.evaluate(t_min).tail * std::log(T / t_min);

  total.a0 += diag.remainder_integral + diag.large_t_integral;

  out.residue_at_zero = total.m2;
  out.zeta0_minus_kernel = total.m1 + kGamma * total.m2;
  out.zeta0 = out.zeta0_minus_kernel + K;
  out.zeta_prime0 = total.a0 + kGamma * total.m1 + kG3 * total.m2;

  const double a0_err = fit_err.a0 + diag.remainder_error + diag.large_t_error + diag.truncation_error;
  diag.fit_error = fit_err.a0 + kGamma * fit_err.m1 + std::abs(kG3) * fit_err.m2;
  out.residue_error = fit_err.m2;
  out.zeta0_error = fit_err.m1 + kGamma * fit_err.m2;
  out.zeta_prime0_error = a0_err + kGamma * fit_err.m1 + std::abs(kG3) * fit_err.m2;

  const auto predicted = phg::zeta_pole_structure(fit.tpl);
  out.regular_at_zero_predicted = predicted.regular_at_zero;
  for (const auto& pole : predicted.poles) {
    ZetaPole zp;
    zp.location = pole.location;
    zp.order = pole.order;
    const phg::Rational alpha = -pole.location;
    for (std::size_t j = 0; j < fit.tpl.terms.size(); ++j) {
      const auto& term = fit.tpl.terms[j];
      if (term.exponent != alpha) continue;
      const double d = fit.coefficient_errors.empty() ? 0.0 : fit.coefficient_errors[j];
      if (term.log) {
        zp.leading = -fit.coefficients[j];
        zp.error = std::max(zp.error, d);
      } else {
        zp.residue = fit.coefficients[j] - (alpha == phg::Rational{0} ? K : 0.0);
        if (zp.order == 1) zp.leading = zp.residue;
        zp.error = std::max(zp.error, d);
      }
    }
    out.poles.push_back(zp);
  }
  return out;
}

TorsionReport torsion_assemble(const std::vector<ZetaData>& per_degree, int m,
                               const std::string& model) {
  require(m >= 0, ErrorKind::InvalidArgument, "dimension must be nonnegative");
  std::vector<const ZetaData*> by_degree(static_cast<std::size_t>(m) + 1, nullptr);
  for (const auto& z : per_degree) {
    require(z.degree >= 0 && z.degree <= m, ErrorKind::InvalidArgument,
            "degree " + std::to_string(z.degree) + " outside 0.." + std::to_string(m));
    auto& slot = by_degree[static_cast<std::size_t>(z.degree)];
    require(slot == nullptr, ErrorKind::InvalidArgument,
            "degree " + std::to_string(z.degree) + " given twice");
    slot = &z;
  }
  for (int k = 0; k <= m; ++k)
    if (by_degree[static_cast<std::size_t>(k)] == nullptr)
      fail(ErrorKind::MissingDegree, "no zeta data for degree " + std::to_string(k));

  TorsionReport r;
  r.m = m;
  r.model = model;
  for (int k = 0; k <= m; ++k) {
    const ZetaData& z = *by_degree[static_cast<std::size_t>(k)];
    r.per_degree.push_back(z);
    const double w = 0.5 * (k % 2 == 0 ? 1.0 : -1.0) * k;
    r.log_T += w * z.zeta_prime0;
    r.log_T_error += std::abs(w) * z.zeta_prime0_error;
    r.torsion_residue += w * z.residue_at_zero;
    r.torsion_residue_error += std::abs(w) * z.residue_error;
    if (std::abs(z.residue_at_zero) > std::max(z.residue_error, 1e-12)) r.per_degree_regular = false;
  }
  r.residues_cancel = std::abs(r.torsion_residue) <= std::max(r.torsion_residue_error, 1e-12);
  r.torsion_zeta_regular = r.per_degree_regular || r.residues_cancel;
  return r;
}

int ModelDescriptor::dimension() const {
  int d = 0;
  for (const auto& f : factors) d += f.dim;
  return d;
}

ModelDescriptor parse_model_descriptor(const std::string& text) {
  ModelDescriptor model;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, '*')) {
    token.erase(0, token.find_first_not_of(" \t"));
    token.erase(token.find_last_not_of(" \t") + 1);
    std::string name = token, arg;
    if (const auto colon = token.find(':'); colon != std::string::npos) {
      name = token.substr(0, colon);
      arg = token.substr(colon + 1);
    }
    int n = 0;
    if (!arg.empty()) {
      try {
        std::size_t used = 0;
        n = std::stoi(arg, &used);
        if (used != arg.size() || n < 1) throw std::invalid_argument(arg);
      } catch (const std::exception&) {
        fail(ErrorKind::UnknownModel, "bad dimension in model factor '" + token + "'");
      }
    }
    if (name == "point" && arg.empty())
      model.factors.push_back({FactorKind::Point, 0});
    else if (name == "circle" && arg.empty())
      model.factors.push_back({FactorKind::Circle, 1});
    else if (name == "torus")
      model.factors.push_back({FactorKind::Torus, arg.empty() ? 2 : n});
    else if (name == "cone")
      model.factors.push_back({FactorKind::TruncatedCone, (arg.empty() ? 1 : n) + 1});
    else
      fail(ErrorKind::UnknownModel, "unknown model factor '" + token + "'");
  }
  if (model.factors.empty()) fail(ErrorKind::UnknownModel, "empty model descriptor");
  return model;
}

std::string to_string(const ModelDescriptor& model) {
  std::string out;
  for (const auto& f : model.factors) {
    if (!out.empty()) out += "*";
    switch (f.kind) {
      case FactorKind::Point: out += "point"; break;
      case FactorKind::Circle: out += "circle"; break;
      case FactorKind::Torus: out += "torus:" + std::to_string(f.dim); break;
      case FactorKind::TruncatedCone: out += "cone:" + std::to_string(f.dim - 1); break;
    }
  }
  return out;
}

std::vector<long> kernel_dimension(const ModelDescriptor& model) {
  require(!model.factors.empty(), ErrorKind::UnknownModel, "empty model descriptor");
  std::vector<long> acc{1};
  for (const auto& f : model.factors) {
    std::vector<long> betti(static_cast<std::size_t>(f.dim) + 1, 0);
    switch (f.kind) {
      case FactorKind::Point:
        betti = {1};
        break;
      case FactorKind::Circle:
      case FactorKind::Torus: {
        long c = 1;  // binomial(dim, k)
        for (int k = 0; k <= f.dim; ++k) {
          betti[static_cast<std::size_t>(k)] = c;
          c = c * (f.dim - k) / (k + 1);
        }
        break;
      }
      case FactorKind::TruncatedCone:
        break;  // J_nu(0) never vanishes: no zero modes
    }
    std::vector<long> next(acc.size() + betti.size() - 1, 0);
    for (std::size_t i = 0; i < acc.size(); ++i)
      for (std::size_t j = 0; j < betti.size(); ++j) next[i + j] += acc[i] * betti[j];
    acc = std::move(next);
  }
  return acc;
}

}  // namespace torsionlab::zeta
