#include "torsionlab/pipeline.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "torsionlab/error.hpp"

namespace torsionlab::pipeline {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool positive_finite(double v) { return std::isfinite(v) && v > 0; }

void check_periods(const std::vector<double>& periods, const std::string& what) {
  require(!periods.empty(), ErrorKind::InvalidArgument, what + " needs at least one period");
  for (double p : periods)
    require(positive_finite(p), ErrorKind::InvalidArgument, what + " periods must be positive");
}

}  // namespace

std::vector<double> ModelConfig::fiber_period_list() const {
  if (fiber == "circle") return {kTwoPi * fiber_radius};
  return fiber_periods.empty() ? std::vector<double>{kTwoPi, kTwoPi} : fiber_periods;
}

std::vector<double> ModelConfig::base_period_list() const {
  if (base == "circle") return {kTwoPi * base_radius};
  if (base == "torus") return base_periods.empty() ? std::vector<double>{kTwoPi, kTwoPi} : base_periods;
  return {};
}

int ModelConfig::fiber_dim() const {
  if (single_nu) return 0;
  return static_cast<int>(fiber_period_list().size());
}

int ModelConfig::base_dim() const {
  if (model == "cone") return 0;
  return static_cast<int>(base_period_list().size());
}

void ModelConfig::validate() const {
  require(model == "cone" || model == "product", ErrorKind::UnknownModel,
          "model must be 'cone' or 'product', got '" + model + "'");
  require(fiber == "circle" || fiber == "torus", ErrorKind::UnknownModel,
          "fiber must be 'circle' or 'torus', got '" + fiber + "'");
  require(base == "point" || base == "circle" || base == "torus", ErrorKind::UnknownModel,
          "base must be 'point', 'circle' or 'torus', got '" + base + "'");
  require(model == "product" || base == "point", ErrorKind::InvalidArgument,
          "a base other than 'point' needs model = product");
  require(positive_finite(fiber_radius), ErrorKind::InvalidArgument, "fiber radius must be positive");
  require(positive_finite(base_radius), ErrorKind::InvalidArgument, "base radius must be positive");
  if (fiber == "torus") check_periods(fiber_period_list(), "fiber torus");
  if (base == "torus") check_periods(base_period_list(), "base torus");
  require(positive_finite(t_min) && positive_finite(t_max) && t_min < t_max,
          ErrorKind::InvalidArgument, "need 0 < t_min < t_max");
  require(points >= 2, ErrorKind::InvalidArgument, "need at least two grid points");
  require(nu_max == 0.0 || positive_finite(nu_max), ErrorKind::InvalidArgument,
          "nu_max must be positive");
  require(lambda_max == 0.0 || positive_finite(lambda_max), ErrorKind::InvalidArgument,
          "lambda_max must be positive");
  require(positive_finite(split) && split > t_min, ErrorKind::InvalidArgument,
          "split must exceed t_min");
  if (single_nu) {
    require(std::isfinite(*single_nu) && *single_nu >= 0, ErrorKind::InvalidArgument,
            "single-nu order must be nonnegative");
    require(model == "cone", ErrorKind::InvalidArgument, "single-nu runs need model = cone");
  }
  const auto order = phg::parse_rational(fit_order);
  require(order > phg::Rational{0}, ErrorKind::InvalidArgument, "fit order must be positive");
  require(effective_nu_max() >= std::sqrt(effective_lambda_max()) || single_nu.has_value(),
          ErrorKind::InvalidArgument,
          "nu_max must be at least sqrt(lambda_max), or orders with eigenvalues below the cutoff are lost");
}

double ModelConfig::effective_lambda_max() const {
  return lambda_max > 0 ? lambda_max : 40.0 / t_min;
}

double ModelConfig::effective_nu_max() const {
  return nu_max > 0 ? nu_max : std::sqrt(effective_lambda_max());
}

zeta::ModelDescriptor ModelConfig::descriptor() const {
  zeta::ModelDescriptor d;
  if (base == "circle") d.factors.push_back({zeta::FactorKind::Circle, 1});
  if (base == "torus") d.factors.push_back({zeta::FactorKind::Torus, base_dim()});
  d.factors.push_back({zeta::FactorKind::TruncatedCone, fiber_dim() + 1});
  return d;
}

phg::ExpansionTemplate ModelConfig::expansion_template() const {
  return phg::heat_trace_structure(dimension(), base_dim(), even, true, phg::parse_rational(fit_order));
}

int ModelConfig::top_degree() const { return single_nu ? 0 : dimension(); }

io::Json to_json(const ModelConfig& c) {
  io::Json j{{"model", c.model}};
  if (c.single_nu) {
    j["single_nu"] = *c.single_nu;
  } else {
    j["fiber"] = {{"kind", c.fiber}, {"periods", c.fiber_period_list()}};
  }
  j["base"] = {{"kind", c.model == "cone" ? std::string("point") : c.base},
               {"periods", c.model == "cone" ? std::vector<double>{} : c.base_period_list()}};
  j["descriptor"] = zeta::to_string(c.descriptor());
  j["m"] = c.dimension();
  j["b"] = c.base_dim();
  j["f"] = c.fiber_dim();
  j["convention"] = fiber::to_string(c.convention);
  j["cutoffs"] = {{"nu_max", c.single_nu ? std::numeric_limits<double>::infinity() : c.effective_nu_max()},
                  {"lambda_max", c.effective_lambda_max()}};
  j["t_grid"] = {{"t_min", c.t_min}, {"t_max", c.t_max}, {"points", c.points}};
  j["even"] = c.even;
  j["fit_order"] = phg::to_string(phg::parse_rational(c.fit_order));
  j["split"] = c.split;
  return j;
}

SpectrumStage build_spectrum(const ModelConfig& config) {
  config.validate();
  SpectrumStage out;
  const double lambda = config.effective_lambda_max();
  if (config.single_nu) {
    out.nu.convention = config.convention;
    out.nu.cutoff = std::numeric_limits<double>::infinity();
    out.nu.modes.push_back({*config.single_nu, 1, 0, fiber::BlockKind::HarmonicMu, 0.0});
    out.cone = cone::build_cone_spectrum(out.nu, lambda, 0.5);
    return out;
  }
  const int f = config.fiber_dim();
  const double nu_cut = config.effective_nu_max();
  double mu = 0.0;
  for (int p = 0; p <= f + 1; ++p)
    mu = std::max(mu, fiber::required_fiber_mu(f, p, config.convention, nu_cut));
  const auto fs = fiber::torus_spectrum(config.fiber_period_list(), mu);
  out.nu = fiber::a_spectrum_all_degrees(fs, config.convention, nu_cut);
  out.cone = cone::build_cone_spectrum(out.nu, lambda, 0.5 * (f + 1));
  return out;
}

std::vector<cone::TraceFunction> build_traces(const ModelConfig& config, const SpectrumStage& spectrum) {
  std::vector<cone::TraceFunction> cone_part;
  const int top = config.single_nu ? 0 : config.fiber_dim() + 1;
  for (int p = 0; p <= top; ++p) cone_part.push_back(cone::cone_trace_function(spectrum.cone, p));
  if (config.model == "cone") return cone_part;
  const double lambda = config.effective_lambda_max();
  std::vector<cone::TraceFunction> base_part;
  if (config.base == "point")
    base_part = cone::point_traces();
  else
    base_part = cone::torus_traces(config.base_period_list(), lambda);
  return cone::product_trace(std::vector<std::vector<cone::TraceFunction>>{base_part, cone_part});
}

RunResult run(const ModelConfig& config, Stage last) {
  RunResult r;
  r.config = config;
  const auto spectrum = build_spectrum(config);
  const auto traces = build_traces(config, spectrum);
  const auto grid = cone::log_grid(config.t_min, config.t_max, static_cast<std::size_t>(config.points));
  const int top = config.top_degree();

  const auto dims = zeta::kernel_dimension(config.descriptor());
  for (int k = 0; k <= top; ++k) r.kernel_dims.push_back(dims[static_cast<std::size_t>(k)]);
  for (int k = 0; k <= top; ++k) r.samples.push_back(traces[static_cast<std::size_t>(k)].sample(grid));

  const auto ms_grid = cone::log_grid(r.mckean_singer_t_min, r.mckean_singer_t_max, 20);
  std::vector<cone::TraceSamples> ms;
  for (int k = 0; k <= top; ++k) ms.push_back(traces[static_cast<std::size_t>(k)].sample(ms_grid));
  r.mckean_singer_defect = cone::mckean_singer_defect(ms, r.kernel_dims);
  if (last == Stage::Trace) return r;

  r.tpl = config.single_nu
              ? phg::heat_trace_structure(1, 0, config.even, true, phg::parse_rational(config.fit_order))
              : config.expansion_template();
  for (const auto& s : r.samples) r.fits.push_back(cone::fit_expansion(s, r.tpl));
  if (last == Stage::Fit) return r;

  zeta::ZetaOptions options;
  options.split = config.split;
  std::vector<zeta::ZetaData> per_degree;
  for (int k = 0; k <= top; ++k) {
    const auto i = static_cast<std::size_t>(k);
    per_degree.push_back(zeta::zeta_near_zero(r.samples[i], r.fits[i], r.kernel_dims[i], traces[i], k,
                                              options));
  }
  r.report = zeta::torsion_assemble(per_degree, top, zeta::to_string(config.descriptor()));
  return r;
}

io::Json spectrum_json(const ModelConfig& config, const SpectrumStage& spectrum) {
  io::Json orders = io::Json::array();
  for (std::size_t i = 0; i < spectrum.cone.orders.size(); ++i)
    orders.push_back({{"nu", spectrum.cone.orders[i]},
                      {"eigenvalues", spectrum.cone.eigenvalues[i]->size()}});
  return {{"schema", io::kSchema},
          {"config", to_json(config)},
          {"nu_spectrum", io::to_json(spectrum.nu)},
          {"radial",
           {{"lambda_cutoff", spectrum.cone.lambda_cutoff},
            {"weyl_exponent", spectrum.cone.weyl_exponent},
            {"orders", orders}}}};
}

namespace {

io::Json header(const RunResult& r) {
  return {{"schema", io::kSchema}, {"config", to_json(r.config)}};
}

io::Json mckean_singer(const RunResult& r) {
  return {{"defect", r.mckean_singer_defect},
          {"t_min", r.mckean_singer_t_min},
          {"t_max", r.mckean_singer_t_max},
          {"betti", r.kernel_dims}};
}

}  // namespace

io::Json trace_json(const RunResult& r) {
  io::Json j = header(r);
  io::Json per = io::Json::array();
  for (std::size_t k = 0; k < r.samples.size(); ++k) {
    io::Json s = io::to_json(r.samples[k]);
    s["degree"] = k;
    per.push_back(s);
  }
  j["traces"] = per;
  j["mckean_singer"] = mckean_singer(r);
  return j;
}

io::Json fit_json(const RunResult& r) {
  io::Json j = header(r);
  j["template"] = io::to_json(r.tpl);
  io::Json per = io::Json::array();
  for (std::size_t k = 0; k < r.fits.size(); ++k) {
    io::Json f = io::to_json(r.fits[k]);
    f.erase("template");
    per.push_back({{"degree", k}, {"fit", f}});
  }
  j["fits"] = per;
  return j;
}

io::Json zeta_json(const RunResult& r) {
  io::Json j = header(r);
  j["pole_structure"] = io::to_json(phg::zeta_pole_structure(r.tpl));
  io::Json per = io::Json::array();
  for (const auto& z : r.report.per_degree) per.push_back(io::to_json(z));
  j["zeta"] = per;
  return j;
}

io::Json torsion_json(const RunResult& r) {
  io::Json j = header(r);
  j["template"] = io::to_json(r.tpl);
  j["pole_structure"] = io::to_json(phg::zeta_pole_structure(r.tpl));
  j["report"] = io::to_json(r.report);
  io::Json fits = io::Json::array();
  for (std::size_t k = 0; k < r.fits.size(); ++k) {
    io::Json f = io::to_json(r.fits[k]);
    f.erase("template");
    fits.push_back({{"degree", k}, {"fit", f}});
  }
  j["fits"] = fits;
  j["diagnostics"] = {{"mckean_singer", mckean_singer(r)}};
  return j;
}

}  // namespace torsionlab::pipeline
