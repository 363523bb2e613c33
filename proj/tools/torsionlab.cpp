// torsionlab command-line front end.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "torsionlab/error.hpp"
#include "torsionlab/phg_index.hpp"
#include "torsionlab/pipeline.hpp"
#include "torsionlab/selftest.hpp"
#include "torsionlab/serialize.hpp"

using namespace torsionlab;
namespace fs = std::filesystem;

namespace {

struct ModelArgs {
  pipeline::ModelConfig config;
  std::string convention = "geometric-oracle";
  double single_nu = -1.0;
  std::string out;
  std::string format = "json";

  pipeline::ModelConfig resolve() const {
    auto c = config;
    c.convention = fiber::parse_convention(convention);
    if (single_nu >= 0) c.single_nu = single_nu;
    return c;
  }
};

void add_model_options(CLI::App* app, ModelArgs& a, bool with_format) {
  auto& c = a.config;
  app->set_config("--config", "", "TOML key = value file; flags given on the command line win");
  app->add_option("--model", c.model, "cone | product")->capture_default_str();
  app->add_option("--fiber", c.fiber, "circle | torus")->capture_default_str();
  app->add_option("--fiber-radius", c.fiber_radius, "radius of the circle fibre")->capture_default_str();
  app->add_option("--fiber-periods", c.fiber_periods, "periods of the torus fibre")->delimiter(',');
  app->add_option("--base", c.base, "point | circle | torus (product models)")->capture_default_str();
  app->add_option("--base-radius", c.base_radius, "radius of the circle base")->capture_default_str();
  app->add_option("--base-periods", c.base_periods, "periods of the torus base")->delimiter(',');
  app->add_option("--convention", a.convention, "geometric-oracle | paper-literal")->capture_default_str();
  app->add_option("--nu-max", c.nu_max, "largest radial order (default sqrt(lambda-max))");
  app->add_option("--lambda-max", c.lambda_max, "eigenvalue cutoff (default 40 / t-min)");
  app->add_option("--t-min", c.t_min, "smallest sample time")->capture_default_str();
  app->add_option("--t-max", c.t_max, "largest sample time")->capture_default_str();
  app->add_option("--points", c.points, "log-spaced sample count")->capture_default_str();
  app->add_flag("--even,!--no-even", c.even, "use the even expansion template")->capture_default_str();
  app->add_option("--fit-order", c.fit_order, "highest template exponent")->capture_default_str();
  app->add_option("--split", c.split, "Mellin split point")->capture_default_str();
  app->add_option("--single-nu", a.single_nu, "replace the fibre by one radial mode of this order");
  app->add_option("--out", a.out, "output directory (default: stdout)");
  if (with_format)
    app->add_option("--format", a.format, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
}

void emit(const std::string& text, const std::string& out_dir, const std::string& name) {
  if (out_dir.empty()) {
    std::cout << text;
    return;
  }
  io::write_atomic(fs::path(out_dir) / name, text);
}

std::string traces_csv(const pipeline::RunResult& r) {
  std::ostringstream os;
  os << "degree,t,value,tail_bound\n";
  for (std::size_t k = 0; k < r.samples.size(); ++k) {
    const auto& s = r.samples[k];
    for (std::size_t i = 0; i < s.size(); ++i)
      os << k << ',' << io::format_double(s.grid[i]) << ',' << io::format_double(s.values[i]) << ','
         << io::format_double(s.tail_bound[i]) << '\n';
  }
  return os.str();
}

int report_error(ErrorKind kind, const std::string& message) {
  std::cerr << io::dump(io::error_json(kind, message)) << '\n';
  return static_cast<int>(exit_code_for(kind));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral data, heat-trace expansions, zeta functions and analytic torsion of model edge spaces"};
  app.require_subcommand(1);

  int m = 0, b = 0;
  bool even = false, boundary = false;
  std::string cutoff = "3";
  auto* structure = app.add_subcommand("structure", "predicted heat-trace template and zeta poles");
  structure->add_option("--m", m, "total dimension")->required();
  structure->add_option("--b", b, "edge dimension")->required();
  structure->add_flag("--even", even, "even metric");
  structure->add_flag("--boundary", boundary, "include the series of a smooth boundary");
  structure->add_option("--cutoff", cutoff, "largest exponent listed")->capture_default_str();

  ModelArgs spectrum_args, trace_args, fit_args, zeta_args, torsion_args;
  auto* spectrum = app.add_subcommand("spectrum", "nu-spectrum of A and radial eigenvalue counts");
  add_model_options(spectrum, spectrum_args, false);
  auto* trace = app.add_subcommand("trace", "heat traces per form degree");
  add_model_options(trace, trace_args, true);
  auto* fit = app.add_subcommand("fit", "fitted small-time expansions per form degree");
  add_model_options(fit, fit_args, false);
  auto* zeta = app.add_subcommand("zeta", "zeta(0) and zeta'(0) per form degree");
  add_model_options(zeta, zeta_args, false);
  auto* torsion = app.add_subcommand("torsion", "analytic torsion; writes torsion.json and torsion.csv");
  add_model_options(torsion, torsion_args, false);
  torsion_args.out = ".";

  bool quick = false;
  std::string selftest_convention = "geometric-oracle";
  auto* selftest = app.add_subcommand("selftest", "closed-form oracle suite");
  selftest->add_flag("--quick", quick, "skip the slow checks");
  selftest->add_option("--convention", selftest_convention, "geometric-oracle | paper-literal")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return report_error(ErrorKind::InvalidArgument, e.what());
  }

  try {
    if (*structure) {
      const auto tpl = phg::heat_trace_structure(m, b, even, boundary, phg::parse_rational(cutoff));
      io::Json j{{"schema", io::kSchema},
                 {"template", io::to_json(tpl)},
                 {"zeta", io::to_json(phg::zeta_pole_structure(tpl))}};
      std::cout << io::dump(j) << '\n';
    } else if (*spectrum) {
      const auto c = spectrum_args.resolve();
      const auto s = pipeline::build_spectrum(c);
      emit(io::dump(pipeline::spectrum_json(c, s)) + "\n", spectrum_args.out, "spectrum.json");
    } else if (*trace) {
      const auto r = pipeline::run(trace_args.resolve(), pipeline::Stage::Trace);
      if (trace_args.format == "csv")
        emit(traces_csv(r), trace_args.out, "traces.csv");
      else
        emit(io::dump(pipeline::trace_json(r)) + "\n", trace_args.out, "traces.json");
    } else if (*fit) {
      const auto r = pipeline::run(fit_args.resolve(), pipeline::Stage::Fit);
      emit(io::dump(pipeline::fit_json(r)) + "\n", fit_args.out, "fits.json");
    } else if (*zeta) {
      const auto r = pipeline::run(zeta_args.resolve(), pipeline::Stage::Zeta);
      emit(io::dump(pipeline::zeta_json(r)) + "\n", zeta_args.out, "zeta.json");
    } else if (*torsion) {
      const auto c = torsion_args.resolve();
      c.validate();
      const fs::path dir = torsion_args.out.empty() ? fs::path(".") : fs::path(torsion_args.out);
      std::error_code ec;
      if (!fs::is_directory(dir, ec)) fail(ErrorKind::Io, "output directory does not exist: " + dir.string());
      const auto r = pipeline::run(c, pipeline::Stage::Zeta);
      io::write_atomic(dir / "torsion.json", io::dump(pipeline::torsion_json(r)) + "\n");
      io::write_atomic(dir / "torsion.csv", io::torsion_csv(r.report));
      const auto& rep = r.report;
      std::cout << "model " << rep.model << "\n"
                << "log_T " << io::format_double(rep.log_T) << " +- " << io::format_double(rep.log_T_error) << "\n"
                << "per_degree_regular " << (rep.per_degree_regular ? "true" : "false") << "\n"
                << "residues_cancel " << (rep.residues_cancel ? "true" : "false") << "\n"
                << "torsion_zeta_regular " << (rep.torsion_zeta_regular ? "true" : "false") << "\n"
                << "mckean_singer_defect " << io::format_double(r.mckean_singer_defect) << "\n";
    } else if (*selftest) {
      selftest::Options o;
      o.quick = quick;
      o.convention = fiber::parse_convention(selftest_convention);
      const auto checks = selftest::run(o);
      for (const auto& c : checks) {
        std::printf("%-14s %-28s %7.2fs  %s\n", selftest::to_string(c.status).c_str(), c.name.c_str(),
                    c.seconds, c.detail.c_str());
      }
      const bool ok = selftest::all_passed(checks);
      std::printf("%s\n", ok ? "all checks passed" : "some checks FAILED");
      return ok ? 0 : 1;
    }
  } catch (const Error& e) {
    return report_error(e.kind(), e.what());
  } catch (const std::exception& e) {
    return report_error(ErrorKind::InvalidArgument, e.what());
  }
  return 0;
}
