#pragma once

// End-to-end runs on model spaces: fibre spectrum, radial Bessel spectrum,
// heat traces per form degree, fitted expansions, zeta data and torsion.

#include <optional>
#include <string>
#include <vector>

#include "torsionlab/conekernel.hpp"
#include "torsionlab/fiber.hpp"
#include "torsionlab/phg_index.hpp"
#include "torsionlab/serialize.hpp"
#include "torsionlab/zetator.hpp"

namespace torsionlab::pipeline {

struct ModelConfig {
  std::string model = "cone";   // cone | product
  std::string fiber = "circle"; // circle | torus
  double fiber_radius = 1.0;
  std::vector<double> fiber_periods;  // torus; defaults to 2 pi in each of 2 directions
  std::string base = "point";   // point | circle | torus
  double base_radius = 1.0;
  std::vector<double> base_periods;
  fiber::Convention convention = fiber::Convention::GeometricOracle;
  double nu_max = 0.0;      // 0: sqrt(lambda_max)
  double lambda_max = 0.0;  // 0: 40 / t_min
  double t_min = 1e-4;
  double t_max = 1e-1;
  int points = 40;
  bool even = true;
  std::string fit_order = "3/2";
  double split = 1.0;
  // Replaces the fibre by one radial mode of this order (scalar only).
  std::optional<double> single_nu;

  // Throws InvalidArgument / UnknownModel on inconsistent input.
  void validate() const;

  int fiber_dim() const;
  int base_dim() const;
  int dimension() const { return fiber_dim() + 1 + base_dim(); }
  double effective_lambda_max() const;
  double effective_nu_max() const;
  std::vector<double> fiber_period_list() const;
  std::vector<double> base_period_list() const;
  zeta::ModelDescriptor descriptor() const;
  phg::ExpansionTemplate expansion_template() const;
  // Form degrees the run covers: 0 for a single mode, 0..m otherwise.
  int top_degree() const;
};

io::Json to_json(const ModelConfig& config);

struct SpectrumStage {
  fiber::NuSpectrum nu;
  cone::ConeSpectrum cone;
};

SpectrumStage build_spectrum(const ModelConfig& config);

// Per-degree traces of the full model (product with the base when present).
std::vector<cone::TraceFunction> build_traces(const ModelConfig& config, const SpectrumStage& spectrum);

struct RunResult {
  ModelConfig config;
  phg::ExpansionTemplate tpl;
  std::vector<long> kernel_dims;
  std::vector<cone::TraceSamples> samples;
  std::vector<cone::FittedExpansion> fits;
  zeta::TorsionReport report;
  double mckean_singer_defect = 0.0;
  double mckean_singer_t_min = 0.05;
  double mckean_singer_t_max = 1.0;
};

enum class Stage { Trace, Fit, Zeta };

// Runs through the requested stage.  Later fields of RunResult stay empty.
RunResult run(const ModelConfig& config, Stage last = Stage::Zeta);

io::Json spectrum_json(const ModelConfig& config, const SpectrumStage& spectrum);
io::Json trace_json(const RunResult& result);
io::Json fit_json(const RunResult& result);
io::Json zeta_json(const RunResult& result);
io::Json torsion_json(const RunResult& result);

}  // namespace torsionlab::pipeline
