#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "torsionlab/conekernel.hpp"
#include "torsionlab/error.hpp"
#include "torsionlab/zetator.hpp"

using namespace torsionlab;
using namespace torsionlab::zeta;
using phg::Rational;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

cone::TraceFunction levels(std::vector<double> lambdas, double zero_modes = 0.0) {
  std::vector<cone::LevelSet::Group> g{{1.0, std::make_shared<const std::vector<double>>(std::move(lambdas))}};
  return cone::TraceFunction(std::make_shared<cone::LevelSet>(std::move(g), zero_modes, kInf, 1.0));
}

phg::ExpansionTemplate integer_powers(int top) {
  phg::ExpansionTemplate tpl;
  for (int k = 0; k <= top; ++k) tpl.terms.push_back({Rational(k), false, phg::TermSource::Boundary});
  return tpl;
}

ZetaData run(const cone::TraceFunction& tr, const phg::ExpansionTemplate& tpl, long ker,
             ZetaOptions o = {}) {
  const auto s = tr.sample(cone::log_grid(1e-4, 1e-1, 40));
  return zeta_near_zero(s, cone::fit_expansion(s, tpl), ker, tr, 0, o);
}

struct Toy {
  cone::TraceFunction trace;
  cone::TraceSamples samples;
  cone::FittedExpansion fit;
};

const Toy& toy() {
  static const Toy t = [] {
    fiber::NuSpectrum nu;
    nu.cutoff = kInf;
    nu.modes.push_back({0.5, 1, 0, fiber::BlockKind::HarmonicMu, 0.0});
    Toy out;
    out.trace = cone::cone_trace_function(cone::build_cone_spectrum(nu, 4e5, 0.5), 0);
    out.samples = out.trace.sample(cone::log_grid(1e-4, 1e-1, 40));
    out.fit = cone::fit_expansion(out.samples, phg::heat_trace_structure(1, 0, true, true, Rational(3, 2)));
    return out;
  }();
  return t;
}

ZetaData with(int degree, double zp, double residue = 0.0) {
  ZetaData z;
  z.degree = degree;
  z.zeta_prime0 = zp;
  z.residue_at_zero = residue;
  return z;
}

}  // namespace

TEST_SUITE("zetator") {
  TEST_CASE("single eigenvalue: zeta(s) = lambda^-s") {
    const auto one = run(levels({1.0}), integer_powers(5), 0);
    CHECK(std::abs(one.zeta0 - 1.0) < 1e-10);
    CHECK(std::abs(one.zeta_prime0) < 1e-8);

    const auto two = run(levels({2.0}), integer_powers(5), 0);
    CHECK(std::abs(two.zeta_prime0 + std::log(2.0)) < 1e-8);

    // Scaling the operator by c multiplies zeta by c^-s.
    const auto both = run(levels({1.0, 3.0}), integer_powers(5), 0);
    const auto scaled = run(levels({2.0, 6.0}), integer_powers(5), 0);
    CHECK(std::abs(scaled.zeta_prime0 - (both.zeta_prime0 - both.zeta0 * std::log(2.0))) < 1e-8);
    CHECK(std::abs(both.zeta_prime0 + std::log(3.0)) < 1e-8);
  }

  TEST_CASE("half-order toy: zeta values and the pole at 1/2") {
    const auto z = zeta_near_zero(toy().samples, toy().fit, 0, toy().trace);
    CHECK(std::abs(z.zeta0 + 0.5) < 1e-6);
    CHECK(std::abs(z.zeta_prime0 + std::log(2.0)) < 1e-5);
    CHECK(z.zeta_prime0_error < 1e-4);
    CHECK(std::abs(z.residue_at_zero) < 1e-8);
    bool found = false;
    for (const auto& p : z.poles)
      if (p.location == Rational(1, 2)) {
        found = true;
        CHECK(std::abs(p.residue - 0.5 / std::sqrt(kPi)) < 1e-6);
      }
    CHECK(found);
  }

  TEST_CASE("the split point does not change the answer") {
    for (double split : {0.3, 2.0}) {
      ZetaOptions o;
      o.split = split;
      const auto z = zeta_near_zero(toy().samples, toy().fit, 0, toy().trace, 0, o);
      CHECK(std::abs(z.zeta_prime0 + std::log(2.0)) < 1e-5);
      CHECK(z.diagnostics.split == split);
    }
  }

  TEST_CASE("circle of length 2 pi: zeta = 2 zeta_R(2s)") {
    const auto tr = cone::circle_traces(1.0, 4e5)[0];
    phg::ExpansionTemplate tpl;
    tpl.terms = {{Rational(-1, 2), false, phg::TermSource::TemporalDiagonal},
                 {Rational(0), false, phg::TermSource::TemporalDiagonal},
                 {Rational(1, 2), false, phg::TermSource::TemporalDiagonal}};
    const auto z = run(tr, tpl, 1);
    CHECK(std::abs(z.zeta0_minus_kernel + 1.0) < 1e-8);
    CHECK(std::abs(z.zeta_prime0 + 2.0 * std::log(2 * kPi)) < 1e-7);
    CHECK(z.kernel_dim == 1);
  }

  TEST_CASE("refusals") {
    const auto tr = levels({1.0});
    const auto s = tr.sample(cone::log_grid(1e-4, 1e-1, 40));
    phg::ExpansionTemplate poor;
    poor.terms = {{Rational(2), false, phg::TermSource::Boundary}};
    CHECK_THROWS_AS(zeta_near_zero(s, cone::fit_expansion(s, poor), 0, tr), Error);
    try {
      zeta_near_zero(s, cone::fit_expansion(s, poor), 0, tr);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::FitResidualTooLarge);
    }

    // Zero modes only: nothing bounds the large-t integral.
    const auto flat = cone::TraceFunction(std::make_shared<cone::LevelSet>(
        std::vector<cone::LevelSet::Group>{}, 1.0, kInf, 1.0));
    const auto fs = flat.sample(cone::log_grid(1e-4, 1e-1, 40));
    try {
      zeta_near_zero(fs, cone::fit_expansion(fs, integer_powers(2)), 1, flat);
      FAIL("expected DecayRateUnknown");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DecayRateUnknown);
    }
  }

  TEST_CASE("torsion assembly") {
    const auto zero = torsion_assemble({with(0, 0), with(1, 0), with(2, 0)}, 2);
    CHECK(zero.log_T == 0.0);
    CHECK(zero.per_degree_regular);

    const auto r = torsion_assemble({with(2, 0.7), with(0, 0.3), with(1, -1.1)}, 2, "x");
    CHECK(r.log_T == doctest::Approx(0.5 * (1.1 + 2 * 0.7)));
    REQUIRE(r.per_degree.size() == 3);
    CHECK(r.per_degree[1].degree == 1);

    // Weights (-1)^k k / 2.
    const auto d = torsion_assemble({with(0, 0.4), with(1, -0.9), with(2, -0.9), with(3, 0.4)}, 3);
    CHECK(std::abs(d.log_T - 0.5 * (0.9 - 1.8 - 1.2)) < 1e-15);

    const auto res = torsion_assemble({with(0, 0, 0.2), with(1, 0, 0.4), with(2, 0, 0.2)}, 2);
    CHECK_FALSE(res.per_degree_regular);
    CHECK(res.residues_cancel);
    CHECK(res.torsion_zeta_regular);
    const auto nc = torsion_assemble({with(0, 0, 0.2), with(1, 0, 0.1), with(2, 0, 0.2)}, 2);
    CHECK_FALSE(nc.residues_cancel);
    CHECK_FALSE(nc.torsion_zeta_regular);

    try {
      torsion_assemble({with(0, 0), with(2, 0)}, 2);
      FAIL("expected MissingDegree");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::MissingDegree);
    }
    CHECK_THROWS_AS(torsion_assemble({with(0, 0), with(0, 0), with(1, 0)}, 1), Error);
    CHECK_THROWS_AS(torsion_assemble({with(4, 0)}, 2), Error);
  }

  TEST_CASE("model descriptors and kernel dimensions") {
    CHECK(kernel_dimension(parse_model_descriptor("torus:2")) == std::vector<long>{1, 2, 1});
    CHECK(kernel_dimension(parse_model_descriptor("circle*cone:1")) == std::vector<long>{0, 0, 0, 0});
    CHECK(kernel_dimension(parse_model_descriptor("circle*circle*point")) == std::vector<long>{1, 2, 1});
    CHECK(kernel_dimension(parse_model_descriptor("torus:3")) == std::vector<long>{1, 3, 3, 1});
    const auto m = parse_model_descriptor(" torus:2 * cone:2 ");
    CHECK(m.dimension() == 5);
    CHECK(parse_model_descriptor(to_string(m)).dimension() == 5);
    for (const char* bad : {"", "sphere", "torus:0", "circle:2", "cone:x"}) {
      try {
        parse_model_descriptor(bad);
        FAIL("accepted " << bad);
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownModel);
      }
    }
  }
}
