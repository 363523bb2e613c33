#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "torsionlab/error.hpp"
#include "torsionlab/fiber.hpp"

using namespace torsionlab;
using namespace torsionlab::fiber;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> expanded_mu2(const FiberSpectrum& s, int degree) {
  std::vector<double> out;
  for (const auto& e : s.entries)
    if (e.degree == degree)
      for (long i = 0; i < e.multiplicity; ++i) out.push_back(e.mu2);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> expanded_nu(const NuSpectrum& s) {
  std::vector<double> out;
  for (const auto& m : s.modes)
    for (long i = 0; i < m.multiplicity; ++i) out.push_back(m.nu);
  return out;
}

}  // namespace

TEST_SUITE("fiber") {
  TEST_CASE("circle Fourier modes") {
    const auto s = circle_spectrum(1.0, 3.0);
    const auto d0 = expanded_mu2(s, 0);
    const std::vector<double> want{0, 1, 1, 4, 4, 9, 9};
    REQUIRE(d0.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) CHECK(d0[i] == doctest::Approx(want[i]).epsilon(1e-14));
    CHECK(expanded_mu2(s, 1) == d0);

    const auto half = circle_spectrum(2.0, 1.0);
    const auto h0 = expanded_mu2(half, 0);
    REQUIRE(h0.size() > 1);
    CHECK(h0[1] == doctest::Approx(0.25).epsilon(1e-14));

    CHECK_THROWS_AS(circle_spectrum(0.0, 1.0), Error);
    CHECK_THROWS_AS(torus_spectrum({}, 1.0), Error);
  }

  TEST_CASE("torus forms: exact/coexact split and Betti numbers") {
    const auto t = torus_spectrum({kTwoPi, kTwoPi}, 2.0);
    CHECK(t.multiplicity(1, 1.0, FormType::Exact) == 4);
    CHECK(t.multiplicity(1, 1.0, FormType::Coexact) == 4);
    CHECK(t.multiplicity(0, 0.0, FormType::Harmonic) == 1);
    CHECK(t.multiplicity(1, 0.0, FormType::Harmonic) == 2);
    CHECK(t.multiplicity(2, 0.0, FormType::Harmonic) == 1);
    // d is an isomorphism from coexact (l-1)-forms onto exact l-forms.
    for (const auto& e : t.entries)
      if (e.type == FormType::Exact)
        CHECK(t.multiplicity(e.degree - 1, e.mu2, FormType::Coexact) == e.multiplicity);

    const auto c = circle_spectrum(1.0, 4.0);
    const auto as_torus = torus_spectrum({kTwoPi}, 4.0);
    CHECK(expanded_mu2(c, 0) == expanded_mu2(as_torus, 0));
    CHECK(expanded_mu2(c, 1) == expanded_mu2(as_torus, 1));
  }

  TEST_CASE("lattice frequencies are sorted by length") {
    const auto xi = lattice_frequencies({kTwoPi, 3.0}, 5.0);
    double prev = -1.0;
    for (const auto& v : xi) {
      const double n = v[0] * v[0] + v[1] * v[1];
      CHECK(n >= prev - 1e-12);
      CHECK(n <= 25.0 * (1 + 1e-12));
      prev = n;
    }
  }

  TEST_CASE("flat plane separation under the geometric convention") {
    const auto fs = circle_spectrum(1.0, required_fiber_mu(1, 0, Convention::GeometricOracle, 6.0));
    const auto s = a_spectrum(fs, 0, Convention::GeometricOracle, 6.0);
    const auto nu = expanded_nu(s);
    const std::vector<double> want{0, 1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 6, 6};
    REQUIRE(nu.size() == want.size());
    for (std::size_t i = 0; i < nu.size(); ++i) CHECK(nu[i] == doctest::Approx(want[i]).epsilon(1e-14));
    const auto& zero = s.modes.front();
    CHECK(zero.log_branch());
    CHECK(zero.indicial_roots().first == 0.5);
    CHECK(zero.indicial_roots().second == 0.5);
  }

  TEST_CASE("paper-literal constants shift the scalar orders") {
    const auto fs = circle_spectrum(1.0, 10.0);
    const auto s = a_spectrum(fs, 0, Convention::PaperLiteral, 3.0);
    CHECK(s.modes.front().nu == doctest::Approx(1.0));
    CHECK(diagonal_constants(1, 0, Convention::PaperLiteral).c2 == -1.0);
    CHECK(diagonal_constants(1, 0, Convention::GeometricOracle).c2 == 0.0);
    CHECK_THROWS_AS(a_spectrum(fs, 1, Convention::PaperLiteral, 3.0), Error);
  }

  TEST_CASE("A is nonnegative and the indicial roots pair up") {
    for (const auto& periods : {std::vector<double>{kTwoPi}, std::vector<double>{2 * kTwoPi},
                                std::vector<double>{kTwoPi, kTwoPi}}) {
      const int f = static_cast<int>(periods.size());
      const auto fs = torus_spectrum(periods, 12.0);
      for (int p = 0; p <= f + 1; ++p) {
        for (const auto& e : a_block_eigenvalues(fs, p, Convention::GeometricOracle)) CHECK(e.nu2 >= -1e-12);
        for (const auto& m : a_spectrum(fs, p, Convention::GeometricOracle, 8.0).modes) {
          const auto [lo, hi] = m.indicial_roots();
          CHECK(lo + hi == doctest::Approx(1.0).epsilon(1e-14));
          CHECK(m.nu >= 0.0);
        }
      }
    }
  }

  TEST_CASE("closed form agrees with the dense operator") {
    for (auto conv : {Convention::GeometricOracle, Convention::PaperLiteral}) {
      for (const auto& periods : {std::vector<double>{kTwoPi}, std::vector<double>{kTwoPi, kTwoPi}}) {
        const int f = static_cast<int>(periods.size());
        for (int p = 0; p <= f + 1; ++p) {
          const auto dense = dense_a_eigenvalues(periods, p, conv, 32);
          const auto fs = torus_spectrum(periods, std::sqrt(dense.shell_mu2) + 1e-9);
          std::vector<double> closed;
          for (const auto& e : a_block_eigenvalues(fs, p, conv))
            for (long i = 0; i < e.multiplicity; ++i) closed.push_back(e.nu2);
          std::sort(closed.begin(), closed.end());
          REQUIRE(closed.size() == dense.nu2.size());
          for (std::size_t i = 0; i < closed.size(); ++i) CHECK(std::abs(closed[i] - dense.nu2[i]) < 1e-9);
        }
      }
    }
  }

  TEST_CASE("Weyl growth of the nu count") {
    const auto fs = circle_spectrum(1.0, required_fiber_mu(1, 0, Convention::GeometricOracle, 40.0));
    const auto s = a_spectrum(fs, 0, Convention::GeometricOracle, 40.0);
    // Fibre count below mu is 2 mu + 1; nu = mu here.
    const double n = static_cast<double>(s.count());
    CHECK(n >= 0.5 * 81);
    CHECK(n <= 2.0 * 81);
  }

  TEST_CASE("Gauss-Bonnet pairing of even and odd degrees") {
    const auto conv = Convention::GeometricOracle;
    const auto fs = circle_spectrum(1.0, required_fiber_mu(1, 1, conv, 10.0) + 1);
    const auto even = merge({a_spectrum(fs, 0, conv, 10.0), a_spectrum(fs, 2, conv, 10.0)});
    const auto odd = a_spectrum(fs, 1, conv, 10.0);
    CHECK(gauss_bonnet_consistency(even, odd, 1e-9));

    auto bad = even;
    bad.modes[3].nu += 0.5;
    CHECK_FALSE(gauss_bonnet_consistency(bad, odd, 1e-9));

    CHECK_THROWS_AS(gauss_bonnet_consistency(NuSpectrum{}, NuSpectrum{}, 1e-9), Error);

    const auto ts = torus_spectrum({kTwoPi, kTwoPi}, 12.0);
    const auto te = merge({a_spectrum(ts, 0, conv, 10.0), a_spectrum(ts, 2, conv, 10.0)});
    const auto to = merge({a_spectrum(ts, 1, conv, 10.0), a_spectrum(ts, 3, conv, 10.0)});
    CHECK(gauss_bonnet_consistency(te, to, 1e-9));
  }

  TEST_CASE("incomplete fibre spectrum is refused") {
    const auto fs = circle_spectrum(1.0, 2.0);
    CHECK_THROWS_AS(a_spectrum(fs, 0, Convention::GeometricOracle, 10.0), Error);
  }
}
