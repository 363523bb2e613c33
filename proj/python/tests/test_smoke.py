import math

import pytest

import torsionlab as tl


def test_bessel_half_order_closed_form():
    for z in (1e-3, 0.5, 1.0, 7.0, 30.0):
        exact = math.sqrt(2 / (math.pi * z)) * math.sinh(z)
        assert tl.bessel_i(0.5, z) == pytest.approx(exact, rel=1e-12)


def test_scaled_bessel_has_no_overflow():
    v = tl.bessel_i(0.0, 700.0, scaled=True)
    assert 0 < v < 1


def test_half_order_zeros_are_multiples_of_pi():
    zeros = tl.bessel_j_zeros(0.5, (10.5 * math.pi) ** 2)
    assert len(zeros) == 10
    for k, z in enumerate(zeros, start=1):
        assert z == pytest.approx(k * math.pi, rel=1e-12)


def test_kernel_matches_images():
    t, x, y = 0.1, 0.7, 1.3
    images = (math.exp(-(x - y) ** 2 / (4 * t)) - math.exp(-(x + y) ** 2 / (4 * t))) / math.sqrt(
        4 * math.pi * t
    )
    assert tl.cone_heat_kernel(0.5, t, x, y) == pytest.approx(images, rel=1e-10)


def test_structure_reports_template_and_poles():
    s = tl.structure(3, 1, even=True)
    assert s["schema"] == "torsionlab/1"
    logs = {t["exp"] for t in s["template"]["terms"] if t["log"]}
    assert "-1/2" in logs
    assert s["zeta"]["regular_at_zero"] is True
    assert s["zeta"]["has_t0_term"] is False


def test_invalid_dimensions_raise():
    with pytest.raises(tl.TorsionlabError) as info:
        tl.structure(2, 3)
    assert tl.error_kind(info.value) == "InvalidDimensions"


def test_flat_plane_orders():
    modes = tl.nu_spectrum([2 * math.pi], 0, "geometric-oracle", 5.0)
    assert [(round(nu, 12), mult) for nu, mult in modes] == [(0.0, 1)] + [(float(k), 2) for k in range(1, 6)]


def test_dense_operator_is_sorted():
    ev = tl.dense_a_eigenvalues([2 * math.pi], 1)
    assert ev == sorted(ev)


def test_single_mode_determinant_is_two():
    r = tl.torsion(single_nu=0.5)
    z = r["report"]["per_degree"][0]
    assert z["zeta0"] == pytest.approx(-0.5, abs=1e-6)
    assert z["zeta_prime0"] == pytest.approx(-math.log(2), abs=1e-5)
    assert abs(z["zeta_prime0"] + math.log(2)) <= z["zeta_prime0_error"] + 1e-12


def test_unknown_option_rejected():
    with pytest.raises(tl.TorsionlabError):
        tl.trace(colour="blue")
