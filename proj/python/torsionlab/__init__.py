"""Python interface to the torsionlab native core.

Scalar numerics are returned as floats and lists; pipeline results come back
as the same JSON documents the command-line tool writes, parsed into dicts.
"""

import json

from . import _core
from ._core import (
    TorsionlabError,
    bessel_i,
    bessel_j,
    bessel_j_zeros,
    cone_heat_kernel,
    dense_a_eigenvalues,
    nu_spectrum,
)

__all__ = [
    "TorsionlabError",
    "bessel_i",
    "bessel_j",
    "bessel_j_zeros",
    "cone_heat_kernel",
    "dense_a_eigenvalues",
    "nu_spectrum",
    "structure",
    "trace",
    "fit",
    "torsion",
    "error_kind",
]


def structure(m, b, even=False, boundary=False, cutoff="3"):
    """Predicted heat-trace template and zeta pole structure."""
    return json.loads(_core.structure_json(m, b, even, boundary, str(cutoff)))


def trace(**config):
    """Heat-trace samples per form degree for a model configuration."""
    return json.loads(_core.trace_json(config))


def fit(**config):
    """Fitted small-time expansions per form degree."""
    return json.loads(_core.fit_json(config))


def torsion(**config):
    """Full run: fits, zeta data per degree and the torsion report."""
    return json.loads(_core.torsion_json(config))


def error_kind(exc):
    """Error kind name carried by a TorsionlabError."""
    return str(exc).split(":", 1)[0]
