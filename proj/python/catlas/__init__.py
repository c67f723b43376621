"""Python bindings for the catlas core library."""

import json

from ._catlas import (
    CatlasError,
    cup_length_projective,
    cup_length_sphere,
    cup_length_torus,
    hamiltonian_field,
    psi_residual,
    schema_version,
)
from . import _catlas

__all__ = [
    "CatlasError",
    "bounds",
    "cup_length_projective",
    "cup_length_sphere",
    "cup_length_torus",
    "foliation",
    "hamiltonian_field",
    "psi_residual",
    "schema_version",
    "separation",
]


def bounds(descriptor):
    """Bounds on cat, B and C for a descriptor given as a dict."""
    return json.loads(_catlas.bounds_json(json.dumps(descriptor)))


def foliation(path):
    """Analysis report of a foliation fixture file."""
    return json.loads(_catlas.foliation_json(str(path)))


def separation(d, s, color, lo, hi):
    """Same-color separation report of the brick cover in the window [lo, hi]^d."""
    return json.loads(_catlas.separation_json(d, str(s), color, str(lo), str(hi)))
