"""Jackson-type approximation estimates on concrete spectral models.

The package works in coefficient space: a vector of a Hilbert space is
represented by its coordinates in an ordered eigenbasis of a non-negative
operator ``L``, and each model supplies a handful of one-parameter unitary
groups acting on those coordinates.
"""

from .core import (
    BasisMismatchError,
    Coeffs,
    ModulusGrid,
    ResourceBudgetError,
    SpectralModel,
    apply_L_power,
    best_approx_error,
    k2_functional,
    omega_modulus,
    pw_project,
    schrodinger_modulus,
    schrodinger_profile,
    sobolev_graph_norm,
)
from .models import (
    CircleModel,
    HermiteModel,
    SphereModel,
    TorusModel,
    build_circle,
    build_hermite,
    build_sphere,
    build_torus,
)

__version__ = "0.1.0"

__all__ = [
    "BasisMismatchError",
    "CircleModel",
    "Coeffs",
    "HermiteModel",
    "ModulusGrid",
    "ResourceBudgetError",
    "SpectralModel",
    "SphereModel",
    "TorusModel",
    "apply_L_power",
    "best_approx_error",
    "build_circle",
    "build_hermite",
    "build_sphere",
    "build_torus",
    "k2_functional",
    "omega_modulus",
    "pw_project",
    "schrodinger_modulus",
    "schrodinger_profile",
    "sobolev_graph_norm",
]
