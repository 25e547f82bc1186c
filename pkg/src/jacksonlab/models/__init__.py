from .hermite import HermiteModel, build_hermite, hermite_apply, hermite_generator
from .sphere import SphereModel, build_sphere, sphere_rotate
from .torus import CircleModel, TorusModel, build_circle, build_torus
from .wigner import WignerBlock, wigner_d

__all__ = [
    "CircleModel",
    "HermiteModel",
    "SphereModel",
    "TorusModel",
    "WignerBlock",
    "build_circle",
    "build_hermite",
    "build_sphere",
    "build_torus",
    "hermite_apply",
    "hermite_generator",
    "sphere_rotate",
    "wigner_d",
]
