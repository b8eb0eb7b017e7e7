"""Finite element spaces and exact assembly on triangle meshes."""

from .assembly import Geometry, apply_dirichlet, assemble_form, local_matrices, rayleigh
from .quadrature import edge_quadrature, quadrature
from .spaces import DofSpace

__all__ = [
    "DofSpace",
    "Geometry",
    "apply_dirichlet",
    "assemble_form",
    "edge_quadrature",
    "local_matrices",
    "quadrature",
    "rayleigh",
]
