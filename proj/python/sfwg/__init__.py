"""Stabilizer-free weak Galerkin solver for u_t + biharmonic(u) = f."""

from ._core import (
    Mesh,
    convergence_h,
    convergence_tau,
    quad_mesh,
    read_mesh,
    selftest,
    triangle_mesh,
    weak_laplacian_exactness_error,
)

__all__ = [
    "Mesh",
    "convergence_h",
    "convergence_tau",
    "quad_mesh",
    "read_mesh",
    "selftest",
    "triangle_mesh",
    "weak_laplacian_exactness_error",
]
