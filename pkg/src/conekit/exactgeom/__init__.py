"""Exact rational linear algebra and polyhedral geometry."""

from .linalg import coordinates, image_basis, image_kernel_basis, in_span, kernel_basis, left_kernel, rank
from .lp import LinearSystem, feasible, min_cost_solution, nonnegative_solution
from .polyhedra import (
    BallRep,
    ConeRep,
    conic_member,
    conic_witness,
    dual_cone,
    Facets,
    extreme_filter,
    extreme_filter_facets,
    extreme_filter_lp,
    facets,
    hull_member,
    hull_witness,
    is_pointed,
    lineality_witness,
    polar_ball,
    sign_feasible,
    sign_witness,
    span_dim,
)
from .rational import Matrix, Vector, frac, mat, vec

__all__ = [
    "BallRep", "ConeRep", "Facets", "LinearSystem", "Matrix", "Vector",
    "conic_member", "conic_witness", "coordinates", "dual_cone", "extreme_filter",
    "extreme_filter_facets", "extreme_filter_lp", "facets",
    "feasible", "frac", "hull_member", "hull_witness", "image_basis",
    "image_kernel_basis", "in_span", "is_pointed", "kernel_basis", "left_kernel",
    "lineality_witness", "mat", "min_cost_solution", "nonnegative_solution", "polar_ball", "rank",
    "sign_feasible", "sign_witness", "span_dim", "vec",
]
