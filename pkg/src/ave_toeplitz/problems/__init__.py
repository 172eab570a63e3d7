from .examples import (
    build_example1_problem,
    build_example2_problem,
    example1,
    exact_solution,
    fractional_matrix,
    grunwald_coeffs,
    rhs_from_solution,
)

__all__ = [
    "build_example1_problem",
    "build_example2_problem",
    "example1",
    "exact_solution",
    "fractional_matrix",
    "grunwald_coeffs",
    "rhs_from_solution",
]
