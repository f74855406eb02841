"""Problem containers, solver configuration and solve reports."""
from dataclasses import dataclass, field

import numpy as np

from .sylvester import DEFAULT_BASE_NMIN

__all__ = ["LaplaceProblem", "GSylvProblem", "SolverConfig", "SolveReport",
           "default_nmin", "STRATEGIES", "ARITHMETICS"]

STRATEGIES = ("recursion_only", "merge")
ARITHMETICS = ("complex_triangular", "real_quasitriangular")

# best cutoffs observed for the two families, keyed by (strategy, d)
_LAPLACE_NMIN = {"recursion_only": {3: 7, 4: 3, 5: 3},
                 "merge": {3: 26, 4: 18, 5: 14}}
_GSYLV_NMIN = {"recursion_only": {3: 8, 4: 6},
               "merge": {3: 15, 4: 13}}


def default_nmin(family, strategy, d):
    """Default recursion cutoff for a problem family, strategy and order."""
    if d <= 2:
        return DEFAULT_BASE_NMIN
    table = {"laplace": _LAPLACE_NMIN, "gsylv": _GSYLV_NMIN}[family][strategy]
    return table[min(d, max(table))]


def _check_coeffs(coeffs, dims):
    if len(coeffs) != len(dims):
        raise ValueError(
            f"{len(coeffs)} coefficients for a tensor of order {len(dims)}")
    for mu, (A, n) in enumerate(zip(coeffs, dims)):
        if A.shape != (n, n):
            raise ValueError(
                f"coefficient {mu} has shape {A.shape}, expected ({n}, {n})")


@dataclass
class LaplaceProblem:
    """``X x_1 A_1 + X x_2 A_2 + ... + X x_d A_d = B``."""
    coeffs: list
    rhs: np.ndarray

    def __post_init__(self):
        self.coeffs = [np.asarray(A) for A in self.coeffs]
        self.rhs = np.asfortranarray(self.rhs)
        if self.rhs.ndim < 2:
            raise ValueError("Laplace-like problems need order d >= 2")
        _check_coeffs(self.coeffs, self.rhs.shape)

    @property
    def dims(self):
        return self.rhs.shape

    @property
    def family(self):
        return "laplace"


@dataclass
class GSylvProblem:
    """``X x_1 A_1 + X x_1 C x_2 A_2 ... x_d A_d = B``."""
    coeffs: list
    c_coeff: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        self.coeffs = [np.asarray(A) for A in self.coeffs]
        self.c_coeff = np.asarray(self.c_coeff)
        self.rhs = np.asfortranarray(self.rhs)
        if self.rhs.ndim < 2:
            raise ValueError("generalized Sylvester problems need order d >= 2")
        _check_coeffs(self.coeffs, self.rhs.shape)
        if self.c_coeff.shape != self.coeffs[0].shape:
            raise ValueError(
                f"C has shape {self.c_coeff.shape}, "
                f"expected {self.coeffs[0].shape}")

    @property
    def dims(self):
        return self.rhs.shape

    @property
    def family(self):
        return "gsylv"


@dataclass(frozen=True)
class SolverConfig:
    """Options shared by :func:`solve_laplace` and :func:`solve_gsylv`.

    ``n_min=None`` selects the per-family default from :func:`default_nmin`;
    ``singularity_tol=None`` selects a norm-scaled multiple of the unit
    roundoff. `base_n_min` is the cutoff of the two-dimensional Sylvester
    solver called once dimensions have been merged down to a matrix equation.
    """
    n_min: int | None = None
    strategy: str = "merge"
    arithmetic: str = "complex_triangular"
    singularity_tol: float | None = None
    base_n_min: int = DEFAULT_BASE_NMIN

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.arithmetic not in ARITHMETICS:
            raise ValueError(f"unknown arithmetic {self.arithmetic!r}")
        if self.n_min is not None and self.n_min < 2:
            raise ValueError("n_min must be at least 2")
        if self.base_n_min < 1:
            raise ValueError("base_n_min must be at least 1")
        if self.strategy == "merge" and self.arithmetic != "complex_triangular":
            raise ValueError("the merge strategy requires complex_triangular arithmetic")

    def resolve_nmin(self, family, d):
        if self.n_min is not None:
            return self.n_min
        return default_nmin(family, self.strategy, d)


@dataclass
class SolveReport:
    solution: np.ndarray
    residual: float
    discarded_imag: float = 0.0
    timings: dict = field(default_factory=dict)
    strategy: str = ""
    n_min: int = 0
    arithmetic: str = ""
