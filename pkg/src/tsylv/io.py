"""JSON problem and solution files.

A problem file looks like::

    {"family": "laplace", "dims": [2, 3], "complex": false,
     "coeffs": [[[1.0, 0.0], [0.0, 2.0]], ...],
     "rhs": [...]}

Coefficients are nested row-major lists, ``rhs`` is the column-major
vectorization of the tensor, and ``c_coeff`` is present for the ``gsylv``
family. With ``"complex": true`` every scalar is an ``[re, im]`` pair.
"""
import json

import numpy as np

from .problems import GSylvProblem, LaplaceProblem

__all__ = ["ProblemFileError", "problem_to_dict", "problem_from_dict",
           "read_problem", "write_problem", "solution_to_dict", "write_solution",
           "read_solution"]


class ProblemFileError(ValueError):
    """Malformed or inconsistent problem or solution file."""


def _encode(a, is_complex):
    a = np.asarray(a)
    if is_complex:
        return np.stack([a.real, a.imag], axis=-1).tolist()
    return a.tolist()


def _decode(obj, is_complex, shape=None):
    try:
        a = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ProblemFileError(f"non-numeric array data: {exc}") from None
    if is_complex:
        if a.ndim == 0 or a.shape[-1] != 2:
            raise ProblemFileError("complex data must be [re, im] pairs")
        a = a[..., 0] + 1j * a[..., 1]
    if shape is not None and a.shape != tuple(shape):
        raise ProblemFileError(f"array has shape {a.shape}, expected {tuple(shape)}")
    return a


def _is_complex(problem):
    arrays = list(problem.coeffs) + [problem.rhs]
    if problem.family == "gsylv":
        arrays.append(problem.c_coeff)
    return any(np.iscomplexobj(a) for a in arrays)


def problem_to_dict(problem):
    cplx = _is_complex(problem)
    out = {"family": problem.family, "dims": [int(n) for n in problem.dims],
           "complex": cplx,
           "coeffs": [_encode(A, cplx) for A in problem.coeffs]}
    if problem.family == "gsylv":
        out["c_coeff"] = _encode(problem.c_coeff, cplx)
    out["rhs"] = _encode(np.ravel(problem.rhs, order="F"), cplx)
    return out


def problem_from_dict(obj):
    if not isinstance(obj, dict):
        raise ProblemFileError("problem file must hold a JSON object")
    try:
        family = obj["family"]
        dims = [int(n) for n in obj["dims"]]
        coeffs = obj["coeffs"]
        rhs = obj["rhs"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ProblemFileError(f"missing or invalid field: {exc}") from None
    cplx = bool(obj.get("complex", False))
    if family not in ("laplace", "gsylv"):
        raise ProblemFileError(f"unknown family {family!r}")
    if len(coeffs) != len(dims):
        raise ProblemFileError(f"{len(coeffs)} coefficients for {len(dims)} modes")
    As = [_decode(A, cplx, (n, n)) for A, n in zip(coeffs, dims)]
    N = int(np.prod(dims))
    B = np.reshape(_decode(rhs, cplx, (N,)), dims, order="F")
    try:
        if family == "laplace":
            return LaplaceProblem(As, B)
        if "c_coeff" not in obj:
            raise ProblemFileError("gsylv problems need a c_coeff field")
        C = _decode(obj["c_coeff"], cplx, (dims[0], dims[0]))
        return GSylvProblem(As, C, B)
    except ValueError as exc:
        if isinstance(exc, ProblemFileError):
            raise
        raise ProblemFileError(str(exc)) from None


def _load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"{path}: invalid JSON ({exc})") from None


def read_problem(path):
    """Load a problem file; raises :class:`ProblemFileError` or ``OSError``."""
    return problem_from_dict(_load(path))


def write_problem(path, problem):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(problem_to_dict(problem), fh)
        fh.write("\n")


def solution_to_dict(problem, report, timings=True):
    """Problem envelope plus ``solution`` and a ``report`` sub-object.

    With ``timings=False`` the wall times are left out so that files from
    repeated runs compare byte for byte.
    """
    out = problem_to_dict(problem)
    X = report.solution
    out["solution"] = _encode(np.ravel(X, order="F"), bool(np.iscomplexobj(X)))
    out["solution_complex"] = bool(np.iscomplexobj(X))
    rep = {"residual": report.residual, "discarded_imag": report.discarded_imag,
           "strategy": report.strategy, "n_min": int(report.n_min),
           "arithmetic": report.arithmetic}
    if timings:
        rep["timings"] = dict(report.timings)
    out["report"] = rep
    return out


def write_solution(path, problem, report, timings=True):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(solution_to_dict(problem, report, timings), fh)
        fh.write("\n")


def read_solution(path):
    """Return ``(problem, solution, report_dict)`` from a solution file."""
    obj = _load(path)
    problem = problem_from_dict(obj)
    if "solution" not in obj:
        raise ProblemFileError("solution file lacks a solution field")
    N = int(np.prod(problem.dims))
    X = _decode(obj["solution"], bool(obj.get("solution_complex", False)), (N,))
    return problem, np.reshape(X, problem.dims, order="F"), obj.get("report", {})
