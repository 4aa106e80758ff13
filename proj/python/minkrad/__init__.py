"""Positive radial solutions of Neumann problems with Minkowski curvature."""

import json as _json

from . import _core
from ._core import phi, phi_inv

__all__ = [
    "phi",
    "phi_inv",
    "figure1_problem",
    "constants",
    "solve",
    "find_two_solutions",
    "certify",
    "shoot",
    "find_roots",
    "lambda_sweep",
]


def _text(problem):
    return problem if isinstance(problem, str) else _json.dumps(problem)


def figure1_problem():
    return _json.loads(_core.figure1_problem())


def constants(problem, estimate_bounds=True, grid_cells=2000):
    return _json.loads(_core.constants(_text(problem), estimate_bounds, grid_cells))


def solve(problem, start_level, grid_cells=2000, tol=1e-10):
    out = _core.solve(_text(problem), start_level, grid_cells, tol)
    out["report"] = _json.loads(out["report"])
    return out


def find_two_solutions(problem, grid_cells=2000):
    out = _core.find_two_solutions(_text(problem), grid_cells)
    out["constants"] = _json.loads(out["constants"])
    for s in out["solutions"]:
        s["certificate"] = _json.loads(s["certificate"])
    return out


def certify(problem, r, u, du, interpolated=False):
    return _json.loads(_core.certify(_text(problem), list(r), list(u), list(du), interpolated))


def shoot(problem, c, output_cells=2000):
    return _core.shoot(_text(problem), c, output_cells)


def find_roots(problem, lo, hi, samples=64, output_cells=2000):
    return _core.find_roots(_text(problem), lo, hi, samples, output_cells)


def lambda_sweep(problem, lambdas, grid_cells=2000):
    return _core.lambda_sweep(_text(problem), list(lambdas), grid_cells)
