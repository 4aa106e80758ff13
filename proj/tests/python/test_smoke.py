import math

import numpy as np
import pytest

import minkrad

DESK = {
    "N": 1,
    "R": 3,
    "lambda": 21.65,
    "weight": {"kind": "piecewise-constant", "breakpoints": [1, 2], "values": [-1, 1, -1]},
    "nonlinearity": {"kind": "power", "p": 2},
}


def test_phi_pair():
    for s in np.linspace(-0.99, 0.99, 41):
        assert minkrad.phi_inv(minkrad.phi(s)) == pytest.approx(s, abs=1e-14)


def test_desk_constants():
    b = minkrad.constants(DESK, estimate_bounds=False)
    assert b["provenance"]["lambda_star"] == "formula"
    assert b["lambda_star"] > 0


def test_figure1_small_solution_certifies_and_matches_shooting():
    p = minkrad.figure1_problem()
    sol = minkrad.solve(p, start_level=2.0, grid_cells=1000)
    assert sol["report"]["converged"]
    assert np.max(sol["u"]) == pytest.approx(2.3114, rel=1e-4)
    cert = minkrad.certify(p, sol["r"], sol["u"], sol["du"])
    assert cert["overall"]
    roots = minkrad.find_roots(p, 1.8, 2.2, samples=8, output_cells=200)
    assert len(roots) == 1
    assert roots[0] == pytest.approx(sol["u"][0], rel=1e-4)


def test_shot_from_zero_is_trivial():
    s = minkrad.shoot(minkrad.figure1_problem(), 0.0, output_cells=100)
    assert s["valid"] and s["defect"] == 0.0
    assert np.all(s["u"] == 0.0)


def test_sweep_and_errors():
    rows = minkrad.lambda_sweep(DESK, [21.65], grid_cells=600)
    assert rows[0]["n_solutions"] == 2
    with pytest.raises(ValueError):
        minkrad.constants({"N": 1})
    neg = dict(DESK, weight={"kind": "piecewise-constant", "breakpoints": [], "values": [-1]})
    with pytest.raises(RuntimeError, match="positivity"):
        minkrad.constants(neg)
    assert math.isfinite(minkrad.figure1_problem()["lambda"])
