import json
import math

import numpy as np
import pytest

import tailcause as tc


def test_version():
    assert tc.__version__ == "0.3.0"


def test_financial_order():
    rows = [[math.nan, .86, .90, .90], [.72, math.nan, .85, .87], [.72, .94, math.nan, .81], [.71, .94, .86, math.nan]]
    order = tc.ease(np.array(rows))
    assert list(order) == [0, 2, 3, 1]


def test_chain_oracle():
    scm = tc.Scm.from_edges(2, [(0, 1, 1.0)], alpha=1.0)
    g = tc.gamma_population(scm)
    assert g[1, 0] == pytest.approx(0.75)
    assert g[0, 1] == 1.0


def test_estimators_on_simulated_data():
    scm = tc.random_scm(4, 2.0, seed=3)
    data, names = tc.simulate(scm, "linear", 2000, 5)
    assert names == ["X1", "X2", "X3", "X4"]
    assert data.shape == (2000, 4)
    m = tc.gamma_matrix(data, kind="psi")
    assert m.shape == (4, 4)
    off = m[~np.eye(4, dtype=bool)]
    assert np.all((off >= 0) & (off <= 1))
    order = tc.ease(m)
    score = tc.score_order(scm, order)
    assert 0.0 <= score["violation_fraction"] <= 1.0


def test_perfect_dependence():
    x = np.arange(1.0, 101.0)
    data = np.column_stack([x, x])
    assert tc.gamma_estimate(data, 0, 1, k=10) == pytest.approx(0.955)
    assert tc.psi_estimate(data, 0, 1, k=10) == pytest.approx(0.90)


def test_errors_are_value_errors():
    with pytest.raises(ValueError):
        tc.resolve_k(100, k=0)
    with pytest.raises(tc.TailcauseError):
        tc.hill_tail_index(np.ones(10), 3)


def test_scm_json_roundtrip():
    scm = tc.random_scm(5, 1.5, seed=1)
    doc = scm.to_json()
    back = tc.Scm.from_json(doc)
    assert json.loads(back.to_json()) == json.loads(doc)
