import math

import numpy as np
import pytest

from flexramp.errors import ModelBuildError
from flexramp.model import EQ, GE, LE, LinearModel


def small_model() -> LinearModel:
    m = LinearModel(name="t")
    m.add_var("x", lb=0.0, ub=4.0, obj=1.0)
    m.add_var("y", lb=-1.0, ub=math.inf, obj=-2.0)
    m.add_var("b", lb=0.0, ub=1.0, integer=True)
    m.add_constr("r1[x]", [0, 1], [1.0, 1.0], LE, 5.0)
    m.add_constr("r2", [1], [3.0], GE, -3.0)
    m.add_constr("r3", [0, 2], [1.0, -1.0], EQ, 0.5)
    return m


def test_registry_lookup():
    m = small_model()
    assert m.nvars == 3 and m.ncons == 3
    assert m.var_index("y") == 1
    assert m.con_index("r2") == 1
    assert m.has_con("r1[x]") and not m.has_con("r9")
    assert m.con_sense(2) == EQ
    assert m.con_rhs(0) == 5.0
    cols, coefs = m.row(1)
    assert list(cols) == [1] and list(coefs) == [3.0]


def test_duplicate_names_rejected():
    m = small_model()
    with pytest.raises(ModelBuildError):
        m.add_var("x")
    with pytest.raises(ModelBuildError):
        m.add_constr("r1[x]", [0], [1.0], LE, 1.0)


def test_bad_rows_rejected():
    m = small_model()
    with pytest.raises(ModelBuildError):
        m.add_constr("bad-sense", [0], [1.0], "<", 1.0)
    with pytest.raises(ModelBuildError):
        m.add_constr("bad-col", [7], [1.0], LE, 1.0)
    with pytest.raises(ModelBuildError):
        m.add_constr("bad-shape", [0, 1], [1.0], LE, 1.0)


def test_to_arrays_roundtrip():
    m = small_model()
    arr = m.to_arrays()
    a = arr.a.toarray()
    assert a.shape == (3, 3)
    assert np.array_equal(a[0], [1.0, 1.0, 0.0])
    assert np.array_equal(a[2], [1.0, 0.0, -1.0])
    assert list(arr.senses) == [LE, GE, EQ]
    assert np.array_equal(arr.rhs, [5.0, -3.0, 0.5])
    assert np.array_equal(arr.integer, [False, False, True])
    assert np.array_equal(arr.obj, [1.0, -2.0, 0.0])
    assert arr.lb[1] == -1.0 and arr.ub[1] == math.inf


def test_empty_model_arrays():
    m = LinearModel()
    m.add_var("x")
    arr = m.to_arrays()
    assert arr.a.shape == (0, 1)


def test_fix_var_and_copy_independence():
    m = small_model()
    c = m.copy()
    c.fix_var(2, 1.0)
    c.set_obj(0, 9.0)
    assert m.var_bounds(2) == (0.0, 1.0)
    assert c.var_bounds(2) == (1.0, 1.0)
    assert m.to_arrays().obj[0] == 1.0
    assert c.to_arrays().obj[0] == 9.0
    # rows are shared immutably; adding to the copy leaves the original alone
    c.add_constr("extra", [0], [1.0], LE, 2.0)
    assert c.ncons == 4 and m.ncons == 3


def test_activity_and_objective():
    m = small_model()
    x = np.array([2.0, 1.0, 1.0])
    assert m.objective_value(x) == pytest.approx(2.0 - 2.0)
    assert np.allclose(m.row_activity(x), [3.0, 3.0, 1.0])


def test_lp_text_mentions_names():
    text = small_model().lp_text()
    assert "Minimize" in text and "General" in text
    assert "c_r1_x" in text and "x_b" in text
