import math

import numpy as np
import pytest
import sympy as sp

from linelab import kernels
from linelab.kernels import compiled_backend, python_backend

from oracles import bump_value

needs_compiled = pytest.mark.skipif(compiled_backend is None, reason="compiled extension not built")
CAP = 1e7


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")
    assert python_backend.BACKEND == "python"


@needs_compiled
@pytest.mark.parametrize(
    "name,args",
    [
        ("phi_array", (0.0, 1.0, 0.25, 3.0)),
        ("dphi_array", (0.0, 1.0, 0.25, 3.0)),
        ("bump_array", (-1.0, 1.0)),
        ("bump_d_array", (-1.0, 1.0)),
        ("bump_inv_array", (-1.0, 1.0)),
        ("stage_array", (1, 4, 1, 1.0, CAP, False)),
        ("stage_array", (3, 4, -2, 1.0, CAP, False)),
        ("stage_d_array", (2, 3, 1, 1.0, CAP, False)),
        ("stage_disp_array", (4, 4, 3, 1.5, CAP, False)),
    ],
)
def test_backends_agree(name, args):
    xs = np.random.default_rng(3).uniform(-4.5, 4.5, 4000)
    a = getattr(python_backend, name)(*args, xs)
    b = getattr(compiled_backend, name)(*args, xs)
    np.testing.assert_allclose(a, b, rtol=1e-13, atol=1e-14)


@needs_compiled
def test_locate_agrees():
    for x in np.random.default_rng(4).uniform(-3, 3, 500):
        assert python_backend.locate(3, float(x), 1.0, CAP) == compiled_backend.locate(3, float(x), 1.0, CAP)


def test_bump_matches_closed_form_and_sympy():
    x = sp.symbols("x")
    f = x + sp.exp(-1 / (x + 1) - 1 / (1 - x))
    assert python_backend.bump(-1.0, 1.0, 0.0) == pytest.approx(math.exp(-2), rel=1e-15)
    assert python_backend.bump(-1.0, 1.0, 0.0) == pytest.approx(0.135335283236613, rel=1e-12)
    for x0 in (-0.7, -0.2, 0.3, 0.85):
        assert python_backend.bump(-1.0, 1.0, x0) == pytest.approx(bump_value(x0), rel=1e-14)
        d = float(sp.diff(f, x).subs(x, x0))
        assert kernels.K.bump_d(-1.0, 1.0, x0) == pytest.approx(d, rel=1e-12)


def test_bump_is_identity_outside():
    for x0 in (-3.0, -1.0, 1.0, 2.5):
        assert python_backend.bump(-1.0, 1.0, x0) == x0


def test_chart_map_endpoints():
    K = kernels.K
    assert K.phi(0.0, 1.0, 2.0, 5.0, 0.0) == pytest.approx(2.0)
    assert K.phi(0.0, 1.0, 2.0, 5.0, 1.0) == pytest.approx(5.0)
    # translation outside the source interval
    assert K.phi(0.0, 1.0, 2.0, 5.0, -1.0) == pytest.approx(1.0)
    assert K.phi(0.0, 1.0, 2.0, 5.0, 3.0) == pytest.approx(7.0)


def test_pure_python_fallback_selected_by_env(monkeypatch):
    import importlib

    monkeypatch.setenv("LINELAB_PURE_PYTHON", "1")
    mod = importlib.reload(kernels)
    try:
        assert mod.BACKEND == "python"
    finally:
        monkeypatch.delenv("LINELAB_PURE_PYTHON")
        importlib.reload(kernels)
