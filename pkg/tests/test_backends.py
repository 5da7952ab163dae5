import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jacobi_needlets import JacobiParams, _kernels
from jacobi_needlets.jacobi import recurrence_arrays
from jacobi_needlets.quadrature import recurrence_coefficients

pytestmark = pytest.mark.skipif("numba" not in _kernels.IMPLEMENTATIONS,
                                reason="numba not importable")
NP = _kernels.IMPLEMENTATIONS["numpy"]
NB = _kernels.IMPLEMENTATIONS.get("numba")
exponent = st.floats(-0.95, 5.0)


@given(exponent, exponent, st.integers(0, 300),
       st.lists(st.floats(-1, 1), min_size=1, max_size=20))
def test_orthonormal_table_parity(a, b, nmax, xs):
    ra, rb = recurrence_arrays(JacobiParams(a, b), max(nmax, 1))
    ra, rb = np.array(ra[: nmax + 1]), np.array(rb[: nmax + 1])
    x = np.array(xs)
    np.testing.assert_array_equal(NP["orthonormal_table"](ra, rb, x),
                                  NB["orthonormal_table"](ra, rb, x))


@given(exponent, exponent, st.integers(0, 200), st.integers(0, 2 ** 32 - 1))
def test_kernel_pairs_parity(a, b, nmax, seed):
    rng = np.random.default_rng(seed)
    ra, rb = recurrence_arrays(JacobiParams(a, b), max(nmax, 1))
    ra, rb = np.array(ra[: nmax + 1]), np.array(rb[: nmax + 1])
    coef = rng.uniform(0, 1, nmax + 1)
    x, y = rng.uniform(-1, 1, 9), rng.uniform(-1, 1, 9)
    got_np = NP["kernel_pairs"](ra, rb, coef, x, y)
    got_nb = NB["kernel_pairs"](ra, rb, coef, x, y)
    np.testing.assert_allclose(got_np, got_nb, rtol=1e-14, atol=1e-14)


@given(exponent, exponent, st.integers(1, 120))
def test_ql_parity(a, b, n):
    d, e = recurrence_coefficients(JacobiParams(a, b), n)
    d1, z1, s1 = NP["ql_first_row"](d, e, 50)
    d2, z2, s2 = NB["ql_first_row"](d, e, 50)
    assert s1 == s2 == 0
    np.testing.assert_array_equal(d1, d2)
    np.testing.assert_array_equal(z1, z2)


@pytest.mark.parametrize("flag,expected", [("numpy", "numpy"), ("numba", "numba"),
                                           ("NUMPY", "numpy")])
def test_env_flag_selects_backend(flag, expected):
    env = dict(os.environ, JACOBI_NEEDLETS_BACKEND=flag)
    out = subprocess.run([sys.executable, "-c",
                          "import jacobi_needlets as j; print(j.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == expected


def test_fallback_end_to_end():
    code = ("import numpy as np, jacobi_needlets as j\n"
            "p = j.JacobiParams(0.5, -0.3)\n"
            "f = j.build_frame(p, J=6)\n"
            "d = j.Expansion(p, np.random.default_rng(1).uniform(-1, 1, 33))\n"
            "c = j.analyze(f, d)\n"
            "print(j.BACKEND, abs(c.norm_sq() - d.norm_sq()) / d.norm_sq())\n")
    env = dict(os.environ, JACOBI_NEEDLETS_BACKEND="numpy")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True).stdout.split()
    assert out[0] == "numpy" and float(out[1]) <= 1e-12
