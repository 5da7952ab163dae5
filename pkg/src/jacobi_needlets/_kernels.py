"""Hot inner loops with a numba path and a pure-numpy path.

Set ``JACOBI_NEEDLETS_BACKEND=numpy`` to force the fallback; anything else
(or unset) uses numba when it can be imported.  Both implementations are
importable at all times through :data:`IMPLEMENTATIONS` so tests and the
benchmark can compare them side by side.

All kernels work on the orthonormal three-term recurrence

    x p_n(x) = b_{n+1} p_{n+1}(x) + a_n p_n(x) + b_n p_{n-1}(x),  p_0 = 1,

with ``a`` and ``b`` both of length ``nmax + 1`` (``b[0]`` is unused).
"""
import math
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_EPS = 2.0 ** -52


# ---------------------------------------------------------------------------
# pure numpy / pure python
# ---------------------------------------------------------------------------

def orthonormal_table_numpy(a, b, x):
    """Rows ``p_0(x_i) .. p_nmax(x_i)`` for every point, shape ``(len(x), nmax+1)``."""
    nmax = a.shape[0] - 1
    out = np.empty((nmax + 1, x.shape[0]))
    out[0] = 1.0
    if nmax >= 1:
        out[1] = (x - a[0]) / b[1]
    for n in range(1, nmax):
        out[n + 1] = ((x - a[n]) * out[n] - b[n] * out[n - 1]) / b[n + 1]
    return out.T.copy()


def kernel_pairs_numpy(a, b, coef, x, y):
    """``sum_n coef[n] p_n(x_i) p_n(y_i)`` for paired points, compensated summation."""
    nmax = coef.shape[0] - 1
    px_prev = np.zeros_like(x)
    py_prev = np.zeros_like(y)
    px = np.ones_like(x)
    py = np.ones_like(y)
    total = np.full_like(x, coef[0])
    comp = np.zeros_like(x)
    for n in range(nmax):
        px_next = ((x - a[n]) * px - b[n] * px_prev) / b[n + 1]
        py_next = ((y - a[n]) * py - b[n] * py_prev) / b[n + 1]
        px_prev, px = px, px_next
        py_prev, py = py, py_next
        c = coef[n + 1]
        if c != 0.0:
            # Neumaier variant of Kahan summation
            term = c * (px * py)
            t = total + term
            big = np.abs(total) >= np.abs(term)
            comp += np.where(big, (total - t) + term, (term - t) + total)
            total = t
    return total + comp


def _ql_sweeps(d, e, z, max_sweeps):
    """Implicit-shift QL on a symmetric tridiagonal matrix, in place.

    ``d`` is the diagonal, ``e[:n-1]`` the off-diagonal (``e[n-1]`` is
    scratch) and ``z`` the first row of the accumulated rotations, usually
    started at ``e_1``.  On return ``d`` holds the eigenvalues (unsorted) and
    ``z`` the first components of the normalized eigenvectors.  Returns 0 on
    success, otherwise ``l + 1`` for the eigenvalue that hit the sweep cap.
    """
    n = len(d)
    if n == 1:
        return 0
    e[n - 1] = 0.0
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _EPS * dd:
                    break
                m += 1
            if m == l:
                break
            if it == max_sweeps:
                return l + 1
            it += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.sqrt(g * g + 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            while i >= l:
                f = s * e[i]
                bb = c * e[i]
                if abs(f) >= abs(g):
                    c = g / f
                    r = math.sqrt(c * c + 1.0)
                    e[i + 1] = f * r
                    s = 1.0 / r
                    c = c * s
                else:
                    s = f / g
                    r = math.sqrt(s * s + 1.0)
                    e[i + 1] = g * r
                    c = 1.0 / r
                    s = s * c
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * bb
                p = s * r
                d[i + 1] = g + p
                g = c * r - bb
                f = z[i + 1]
                z[i + 1] = s * z[i] + c * f
                z[i] = c * z[i] - s * f
                i -= 1
            d[l] = d[l] - p
            e[l] = g
            e[m] = 0.0
    return 0


def ql_first_row_python(diag, off, max_sweeps):
    n = diag.shape[0]
    d = [float(v) for v in diag]
    e = [float(v) for v in off] + [0.0]
    z = [0.0] * n
    z[0] = 1.0
    status = _ql_sweeps(d, e, z, max_sweeps)
    return np.array(d), np.array(z), status


# ---------------------------------------------------------------------------
# numba
# ---------------------------------------------------------------------------

if numba is not None:
    _njit = numba.njit(cache=True, nogil=True)

    @_njit
    def orthonormal_table_numba(a, b, x):
        nmax = a.shape[0] - 1
        npts = x.shape[0]
        out = np.empty((npts, nmax + 1))
        for i in range(npts):
            xi = x[i]
            p_prev = 0.0
            p = 1.0
            out[i, 0] = 1.0
            for n in range(nmax):
                p_next = ((xi - a[n]) * p - b[n] * p_prev) / b[n + 1]
                p_prev = p
                p = p_next
                out[i, n + 1] = p
        return out

    @_njit
    def kernel_pairs_numba(a, b, coef, x, y):
        nmax = coef.shape[0] - 1
        npts = x.shape[0]
        out = np.empty(npts)
        for i in range(npts):
            xi = x[i]
            yi = y[i]
            px_prev = 0.0
            py_prev = 0.0
            px = 1.0
            py = 1.0
            total = coef[0]
            comp = 0.0
            for n in range(nmax):
                px_next = ((xi - a[n]) * px - b[n] * px_prev) / b[n + 1]
                py_next = ((yi - a[n]) * py - b[n] * py_prev) / b[n + 1]
                px_prev = px
                px = px_next
                py_prev = py
                py = py_next
                c = coef[n + 1]
                if c != 0.0:
                    term = c * (px * py)
                    t = total + term
                    if abs(total) >= abs(term):
                        comp += (total - t) + term
                    else:
                        comp += (term - t) + total
                    total = t
            out[i] = total + comp
        return out

    _ql_sweeps_numba = _njit(_ql_sweeps)

    def ql_first_row_numba(diag, off, max_sweeps):
        n = diag.shape[0]
        d = np.array(diag, dtype=np.float64)
        e = np.zeros(n)
        e[: n - 1] = off
        z = np.zeros(n)
        z[0] = 1.0
        status = _ql_sweeps_numba(d, e, z, max_sweeps)
        return d, z, status


IMPLEMENTATIONS = {
    "numpy": {
        "orthonormal_table": orthonormal_table_numpy,
        "kernel_pairs": kernel_pairs_numpy,
        "ql_first_row": ql_first_row_python,
    },
}
if numba is not None:
    IMPLEMENTATIONS["numba"] = {
        "orthonormal_table": orthonormal_table_numba,
        "kernel_pairs": kernel_pairs_numba,
        "ql_first_row": ql_first_row_numba,
    }

_requested = os.environ.get("JACOBI_NEEDLETS_BACKEND", "numba").strip().lower()
BACKEND = "numba" if (_requested != "numpy" and numba is not None) else "numpy"

orthonormal_table = IMPLEMENTATIONS[BACKEND]["orthonormal_table"]
kernel_pairs = IMPLEMENTATIONS[BACKEND]["kernel_pairs"]
ql_first_row = IMPLEMENTATIONS[BACKEND]["ql_first_row"]
