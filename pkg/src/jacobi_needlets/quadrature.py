"""Gauss-Jacobi quadrature against the normalized Jacobi measure.

Nodes are the eigenvalues of the symmetric tridiagonal Jacobi matrix and the
weights are the squared first eigenvector components (Golub-Welsch with total
mass 1).  Rules are returned in decreasing-node order, i.e. with increasing
angles ``theta_nu = arccos(xi_nu)``.
"""
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from . import _kernels
from .errors import ConvergenceError, ParameterError, QuadratureOrderError
from .jacobi import JacobiParams, recurrence_arrays

MAX_ORDER = 2 ** 14
MAX_SWEEPS = 50
MIN_NODE_GAP = 1e-14


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    params: JacobiParams
    n: int
    nodes: np.ndarray
    weights: np.ndarray
    thetas: np.ndarray

    def integrate(self, values):
        """Quadrature sum for samples taken at ``self.nodes`` (last axis)."""
        return np.asarray(values) @ self.weights

    def __len__(self):
        return self.n


def recurrence_coefficients(params, n):
    """Diagonal (length n) and off-diagonal (length n-1) of the Jacobi matrix."""
    if n < 1:
        raise ParameterError("quadrature order must be >= 1")
    a, b = recurrence_arrays(params, n)
    return np.array(a[:n]), np.array(b[1:n])


def tridiagonal_eigh_first_row(diag, off, max_sweeps=MAX_SWEEPS):
    """Eigenvalues (ascending) and eigenvector first components of a tridiagonal matrix."""
    diag = np.ascontiguousarray(diag, dtype=np.float64)
    off = np.ascontiguousarray(off, dtype=np.float64)
    d, z, status = _kernels.ql_first_row(diag, off, max_sweeps)
    if status:
        raise ConvergenceError(
            f"implicit QL did not converge for eigenvalue {status} "
            f"within {max_sweeps} sweeps")
    order = np.argsort(d, kind="stable")
    return d[order], z[order]


@lru_cache(maxsize=256)
def _gauss_jacobi(params, n):
    diag, off = recurrence_coefficients(params, n)
    vals, first = tridiagonal_eigh_first_row(diag, off)
    nodes = vals[::-1].copy()
    weights = (first * first)[::-1].copy()
    if n > 1 and np.any(-np.diff(nodes) <= MIN_NODE_GAP):
        raise ConvergenceError("coincident Gauss-Jacobi nodes; eigensolver failed")
    if np.any(weights <= 0.0):
        raise ConvergenceError("nonpositive quadrature weight")
    thetas = np.arccos(np.clip(nodes, -1.0, 1.0))
    for arr in (nodes, weights, thetas):
        arr.setflags(write=False)
    return QuadratureRule(params, n, nodes, weights, thetas)


def gauss_jacobi(params, n):
    """The n-point Gauss rule for ``c_{a,b} w(t) dt``, exact up to degree 2n-1."""
    n = int(n)
    if not 1 <= n <= MAX_ORDER:
        raise ParameterError(f"quadrature order must be in [1, {MAX_ORDER}] (got {n})")
    return _gauss_jacobi(params, n)


# ---------------------------------------------------------------------------
# independent moment oracle
# ---------------------------------------------------------------------------

@lru_cache(maxsize=32)
def _moment_table(params, kmax):
    # t^k = sum_i C(k,i) (1+t)^i (-1)^(k-i); each (1+t)^i moment is a Beta ratio,
    #   c * int (1-t)^a (1+t)^(b+i) dt = 2^i B(a+1, b+i+1) / B(a+1, b+1)
    #                                  = prod_{m<i} 2 (b+1+m) / (a+b+2+m).
    # The alternating terms reach ~3^k, so ratios are rounded to integers at
    # scale 2^bits and the binomial sums are done exactly; the total error is
    # at most 2^(k - bits).
    bits = kmax + 96
    scaled = []
    with mpmath.workprec(bits + kmax + 64):  # ratios grow like 2^i
        a = mpmath.mpf(params.alpha)
        b = mpmath.mpf(params.beta)
        ratio = mpmath.mpf(1)
        for m in range(kmax + 1):
            scaled.append(int(mpmath.nint(mpmath.ldexp(ratio, bits))))
            ratio = ratio * 2 * (b + 1 + m) / (a + b + 2 + m)
    out = np.empty(kmax + 1)
    row = [1]
    for k in range(kmax + 1):
        total = 0
        for i, c in enumerate(row):
            term = c * scaled[i]
            total += -term if (k - i) & 1 else term
        out[k] = total / (1 << bits)
        row = [1] + [row[i] + row[i + 1] for i in range(k)] + [1]
    out.setflags(write=False)
    return out


def moment_table(params, kmax):
    """``m_0..m_kmax`` with ``m_k = c_{a,b} int t^k w(t) dt``."""
    return _moment_table(params, int(kmax))


def moment_oracle(params, k):
    """``c_{a,b} int_{-1}^{1} t^k w(t) dt``, computed without any quadrature."""
    if k < 0:
        raise ParameterError("moment order must be nonnegative")
    return float(moment_table(params, k)[k])


@dataclass(frozen=True)
class ExactnessReport:
    n: int
    max_degree: int
    errors: np.ndarray
    max_error: float


def verify_exactness(rule, max_degree):
    """Absolute errors of the rule on ``t^k``, k = 0..max_degree, against the oracle."""
    if max_degree > 2 * rule.n - 1:
        raise QuadratureOrderError(
            f"an {rule.n}-point rule is exact only up to degree {2 * rule.n - 1}")
    moments = moment_table(rule.params, max_degree)
    errors = np.empty(max_degree + 1)
    power = np.ones(rule.n)
    for k in range(max_degree + 1):
        errors[k] = abs(float(power @ rule.weights) - moments[k])
        power = power * rule.nodes
    return ExactnessReport(rule.n, max_degree, errors, float(errors.max()))
