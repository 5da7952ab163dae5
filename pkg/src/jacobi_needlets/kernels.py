"""Reproducing kernel, smoothed kernels ``L_n``, level kernels ``L_j`` and the
resolution-regularized weight envelope.

Pointwise evaluation uses a fused recurrence at ``x`` and ``y`` with
compensated summation (no table is stored).  Grid scans go through
``smoothed_kernel_matrix``, which builds one basis table per side and
contracts them with a matrix product.
"""
import math

import numpy as np

from . import _kernels
from .cutoff import band_weights, default_cutoff, eval_cutoff
from .jacobi import _check_interval, orthonormal_table, recurrence_arrays


def weight_envelope(params, n, x):
    """``(1 - x + n^-2)^(alpha+1/2) (1 + x + n^-2)^(beta+1/2)``."""
    x = _check_interval(x)
    eps = 1.0 / (float(n) * float(n))
    out = (np.power(1.0 - x + eps, params.alpha + 0.5)
           * np.power(1.0 + x + eps, params.beta + 0.5))
    return out if out.ndim else float(out)


def _paired(params, coef, x, y):
    x = _check_interval(x)
    y = _check_interval(y)
    x, y = np.broadcast_arrays(x, y)
    shape = x.shape
    nmax = coef.shape[0] - 1
    a, b = recurrence_arrays(params, max(nmax, 1))
    out = _kernels.kernel_pairs(a[: nmax + 1], b[: nmax + 1], coef,
                                np.ascontiguousarray(x, dtype=np.float64).reshape(-1),
                                np.ascontiguousarray(y, dtype=np.float64).reshape(-1))
    out = out.reshape(shape)
    return out if out.ndim else float(out)


def reproducing_kernel(params, n, x, y):
    """``K_n(x, y) = sum_{j<=n} P̂_j(x) P̂_j(y)``."""
    return _paired(params, np.ones(int(n) + 1), x, y)


def smoothed_degree(n):
    """Largest degree with a nonzero multiplier ``a(j/n)``: ``ceil(2n) - 1``."""
    return max(int(math.ceil(2.0 * n)) - 1, 0)


def smoothed_coefficients(cutoff, n):
    """``a(j/n)`` for j = 0..ceil(2n)-1."""
    cutoff = cutoff or default_cutoff()
    j = np.arange(smoothed_degree(n) + 1, dtype=np.float64)
    return np.asarray(eval_cutoff(cutoff, j / float(n)), dtype=np.float64)


def smoothed_kernel(params, cutoff, n, x, y):
    """``L_n(x, y) = sum_j a(j/n) P̂_j(x) P̂_j(y)``, broadcasting over ``x`` and ``y``."""
    if n <= 0:
        raise ValueError("n must be positive")
    return _paired(params, smoothed_coefficients(cutoff, n), x, y)


def level_coefficients(cutoff, j):
    """Multipliers of the level kernel ``L_j``: ``a(nu / 2^(j-1))`` for nu < 2^j."""
    cutoff = cutoff or default_cutoff()
    if j == 0:
        return np.ones(1)
    return band_weights(cutoff, j, 2 ** j - 1)


def level_kernel(params, cutoff, j, x, y):
    """``L_0 = 1`` and ``L_j = L_n`` with ``n = 2^(j-1)`` for j >= 1."""
    if j < 0:
        raise ValueError("level must be nonnegative")
    if j == 0:
        x, y = np.broadcast_arrays(_check_interval(x), _check_interval(y))
        out = np.ones(x.shape)
        return out if out.ndim else 1.0
    return smoothed_kernel(params, cutoff, 2 ** (j - 1), x, y)


def smoothed_kernel_matrix(params, coef, xs, ys):
    """``M[i, k] = sum_nu coef[nu] P̂_nu(xs[i]) P̂_nu(ys[k])`` through two basis tables."""
    nmax = coef.shape[0] - 1
    tx = orthonormal_table(params, nmax, xs)
    ty = tx if ys is xs else orthonormal_table(params, nmax, ys)
    return (tx * coef) @ ty.T
