"""Jacobi weight, Jacobi polynomials and the orthonormal basis.

All inner products are taken against the probability measure
``c_{a,b} (1-t)^a (1+t)^b dt`` on [-1, 1], so ``P̂_0 = 1`` and the squared norm
``h_n`` of ``P_n`` is 1 at n = 0.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import betaln, gammaln

from . import _kernels
from .errors import DomainError, ParameterError, SingularityError


@dataclass(frozen=True)
class JacobiParams:
    """Exponent pair of the weight ``(1-t)^alpha (1+t)^beta``."""

    alpha: float
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))
        if not (self.alpha > -1.0):
            raise ParameterError(f"alpha must be > -1 (got {self.alpha!r})")
        if not (self.beta > -1.0):
            raise ParameterError(f"beta must be > -1 (got {self.beta!r})")

    @property
    def localization_valid(self):
        """True when both exponents exceed -1/2, the range of the kernel bounds."""
        return self.alpha > -0.5 and self.beta > -0.5

    @property
    def symmetric(self):
        return self.alpha == self.beta

    def swapped(self):
        return JacobiParams(self.beta, self.alpha)


def _check_interval(x):
    x = np.asarray(x, dtype=np.float64)
    if np.any(np.isnan(x)) or np.any(x < -1.0) or np.any(x > 1.0):
        raise DomainError("argument must lie in [-1, 1]")
    return x


def weight(params, t):
    """``(1-t)^alpha (1+t)^beta``; raises at an endpoint where the weight is infinite."""
    t = _check_interval(t)
    if params.alpha < 0 and np.any(t == 1.0):
        raise SingularityError("weight is infinite at t = 1 for alpha < 0")
    if params.beta < 0 and np.any(t == -1.0):
        raise SingularityError("weight is infinite at t = -1 for beta < 0")
    out = np.power(1.0 - t, params.alpha) * np.power(1.0 + t, params.beta)
    return out if out.ndim else float(out)


def normalization_constant(params):
    """``c_{a,b} = 1 / int_{-1}^{1} w(t) dt = 1 / (2^{a+b+1} B(a+1, b+1))``."""
    a, b = params.alpha, params.beta
    return float(np.exp(-(a + b + 1.0) * np.log(2.0) - betaln(a + 1.0, b + 1.0)))


def _eval_right(a, b, n, x):
    # Recurrence on q_k = P_k(x) / P_k(1) in difference form.  The classical
    # recurrence has a double characteristic root at x = 1, which makes
    # roundoff grow like k^2 there; here the increments d_k = q_k - q_{k-1}
    # are driven by u = 1 - x, so they vanish identically at the endpoint.
    u = 1.0 - x
    q = np.ones_like(x)
    scale = 1.0
    if n == 0:
        return q
    d = -(a + b + 2.0) / (2.0 * (a + 1.0)) * u
    q = q + d
    scale = a + 1.0
    for k in range(1, n):
        s = 2.0 * k + a + b
        c1 = 2.0 * (k + 1) * (k + a + b + 1.0) * s
        c3 = (s + 1.0) * (s + 2.0) * s
        c4 = 2.0 * (k + a) * (k + b) * (s + 2.0)
        up = (k + a + 1.0) / (k + 1.0)  # P_{k+1}(1) / P_k(1)
        down = k / (k + a)  # P_{k-1}(1) / P_k(1)
        d = (c4 * down / (c1 * up)) * d - (c3 / (c1 * up)) * u * q
        q = q + d
        scale *= up
    return scale * q


def jacobi_eval(params, n, x):
    """Classical ``P_n^{(a,b)}(x)``.

    Uses the three-term recurrence in the degree, normalized by the endpoint
    value and written for the increments, so that ``P_n(1) = (a+1)_n / n!``
    comes out to a few ulps.  Points with ``x < 0`` go through the reflection
    ``P_n^{(a,b)}(x) = (-1)^n P_n^{(b,a)}(-x)``.
    """
    if n < 0:
        raise ParameterError("degree must be nonnegative")
    x = _check_interval(x)
    a, b = params.alpha, params.beta
    xs = np.atleast_1d(x)
    out = np.empty_like(xs)
    right = xs >= 0.0
    if np.any(right):
        out[right] = _eval_right(a, b, n, xs[right])
    if not np.all(right):
        sign = -1.0 if n % 2 else 1.0
        out[~right] = sign * _eval_right(b, a, n, -xs[~right])
    return float(out[0]) if x.ndim == 0 else out.reshape(x.shape)


def _log_norm_sq(a, b, n):
    n = np.asarray(n, dtype=np.float64)
    safe = np.where(n == 0, 1.0, n)
    val = (gammaln(a + b + 2.0) - gammaln(a + 1.0) - gammaln(b + 1.0)
           + gammaln(safe + a + 1.0) + gammaln(safe + b + 1.0)
           - np.log(2.0 * safe + a + b + 1.0) - gammaln(safe + 1.0)
           - gammaln(safe + a + b + 1.0))
    return np.where(n == 0, 0.0, val)


def jacobi_norm_sq(params, n):
    """``h_n = c_{a,b} int P_n^2 w``, through log-Gamma differences."""
    if np.any(np.asarray(n) < 0):
        raise ParameterError("degree must be nonnegative")
    out = np.exp(_log_norm_sq(params.alpha, params.beta, n))
    return out if out.ndim else float(out)


@lru_cache(maxsize=64)
def _recurrence_arrays(params, nmax):
    a_, b_ = params.alpha, params.beta
    n = np.arange(nmax + 1, dtype=np.float64)
    s = 2.0 * n + a_ + b_
    diag = np.empty(nmax + 1)
    diag[0] = (b_ - a_) / (a_ + b_ + 2.0)
    diag[1:] = (b_ * b_ - a_ * a_) / (s[1:] * (s[1:] + 2.0))
    off = np.zeros(nmax + 1)
    if nmax >= 1:
        # n = 1 in cancelled form: (n + a + b) / (2n + a + b - 1) = 1 there
        off[1] = np.sqrt(4.0 * (1.0 + a_) * (1.0 + b_)
                         / ((2.0 + a_ + b_) ** 2 * (3.0 + a_ + b_)))
        m = n[2:]
        sm = s[2:]
        off[2:] = np.sqrt(4.0 * m * (m + a_) * (m + b_) * (m + a_ + b_)
                          / (sm * sm * (sm + 1.0) * (sm - 1.0)))
    diag.setflags(write=False)
    off.setflags(write=False)
    return diag, off


def recurrence_arrays(params, nmax):
    """Orthonormal recurrence coefficients ``a_0..a_nmax`` and ``b_0..b_nmax``.

    ``b[0]`` is zero and unused; ``b[n]`` for n >= 1 is the off-diagonal entry
    linking degrees n-1 and n.
    """
    return _recurrence_arrays(params, int(nmax))


def orthonormal_table(params, nmax, x):
    """``P̂_0..P̂_nmax`` at each point of ``x``; shape ``(len(x), nmax+1)``."""
    x = np.ascontiguousarray(_check_interval(x), dtype=np.float64).reshape(-1)
    a, b = recurrence_arrays(params, max(int(nmax), 1))
    return _kernels.orthonormal_table(a[: nmax + 1], b[: nmax + 1], x)


def orthonormal_eval_all(params, nmax, x):
    """``(P̂_0(x), ..., P̂_nmax(x))`` in one recurrence pass.

    A scalar ``x`` gives a vector of length ``nmax + 1``; an array gives one
    row per point.
    """
    if nmax < 0:
        raise ParameterError("nmax must be nonnegative")
    scalar = np.ndim(x) == 0
    table = orthonormal_table(params, nmax, x)
    return table[0] if scalar else table


def pochhammer_ratio(params, n):
    """``P_n(1) = (alpha+1)_n / n!``."""
    a = params.alpha
    return float(np.exp(gammaln(n + a + 1.0) - gammaln(a + 1.0) - gammaln(n + 1.0)))
