"""Smooth dyadic cutoff supported in [1/2, 2] with a quadratic partition of unity.

The default profile is ``a(t) = g(log2 t)`` where ``g`` is an even bump on
[-1, 1] with ``g(0) = 1`` and ``g(u)^2 + g(u + 1)^2 = 1`` on [-1, 0].  It is
built from the C-infinity step ``s(u) = rho(u) / (rho(u) + rho(1 - u))`` with
``rho(u) = exp(-lam/u)``, ``lam = 1.25``:

    g(u) = sin(pi/2 * s(1 - |u|)) = cos(pi/2 * s(|u|)).

The sine form is used for evaluation because it is exactly zero wherever the
step has saturated, so the support is clean in floating point.

``lam`` trades the plateau height against the decay of the kernel
coefficients.  With ``lam = 1`` the Fourier tail of ``a`` decays slowly enough
that the antipodal lobe of ``L_n`` dominates the sigma = 4 envelopes up to
n ~ 256; ``lam = 1.25`` removes that while keeping ``min a`` on [3/5, 5/3]
at about 0.07.
"""
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import expit

from .errors import DomainError

SUPPORT = (0.5, 2.0)
STEP_SCALE = 1.25
_TINY = 1e-17


def smooth_step(u, lam=STEP_SCALE):
    """C-infinity step: 0 for u <= 0, 1 for u >= 1, with ``s(u) + s(1-u) = 1``."""
    u = np.asarray(u, dtype=np.float64)
    out = np.where(u >= 1.0, 1.0, 0.0)
    inner = (u > _TINY) & (u < 1.0 - _TINY)
    ui = u[inner]
    # rho(u) / (rho(u) + rho(1-u)) = 1 / (1 + exp(lam/u - lam/(1-u)))
    out[inner] = expit(lam * (1.0 / (1.0 - ui) - 1.0 / ui))
    return out


def bump(u):
    """The even profile ``g`` on the log2 scale; zero outside (-1, 1)."""
    u = np.asarray(u, dtype=np.float64)
    r = 1.0 - np.abs(u)
    out = np.zeros_like(u)
    inside = r > 0.0
    out[inside] = np.sin(0.5 * np.pi * smooth_step(r[inside]))
    return out


def _default_profile(t):
    t = np.asarray(t, dtype=np.float64)
    out = np.zeros_like(t)
    inside = (t > SUPPORT[0]) & (t < SUPPORT[1])
    out[inside] = bump(np.log2(t[inside]))
    return out


@dataclass(frozen=True)
class CutoffFunction:
    """A cutoff ``a`` together with its support; call it like a ufunc."""

    evaluator: Callable[[np.ndarray], np.ndarray]
    support: tuple = SUPPORT
    name: str = "exp-cosine"

    def __call__(self, t):
        return eval_cutoff(self, t)


def build_cutoff():
    return CutoffFunction(_default_profile)


_DEFAULT = build_cutoff()


def default_cutoff():
    return _DEFAULT


def eval_cutoff(c, t):
    """``a(t)`` for ``t >= 0``; exactly zero outside the open support."""
    arr = np.asarray(t, dtype=np.float64)
    if np.any(np.isnan(arr)) or np.any(arr < 0.0):
        raise DomainError("cutoff is defined for t >= 0 only")
    lo, hi = c.support
    out = np.zeros_like(arr)
    inside = (arr > lo) & (arr < hi)
    if np.any(inside):
        out[inside] = c.evaluator(arr[inside])
    return out if out.ndim else float(out)


def partition_sum(c, t):
    """``sum_{v >= 0} a(2^-v t)^2``; at most two terms are nonzero."""
    t = np.asarray(t, dtype=np.float64)
    top = int(np.ceil(np.log2(max(float(np.max(t, initial=1.0)), 1.0)))) + 1
    total = np.zeros_like(t)
    for v in range(top + 1):
        total = total + eval_cutoff(c, np.ldexp(t, -v)) ** 2
    return total


def partition_check(c, t_grid):
    """Max deviation of the dyadic partition sum from 1 over points ``t >= 1``."""
    t_grid = np.asarray(t_grid, dtype=np.float64)
    if np.any(t_grid < 1.0):
        raise DomainError("partition check needs t >= 1")
    return float(np.max(np.abs(partition_sum(c, t_grid) - 1.0)))


def band_weights(c, j, nmax):
    """Level-j multipliers ``a(nu / 2^(j-1))`` for nu = 0..nmax; level 0 is ``e_0``."""
    out = np.zeros(nmax + 1)
    if j == 0:
        out[0] = 1.0
        return out
    nu = np.arange(nmax + 1, dtype=np.float64)
    return eval_cutoff(c, np.ldexp(nu, 1 - j))
