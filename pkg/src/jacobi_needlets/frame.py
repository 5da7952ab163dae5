"""Needlet frame: multilevel Gauss-Jacobi rules, atoms, analysis and synthesis.

Level ``j`` uses the ``2^j``-point rule; its atoms are
``psi_{j,nu}(x) = sqrt(b_{j,nu}) L_j(x, xi_{j,nu})``.  Atoms are never stored
on a grid.  Analysis and synthesis run in coefficient space on the
orthonormal Jacobi expansion of a function; ``expand`` is the bridge from
point values.

Level ``j`` sees degrees in ``(2^(j-2), 2^j)``, so a frame with levels
``0..J`` reproduces every polynomial of degree at most ``2^(J-1)`` exactly.
Use :func:`levels_for_degree` to size a frame for a given degree.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from .cutoff import CutoffFunction, default_cutoff
from .errors import DegreeOverflowError, ParameterError, QuadratureOrderError
from .jacobi import JacobiParams, orthonormal_table
from .kernels import level_coefficients, level_kernel, smoothed_kernel_matrix
from .quadrature import QuadratureRule, gauss_jacobi

DEFAULT_LEVELS = 10
MAX_LEVELS = 14
_CACHE_LEVEL = 11
_BLOCK = 2048


@dataclass(frozen=True, eq=False)
class Expansion:
    """Coefficients ``d_0..d_N`` in the orthonormal Jacobi basis."""

    params: JacobiParams
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.float64).reshape(-1)
        if c.size == 0:
            c = np.zeros(1)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self):
        return self.coeffs.shape[0] - 1

    def norm_sq(self):
        """``||f||^2`` in L^2(c w dt), by Parseval."""
        return math.fsum(self.coeffs * self.coeffs)

    def __call__(self, x):
        scalar = np.ndim(x) == 0
        out = orthonormal_table(self.params, self.degree, x) @ self.coeffs
        return float(out[0]) if scalar else out.reshape(np.shape(x))

    def padded(self, length):
        out = np.zeros(max(length, self.coeffs.shape[0]))
        out[: self.coeffs.shape[0]] = self.coeffs
        return out


@dataclass(frozen=True, eq=False)
class NeedletCoefficients:
    """``<f, psi_{j,nu}>`` stored per level; ``levels[j][nu-1]``."""

    params: JacobiParams
    levels: tuple
    degree: int = None

    def norm_sq(self):
        return math.fsum(float(np.dot(c, c)) for c in self.levels)

    @property
    def J(self):
        return len(self.levels) - 1

    def flat(self):
        return np.concatenate(self.levels)


@dataclass(frozen=True, eq=False)
class NeedletFrame:
    params: JacobiParams
    cutoff: CutoffFunction
    J: int
    levels: tuple
    _tables: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def max_degree(self):
        """Highest degree for which the frame identities hold exactly."""
        return 2 ** (self.J - 1) if self.J >= 1 else 0

    @property
    def n_atoms(self):
        return sum(rule.n for rule in self.levels)

    def rule(self, j):
        return self.levels[j]

    def level_table(self, j, rows=slice(None)):
        """``P̂_mu(xi_{j,nu})`` for the level-j nodes, mu < 2^j (or mu = 0 at j = 0)."""
        nodes = self.levels[j].nodes
        nmax = max(2 ** j - 1, 0)
        if j <= _CACHE_LEVEL and rows == slice(None):
            tab = self._tables.get(j)
            if tab is None:
                tab = orthonormal_table(self.params, nmax, nodes)
                tab.setflags(write=False)
                self._tables[j] = tab
            return tab
        return orthonormal_table(self.params, nmax, nodes[rows])

    def _blocks(self, j):
        n = self.levels[j].n
        if j <= _CACHE_LEVEL:
            yield slice(0, n), self.level_table(j)
            return
        for start in range(0, n, _BLOCK):
            rows = slice(start, min(start + _BLOCK, n))
            yield rows, self.level_table(j, rows)


def levels_for_degree(degree):
    """Smallest ``J`` such that levels ``0..J`` represent degree ``degree`` exactly."""
    if degree < 0:
        raise ParameterError("degree must be nonnegative")
    if degree == 0:
        return 0
    return int(math.ceil(math.log2(degree))) + 1


def build_frame(params, cutoff=None, J=DEFAULT_LEVELS, rules=None):
    """Frame with levels ``0..J``; ``rules`` may supply stored quadrature rules."""
    if not 0 <= J <= MAX_LEVELS:
        raise ParameterError(f"levels must be in [0, {MAX_LEVELS}] (got {J})")
    cutoff = cutoff or default_cutoff()
    if rules is None:
        rules = tuple(gauss_jacobi(params, 2 ** j) for j in range(J + 1))
    else:
        rules = tuple(rules)
        if len(rules) != J + 1 or any(r.n != 2 ** j for j, r in enumerate(rules)):
            raise ParameterError("stored rules do not match levels 0..J")
    return NeedletFrame(params, cutoff, int(J), rules)


def _check_level(frame, j):
    if not 0 <= j <= frame.J:
        raise IndexError(f"level {j} outside 0..{frame.J}")


def needlet_eval(frame, j, nu, x):
    """``psi_{j,nu}(x) = sqrt(b_{j,nu}) L_j(x, xi_{j,nu})`` with 1-based ``nu``."""
    _check_level(frame, j)
    rule = frame.levels[j]
    if not 1 <= nu <= rule.n:
        raise IndexError(f"node index {nu} outside 1..{rule.n}")
    xi = rule.nodes[nu - 1]
    return math.sqrt(rule.weights[nu - 1]) * level_kernel(
        frame.params, frame.cutoff, j, x, xi)


def needlet_matrix(frame, j, xs):
    """All level-j atoms at the points ``xs``; shape ``(len(xs), 2^j)``."""
    _check_level(frame, j)
    rule = frame.levels[j]
    xs = np.asarray(xs, dtype=np.float64).reshape(-1)
    coef = level_coefficients(frame.cutoff, j)
    return smoothed_kernel_matrix(frame.params, coef, xs, rule.nodes) * np.sqrt(rule.weights)


def needlet_norm_sq(frame, j, nu, closed_form=False):
    """``||psi_{j,nu}||^2``; by the (j+1)-level rule or by orthonormality."""
    _check_level(frame, j)
    rule = frame.levels[j]
    b = rule.weights[nu - 1]
    coef = level_coefficients(frame.cutoff, j)
    if closed_form:
        p = orthonormal_table(frame.params, coef.shape[0] - 1, rule.nodes[nu - 1:nu])[0]
        return float(b * math.fsum(coef ** 2 * p ** 2))
    fine = gauss_jacobi(frame.params, 2 ** (j + 1))
    vals = smoothed_kernel_matrix(frame.params, coef, fine.nodes,
                                  rule.nodes[nu - 1:nu])[:, 0]
    return float(b * (fine.weights @ (vals * vals)))


def expand(params, f, degree_hint, quad_order=None, *, n_max=None, polynomial=True):
    """Orthonormal coefficients ``d_0..d_{n_max}`` of ``f`` by Gauss-Jacobi quadrature.

    ``f`` is called on an array of nodes.  For polynomial input of degree
    ``degree_hint`` the rule must integrate ``f P̂_{n_max}`` exactly, which is
    checked; for other functions the caller accepts aliasing.
    """
    n_max = degree_hint if n_max is None else n_max
    need = max((degree_hint + n_max + 2) // 2, 1)
    if quad_order is None:
        quad_order = need
    if polynomial and quad_order < need:
        raise QuadratureOrderError(
            f"a {quad_order}-point rule cannot integrate degree "
            f"{degree_hint + n_max} exactly; need at least {need} points")
    rule = gauss_jacobi(params, quad_order)
    values = np.asarray(f(np.array(rule.nodes)), dtype=np.float64)
    values = np.broadcast_to(values, rule.nodes.shape)
    table = orthonormal_table(params, n_max, rule.nodes)
    return Expansion(params, table.T @ (rule.weights * values))


def tail_energy(params, f, degree, quad_order):
    """Energy of the coefficients between ``degree`` and ``quad_order - 1``.

    An aliasing diagnostic for truncating a non-polynomial ``f``.
    """
    top = max(quad_order - 1, degree)
    full = expand(params, f, top, quad_order, polynomial=False)
    tail = full.coeffs[degree + 1:]
    return math.fsum(tail * tail)


def analyze(frame, d):
    """Needlet coefficients ``<f, psi_{j,nu}>`` of the expansion ``d``.

    ``c_{j,nu} = sqrt(b_{j,nu}) sum_mu a(mu / 2^(j-1)) d_mu P̂_mu(xi_{j,nu})``;
    level 0 is ``d_0``.
    """
    if d.degree > frame.max_degree:
        raise DegreeOverflowError(
            f"degree {d.degree} exceeds {frame.max_degree}, the largest degree a "
            f"frame with levels 0..{frame.J} represents; use at least "
            f"{levels_for_degree(d.degree)} levels")
    coeffs = d.coeffs
    out = [np.array([coeffs[0]])]
    for j in range(1, frame.J + 1):
        rule = frame.levels[j]
        m = min(2 ** j, coeffs.shape[0])
        band = level_coefficients(frame.cutoff, j)[:m] * coeffs[:m]
        level = np.zeros(rule.n)
        if np.any(band):
            for rows, tab in frame._blocks(j):
                level[rows] = tab[:, :m] @ band
            level *= np.sqrt(rule.weights)
        out.append(level)
    return NeedletCoefficients(frame.params, tuple(out), d.degree)


def synthesize(frame, c, degree=None):
    """``sum_{j,nu} c_{j,nu} psi_{j,nu}`` as an orthonormal expansion.

    The result has degree ``degree`` (default: the degree recorded by
    :func:`analyze`, else ``2^J - 1``).
    """
    if len(c.levels) != frame.J + 1:
        raise ParameterError("coefficient levels do not match the frame")
    if degree is None:
        degree = c.degree if c.degree is not None else max(2 ** frame.J - 1, 0)
    out = np.zeros(degree + 1)
    out[0] += c.levels[0][0]
    for j in range(1, frame.J + 1):
        rule = frame.levels[j]
        m = min(2 ** j, degree + 1)
        scaled = np.asarray(c.levels[j], dtype=np.float64) * np.sqrt(rule.weights)
        if not np.any(scaled):
            continue
        acc = np.zeros(m)
        for rows, tab in frame._blocks(j):
            acc += scaled[rows] @ tab[:, :m]
        out[:m] += level_coefficients(frame.cutoff, j)[:m] * acc
    return Expansion(frame.params, out)


def calderon_project(params, cutoff, j, d):
    """Band ``L_j * L_j * f``: coefficients ``a^2(nu / 2^(j-1)) d_nu`` (``d_0`` at j = 0)."""
    cutoff = cutoff or default_cutoff()
    out = np.zeros_like(d.coeffs)
    if j == 0:
        out[0] = d.coeffs[0]
    else:
        coef = level_coefficients(cutoff, j)
        m = min(coef.shape[0], out.shape[0])
        out[:m] = coef[:m] ** 2 * d.coeffs[:m]
    return Expansion(params, out)


def vanishing_moments_check(frame, j, method="closed"):
    """Max ``|<psi_{j,nu}, P̂_mu>|`` over all nodes and ``mu <= 2^(j-2)``.

    ``method="closed"`` uses ``sqrt(b) a(mu/2^(j-1)) P̂_mu(xi)``, which vanishes
    identically; ``method="quadrature"`` integrates the product with the
    ``2^(j+1)``-point rule instead.
    """
    if j < 2:
        raise ParameterError("vanishing moments start at level 2")
    _check_level(frame, j)
    rule = frame.levels[j]
    top = 2 ** (j - 2)
    if method == "closed":
        coef = level_coefficients(frame.cutoff, j)[: top + 1]
        tab = orthonormal_table(frame.params, top, rule.nodes)
        vals = np.sqrt(rule.weights)[:, None] * coef[None, :] * tab
        return float(np.max(np.abs(vals)))
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    fine = gauss_jacobi(frame.params, 2 ** (j + 1))
    psi = needlet_matrix(frame, j, fine.nodes)
    basis = orthonormal_table(frame.params, top, fine.nodes)
    inner = (basis * fine.weights[:, None]).T @ psi
    return float(np.max(np.abs(inner)))
