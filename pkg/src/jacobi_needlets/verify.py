"""Empirical checks of the kernel and needlet decay estimates.

Each scan measures a normalized constant at several resolutions and calls
the estimate "bounded" when the measured constants stay within a fixed factor
of each other (4 for kernel and needlet envelopes and L^p ratios, 1.5 for the
quadrature equivalences).  The thresholds are regression conventions: a
broken decay exponent shows up as roughly a doubling per doubling of n.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .cutoff import default_cutoff
from .errors import ParameterError
from .frame import Expansion, analyze, synthesize, vanishing_moments_check
from .jacobi import normalization_constant, orthonormal_table
from .kernels import (level_coefficients, smoothed_coefficients,
                      smoothed_kernel_matrix, weight_envelope)
from .quadrature import gauss_jacobi

KERNEL_SPREAD = 4.0
QUADRATURE_SPREAD = 1.5
DEFAULT_DENSITY = 4


@dataclass
class EnvelopeReport:
    scan: str
    alpha: float
    beta: float
    probe: dict
    n_values: list
    constants: list
    spread: float
    threshold: float
    verdict: str
    argmax: list = field(default_factory=list)
    grid: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    @property
    def bounded(self):
        return self.verdict in ("bounded", "stable")

    def to_dict(self):
        return asdict(self)


def theta_grid(n, density=DEFAULT_DENSITY, params=None):
    """Uniform angles on [0, pi] with ``density * n`` points, plus the n-point Gauss angles."""
    grid = np.linspace(0.0, np.pi, max(int(density * n), 2))
    if params is not None:
        grid = np.union1d(grid, gauss_jacobi(params, int(n)).thetas)
    return grid


def _map(fn, items, threads):
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def _spread(values):
    values = np.asarray(values, dtype=np.float64)
    return float(values.max() / values.min())


def _verdict(spread, threshold, good="bounded", bad="growing"):
    return good if spread < threshold else bad


def _grid_spec(density):
    return {"kind": "uniform-theta+gauss-angles", "points_per_n": density}


def theorem31_scan(params, cutoff, n_list, sigma, grid_density=DEFAULT_DENSITY,
                   threads=0):
    """Max over a (theta, phi) grid of

        |L_n(cos t, cos p)| sqrt(w(n; cos t) w(n; cos p)) (1 + n|t - p|)^sigma / n.
    """
    if not params.localization_valid:
        raise ParameterError("kernel localization scan needs alpha, beta > -1/2")
    if sigma <= 0:
        raise ParameterError("sigma probe must be positive")
    cutoff = cutoff or default_cutoff()

    def one(n):
        th = theta_grid(n, grid_density, params)
        xs = np.cos(th)
        mat = smoothed_kernel_matrix(params, smoothed_coefficients(cutoff, n), xs, xs)
        env = np.sqrt(weight_envelope(params, n, xs))
        dist = 1.0 + n * np.abs(th[:, None] - th[None, :])
        vals = np.abs(mat) * env[:, None] * env[None, :] * dist ** sigma / n
        i, k = np.unravel_index(int(np.argmax(vals)), vals.shape)
        return float(vals[i, k]), {"theta": float(th[i]), "phi": float(th[k]),
                                   "n_dist": float(n * abs(th[i] - th[k]))}

    res = _map(one, list(n_list), threads)
    consts = [r[0] for r in res]
    spread = _spread(consts)
    return EnvelopeReport(
        "thm31", params.alpha, params.beta,
        {"sigma": sigma, "k": sigma + 2 * params.alpha + 2 * params.beta + 3},
        list(n_list), consts, spread, KERNEL_SPREAD,
        _verdict(spread, KERNEL_SPREAD), [r[1] for r in res], _grid_spec(grid_density))


def boundary_kernel(params, cutoff, n, thetas):
    """``sum_j a(j/n) h_j^-1 P_j(1) P_j(cos t)``, i.e. ``L_n(cos t, 1)``."""
    coef = smoothed_coefficients(cutoff, n)
    at_one = orthonormal_table(params, coef.shape[0] - 1, np.array([1.0]))[0]
    tab = orthonormal_table(params, coef.shape[0] - 1, np.cos(thetas))
    return tab @ (coef * at_one)


def theorem29_scan(params, cutoff, n_list, k, grid_density=DEFAULT_DENSITY, threads=0):
    """Max over theta of ``|L_n(cos t, 1)| (1 + n t)^(k + alpha - beta) / n^(2 alpha + 2)``.

    For ``alpha < beta`` the reflection ``P_m^(a,b)(x) = (-1)^m P_m^(b,a)(-x)``
    turns the probe into one at ``y = -1`` for the swapped exponents.
    """
    reflected = params.alpha < params.beta
    probe_params = params.swapped() if reflected else params
    if not probe_params.localization_valid:
        raise ParameterError("boundary scan needs alpha >= beta > -1/2")
    cutoff = cutoff or default_cutoff()
    a, b = probe_params.alpha, probe_params.beta

    def one(n):
        th = theta_grid(n, grid_density, probe_params)
        vals = (np.abs(boundary_kernel(probe_params, cutoff, n, th))
                * (1.0 + n * th) ** (k + a - b) / float(n) ** (2 * a + 2))
        i = int(np.argmax(vals))
        return float(vals[i]), {"theta": float(th[i])}

    res = _map(one, list(n_list), threads)
    consts = [r[0] for r in res]
    spread = _spread(consts)
    return EnvelopeReport(
        "thm29", params.alpha, params.beta, {"k": k, "reflected": reflected},
        list(n_list), consts, spread, KERNEL_SPREAD,
        _verdict(spread, KERNEL_SPREAD), [r[1] for r in res], _grid_spec(grid_density))


def lp_inner_integrals(params, cutoff, n, p, xs):
    """``int |L_n(x, y)|^p w(y) dy`` for each x, by Gauss-Jacobi quadrature.

    p = 2 uses ``2^(ceil(log2 n) + 1)`` points (exact); p = 1 uses ``8n`` points
    and is approximate because ``|L_n|`` is not a polynomial.
    """
    if p == 2:
        order = 2 ** (int(math.ceil(math.log2(n))) + 1)
    elif p == 1:
        order = 8 * int(n)
    else:
        raise ParameterError("p must be 1 or 2")
    rule = gauss_jacobi(params, order)
    mat = smoothed_kernel_matrix(params, smoothed_coefficients(cutoff, n), xs, rule.nodes)
    return (np.abs(mat) ** p) @ rule.weights / normalization_constant(params)


def lp_closed_form(params, cutoff, n, xs):
    """``int |L_n(x, y)|^2 w(y) dy = c^-1 sum_j a(j/n)^2 P̂_j(x)^2``."""
    coef = smoothed_coefficients(cutoff, n)
    tab = orthonormal_table(params, coef.shape[0] - 1, xs)
    return (tab * tab) @ (coef * coef) / normalization_constant(params)


def lp_ratio_scan(params, cutoff, n_list, p, x_grid=None, grid_density=DEFAULT_DENSITY,
                  threads=0):
    """Max over x of ``[int |L_n(x,y)|^p w(y) dy] w(n; x)^(p-1) / n^(p-1)``."""
    cutoff = cutoff or default_cutoff()

    def one(n):
        xs = (np.cos(theta_grid(n, grid_density)) if x_grid is None
              else np.asarray(x_grid, dtype=np.float64))
        inner = lp_inner_integrals(params, cutoff, n, p, xs)
        ratio = inner * weight_envelope(params, n, xs) ** (p - 1) / float(n) ** (p - 1)
        i = int(np.argmax(ratio))
        info = {"x": float(xs[i])}
        if p == 2:
            closed = lp_closed_form(params, cutoff, n, xs)
            info["closed_form_rel_error"] = float(np.max(np.abs(inner - closed) / closed))
        return float(ratio[i]), info

    res = _map(one, list(n_list), threads)
    consts = [r[0] for r in res]
    spread = _spread(consts)
    extra = {"approximate": p == 1}
    if p == 2:
        extra["closed_form_rel_error"] = max(r[1]["closed_form_rel_error"] for r in res)
    return EnvelopeReport(
        "lp", params.alpha, params.beta, {"p": p}, list(n_list), consts, spread,
        KERNEL_SPREAD, _verdict(spread, KERNEL_SPREAD), [r[1] for r in res],
        _grid_spec(grid_density) if x_grid is None else {"kind": "user", "points": len(x_grid)},
        extra)


def node_weight_ratios(params, n):
    """``n (theta_{v+1} - theta_v)`` for v = 0..n (sentinels 0 and pi) and ``b_v / (w(n; xi_v)/n)``."""
    rule = gauss_jacobi(params, n)
    th = np.concatenate(([0.0], rule.thetas, [np.pi]))
    gaps = n * np.diff(th)
    ratios = rule.weights / (weight_envelope(params, n, rule.nodes) / n)
    return gaps, ratios


def node_weight_equivalence_scan(params, n_list, threads=0):
    """Ranges of the node-gap and weight ratios; stable when their spreads agree within 1.5x."""

    def one(n):
        gaps, ratios = node_weight_ratios(params, n)
        return {"gap_min": float(gaps.min()), "gap_max": float(gaps.max()),
                "gap_spread": _spread(gaps),
                "weight_min": float(ratios.min()), "weight_max": float(ratios.max()),
                "weight_spread": _spread(ratios)}

    res = _map(one, list(n_list), threads)
    gap_drift = _spread([r["gap_spread"] for r in res])
    weight_drift = _spread([r["weight_spread"] for r in res])
    drift = max(gap_drift, weight_drift)
    return EnvelopeReport(
        "quad", params.alpha, params.beta, {}, list(n_list),
        [max(r["gap_spread"], r["weight_spread"]) for r in res], drift,
        QUADRATURE_SPREAD, _verdict(drift, QUADRATURE_SPREAD, "stable", "unstable"),
        res, {"kind": "gauss-angles"},
        {"gap_spread_drift": gap_drift, "weight_spread_drift": weight_drift})


def needlet_localization_scan(params, cutoff, levels, k, grid_density=DEFAULT_DENSITY,
                              threads=0):
    """Max over theta and all level-j nodes of

        |psi_{j,v}(cos t)| sqrt(w(2^j; cos t)) (1 + 2^j |t - theta_v|)^k / 2^(j/2).
    """
    if not params.localization_valid:
        raise ParameterError("needlet localization scan needs alpha, beta > -1/2")
    cutoff = cutoff or default_cutoff()

    def one(j):
        n = 2 ** j
        rule = gauss_jacobi(params, n)
        th = theta_grid(n, grid_density, params)
        xs = np.cos(th)
        psi = (smoothed_kernel_matrix(params, level_coefficients(cutoff, j), xs, rule.nodes)
               * np.sqrt(rule.weights))
        env = np.sqrt(weight_envelope(params, n, xs))
        dist = 1.0 + n * np.abs(th[:, None] - rule.thetas[None, :])
        vals = np.abs(psi) * env[:, None] * dist ** k / math.sqrt(n)
        i, v = np.unravel_index(int(np.argmax(vals)), vals.shape)
        return float(vals[i, v]), {"theta": float(th[i]), "node": int(v) + 1}

    res = _map(one, list(levels), threads)
    consts = [r[0] for r in res]
    spread = _spread(consts)
    return EnvelopeReport(
        "needlet", params.alpha, params.beta, {"k": k}, [2 ** j for j in levels],
        consts, spread, KERNEL_SPREAD, _verdict(spread, KERNEL_SPREAD),
        [r[1] for r in res], _grid_spec(grid_density), {"levels": list(levels)})


def frame_tolerance(frame):
    """1e-10 while the top exact degree is at most 2^8, 1e-8 beyond."""
    return 1e-10 if frame.J <= 9 else 1e-8


def frame_suite(frame, trials=20, seed=0, tolerance=None, basis_limit=256):
    """Parseval, reconstruction, basis and vanishing-moment checks on ``frame``.

    Random test polynomials have degree ``frame.max_degree`` with coefficients
    uniform in [-1, 1].  Returns a dict of check name -> {value, tolerance, ok}.
    """
    tol = frame_tolerance(frame) if tolerance is None else tolerance
    rng = np.random.default_rng(seed)
    deg = frame.max_degree
    gap = recon = 0.0
    for _ in range(trials):
        d = Expansion(frame.params, rng.uniform(-1.0, 1.0, deg + 1))
        c = analyze(frame, d)
        gap = max(gap, abs(c.norm_sq() - d.norm_sq()) / d.norm_sq())
        back = synthesize(frame, c)
        recon = max(recon, float(np.max(np.abs(back.coeffs - d.coeffs))
                                 / np.max(np.abs(d.coeffs))))
    nus = np.arange(deg + 1)
    if nus.size > basis_limit:
        nus = np.sort(rng.choice(nus, basis_limit, replace=False))
    basis = 0.0
    for nu in nus:
        e = np.zeros(deg + 1)
        e[nu] = 1.0
        back = synthesize(frame, analyze(frame, Expansion(frame.params, e)))
        basis = max(basis, float(np.max(np.abs(back.coeffs - e))))
    vanishing = max((vanishing_moments_check(frame, j) for j in range(2, frame.J + 1)),
                    default=0.0)
    checks = {
        "parseval_gap": (gap, tol),
        "reconstruction_error": (recon, 10 * tol),
        "basis_identity_error": (basis, tol),
        "vanishing_moments_closed": (vanishing, 0.0),
    }
    return {name: {"value": v, "tolerance": t, "ok": bool(v <= t)}
            for name, (v, t) in checks.items()}
