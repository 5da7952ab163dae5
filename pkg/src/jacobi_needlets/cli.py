"""Command-line driver: ``jacobi-needlets <command> ...``.

Exit codes: 0 success, 1 a verification check failed, 2 usage error.
"""
import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import serialize
from .cutoff import default_cutoff, eval_cutoff, partition_check, partition_sum
from .errors import ConvergenceError, NeedletError
from .frame import (DEFAULT_LEVELS, MAX_LEVELS, Expansion, analyze, build_frame, expand,
                    levels_for_degree, synthesize, tail_energy)
from .jacobi import JacobiParams
from .kernels import level_kernel, reproducing_kernel, smoothed_kernel, weight_envelope
from .quadrature import MAX_ORDER, gauss_jacobi, verify_exactness
from .verify import (DEFAULT_DENSITY, frame_suite, lp_ratio_scan,
                     needlet_localization_scan, node_weight_equivalence_scan,
                     theorem29_scan, theorem31_scan)

PROG = "jacobi-needlets"
HELP_WIDTH = 80
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    def __init__(self, message, remedy=None):
        super().__init__(message)
        self.remedy = remedy


@dataclass
class RunConfig:
    """Everything a run depends on; stored alongside structured outputs."""

    command: str
    alpha: float = None
    beta: float = None
    levels: int = None
    threads: int = 0
    tolerance: float = None
    seed: int = 0
    options: dict = field(default_factory=dict)

    _CORE = ("command", "alpha", "beta", "levels", "threads", "tolerance", "seed")

    @classmethod
    def from_namespace(cls, ns):
        values = {k: v for k, v in vars(ns).items() if k != "handler"}
        core = {k: values.pop(k) for k in cls._CORE if k in values}
        return cls(options=values, **core)

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, doc):
        return cls(**doc)

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# argument types
# ---------------------------------------------------------------------------

def _exponent(name):
    def parse(text):
        try:
            v = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number (got {text!r})")
        if not v > -1.0:
            raise argparse.ArgumentTypeError(f"{name} must be > -1 (got {text})")
        return v
    parse.__name__ = name
    return parse


def _int_range(lo, hi):
    def parse(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer (got {text!r})")
        if not lo <= v <= hi:
            raise argparse.ArgumentTypeError(f"must be in [{lo}, {hi}] (got {v})")
        return v
    return parse


def _int_list(text):
    try:
        out = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers (got {text!r})")
    if not out or min(out) < 1:
        raise argparse.ArgumentTypeError("expected positive integers")
    return out


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers (got {text!r})")


def _positive(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive (got {text})")
    return v


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n"
                         f"remedy: run '{self.prog} --help' for the accepted flags\n")
        sys.exit(EXIT_USAGE)


def _formatter(prog):
    return argparse.HelpFormatter(prog, width=HELP_WIDTH, max_help_position=32)


def _common():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common options")
    g.add_argument("--threads", type=_int_range(0, 256), default=0,
                   help="worker threads for scans (0 = sequential, deterministic)")
    g.add_argument("--tolerance", type=_positive, default=None,
                   help="override the pass/fail tolerance of the command")
    return p


def _params_args(p):
    p.add_argument("--alpha", type=_exponent("alpha"), default=0.0,
                   help="weight exponent at x = 1, > -1 (default 0)")
    p.add_argument("--beta", type=_exponent("beta"), default=0.0,
                   help="weight exponent at x = -1, > -1 (default 0)")


def build_parser():
    common = _common()
    parser = _Parser(prog=PROG, formatter_class=_formatter,
                     description="Tight needlet frames for Jacobi-weighted L2 on [-1, 1].")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def add(name, handler, help_text, parent=sub):
        p = parent.add_parser(name, help=help_text, description=help_text,
                              parents=[common], formatter_class=_formatter)
        p.set_defaults(handler=handler)
        return p

    p = add("quad", cmd_quad, "Gauss-Jacobi nodes, angles and weights.")
    _params_args(p)
    p.add_argument("--n", type=_int_range(1, MAX_ORDER), required=True,
                   help="number of nodes")
    p.add_argument("--check", action="store_true",
                   help="check exactness on x^k, k < 2n, against the moment oracle")
    p.add_argument("--out", help="CSV output path (default stdout)")

    p = add("cutoff-check", cmd_cutoff, "Check the cutoff conditions; emit t, a(t), "
            "partition sum.")
    p.add_argument("--points", type=_int_range(2, 10 ** 7), default=10001,
                   help="grid size for the checks and the CSV (default 10001)")
    p.add_argument("--out", help="CSV output path (default: no CSV)")

    p = add("kernel", cmd_kernel, "Evaluate K_n, L_n or the level kernel L_j.")
    _params_args(p)
    p.add_argument("--kind", choices=("reproducing", "smoothed", "level"),
                   default="smoothed", help="kernel family (default smoothed)")
    p.add_argument("--n", type=_int_range(0, 2 ** MAX_LEVELS), required=True,
                   help="degree n, or level j for --kind level")
    p.add_argument("--y", type=float, default=1.0, help="second argument (default 1)")
    p.add_argument("--x", type=float, help="first argument; omit to tabulate theta, phi, L, normalized L")
    p.add_argument("--points", type=_int_range(2, 10 ** 6), default=513,
                   help="theta grid size when tabulating (default 513)")
    p.add_argument("--out", help="CSV output path (default stdout)")

    fp = add("frame", None, "Build, apply and verify needlet frames.")
    fsub = fp.add_subparsers(dest="action", metavar="ACTION", parser_class=_Parser)
    fsub.required = True

    p = add("build", cmd_frame_build, "Build a frame with levels 0..J and store it.", fsub)
    _params_args(p)
    p.add_argument("--levels", type=_int_range(0, MAX_LEVELS), default=DEFAULT_LEVELS,
                   help=f"top level J (default {DEFAULT_LEVELS})")
    p.add_argument("--out", required=True, help="frame JSON path")

    p = add("analyze", cmd_frame_analyze, "Needlet coefficients of sampled or "
            "polynomial input.", fsub)
    p.add_argument("--frame", required=True, help="frame JSON from 'frame build'")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="CSV of x,f(x) samples (linearly interpolated)")
    src.add_argument("--poly", help="CSV of polynomial coefficients, lowest degree first")
    p.add_argument("--basis", choices=("monomial", "orthonormal"), default="monomial",
                   help="basis of the --poly coefficients (default monomial)")
    p.add_argument("--degree", type=_int_range(0, 2 ** MAX_LEVELS),
                   help="truncation degree (default: the frame's exact degree)")
    p.add_argument("--quad-order", type=_int_range(1, MAX_ORDER),
                   help="quadrature order for the expansion")
    p.add_argument("--out", required=True, help="coefficients JSON path")

    p = add("synthesize", cmd_frame_synthesize, "Orthonormal expansion from needlet "
            "coefficients.", fsub)
    p.add_argument("--frame", required=True, help="frame JSON from 'frame build'")
    p.add_argument("--coeffs", required=True, help="coefficients JSON from 'frame analyze'")
    p.add_argument("--out", help="CSV of nu,d_nu (default stdout)")

    p = add("verify", cmd_frame_verify, "Parseval, reconstruction and vanishing-moment "
            "checks.", fsub)
    p.add_argument("--frame", required=True, help="frame JSON from 'frame build'")
    p.add_argument("--trials", type=_int_range(1, 10 ** 4), default=20,
                   help="random test polynomials (default 20)")
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    p.add_argument("--out", help="report JSON path")

    p = add("verify-estimates", cmd_estimates, "Measure kernel, needlet, L^p and "
            "quadrature envelope constants.")
    _params_args(p)
    p.add_argument("--scan", choices=("thm29", "thm31", "lp", "quad", "needlet"),
                   required=True, help="which estimate to scan")
    p.add_argument("--n", type=_int_list, default=[32, 64, 128, 256],
                   help="comma-separated resolutions (default 32,64,128,256)")
    p.add_argument("--levels", type=_int_list, default=[4, 5, 6, 7, 8, 9],
                   help="needlet levels for --scan needlet (default 4,...,9)")
    p.add_argument("--sigma", type=_positive, default=2.0,
                   help="decay probe for thm31 (default 2)")
    p.add_argument("--k", type=_positive, default=4.0,
                   help="decay probe for thm29 and needlet (default 4)")
    p.add_argument("--p", type=int, choices=(1, 2), default=2,
                   help="exponent for --scan lp (default 2)")
    p.add_argument("--density", type=_int_range(1, 64), default=DEFAULT_DENSITY,
                   help=f"theta grid points per unit n (default {DEFAULT_DENSITY})")
    p.add_argument("--out", help="report JSON path")

    p = add("demo", cmd_demo, "Expand, analyze and synthesize a test function.")
    _params_args(p)
    p.add_argument("--levels", type=_int_range(1, MAX_LEVELS - 1), default=6,
                   help="truncate to degree 2^J - 1 (default J = 6)")
    p.add_argument("--function", choices=("poly", "abs", "sign", "cos"), default="abs",
                   help="test function (default abs)")
    p.add_argument("--coeffs", type=_float_list,
                   help="monomial coefficients for poly, lowest first (default random)")
    p.add_argument("--omega", type=float, default=10.0,
                   help="frequency for cos(omega x) (default 10)")
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    return parser


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _params(args):
    return JacobiParams(args.alpha, args.beta)


def _open_out(path):
    return open(path, "w", newline="", encoding="utf-8") if path else None


def _emit_csv(path, header, rows):
    fh = _open_out(path)
    try:
        serialize.write_csv(fh or sys.stdout, header, rows)
    finally:
        if fh:
            fh.close()


def _status(ok):
    return "PASS" if ok else "FAIL"


def _with_config(doc, args):
    doc = dict(doc)
    doc["config"] = RunConfig.from_namespace(args).to_dict()
    return doc


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_quad(args):
    rule = gauss_jacobi(_params(args), args.n)
    rows = [(nu + 1, float(x), float(t), float(w))
            for nu, (x, t, w) in enumerate(zip(rule.nodes, rule.thetas, rule.weights))]
    _emit_csv(args.out, ("nu", "node", "theta", "weight"), rows)
    if not args.check:
        return EXIT_OK
    tol = args.tolerance or 1e-11
    rep = verify_exactness(rule, 2 * args.n - 1)
    ok = rep.max_error <= tol
    print(f"exactness through degree {rep.max_degree}: max error {rep.max_error:.3e} "
          f"(tol {tol:g}) {_status(ok)}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


def cutoff_report(points=10001):
    c = default_cutoff()
    checks = {}
    outside = np.concatenate((np.linspace(0.0, 0.5, points), np.linspace(2.0, 8.0, points)))
    checks["a1_support"] = (float(np.max(np.abs(eval_cutoff(c, outside)))), 0.0)
    t = np.linspace(0.5, 1.0, points)
    checks["a3_pairs"] = (float(np.max(np.abs(eval_cutoff(c, t) ** 2
                                              + eval_cutoff(c, 2 * t) ** 2 - 1.0))), 1e-13)
    checks["a4_partition"] = (partition_check(c, np.logspace(0.0, 10.0, 4096, base=2.0)),
                              1e-12)
    plateau = float(np.min(eval_cutoff(c, np.linspace(0.6, 5.0 / 3.0, points))))
    out = {k: {"value": v, "tolerance": tol, "ok": bool(v <= tol)}
           for k, (v, tol) in checks.items()}
    out["a2_min"] = {"value": plateau, "tolerance": 0.05, "ok": bool(plateau > 0.05)}
    return out


def cmd_cutoff(args):
    rep = cutoff_report(args.points)
    if args.tolerance:
        for key in ("a3_pairs", "a4_partition"):
            rep[key]["tolerance"] = args.tolerance
            rep[key]["ok"] = rep[key]["value"] <= args.tolerance
    if args.out:
        c = default_cutoff()
        t = np.linspace(0.0, 4.0, args.points)
        rows = zip(t, eval_cutoff(c, t), partition_sum(c, t))
        _emit_csv(args.out, ("t", "a", "partition_sum"), rows)
    for name, r in rep.items():
        print(f"{name:14s} {r['value']:.3e}  (bound {r['tolerance']:g})  {_status(r['ok'])}")
    return EXIT_OK if all(r["ok"] for r in rep.values()) else EXIT_FAIL


def cmd_kernel(args):
    params = _params(args)
    if args.kind == "reproducing":
        scale = max(args.n, 1)
        fn = lambda x: reproducing_kernel(params, args.n, x, args.y)
    elif args.kind == "smoothed":
        if args.n < 1:
            raise UsageError("--n must be >= 1 for the smoothed kernel",
                             "pass a positive degree scale, e.g. --n 32")
        scale = args.n
        fn = lambda x: smoothed_kernel(params, None, args.n, x, args.y)
    else:
        if args.n > MAX_LEVELS:
            raise UsageError(f"--n is a level for --kind level and must be <= {MAX_LEVELS}",
                             f"pass a level between 0 and {MAX_LEVELS}")
        scale = 2 ** max(args.n - 1, 0)
        fn = lambda x: level_kernel(params, None, args.n, x, args.y)
    if not -1.0 <= args.y <= 1.0 or (args.x is not None and not -1.0 <= args.x <= 1.0):
        raise UsageError("--x and --y must lie in [-1, 1]")
    if args.x is not None:
        print(repr(float(fn(args.x))))
        return EXIT_OK
    th = np.linspace(0.0, np.pi, args.points)
    xs = np.clip(np.cos(th), -1.0, 1.0)
    vals = fn(xs)
    env = np.sqrt(weight_envelope(params, scale, xs) * weight_envelope(params, scale, args.y))
    phi = math.acos(args.y)
    rows = ((t, phi, v, v * e / scale) for t, v, e in zip(th, vals, env))
    _emit_csv(args.out, ("theta", "phi", "L", "normalized"), rows)
    return EXIT_OK


def cmd_frame_build(args):
    frame = build_frame(_params(args), J=args.levels)
    serialize.save_frame(args.out, frame)
    print(f"frame: levels 0..{frame.J}, {frame.n_atoms} atoms, exact through degree "
          f"{frame.max_degree} -> {args.out}")
    return EXIT_OK


def _polynomial_expansion(params, coeffs, basis, degree, quad_order):
    if basis == "orthonormal":
        out = np.zeros(degree + 1)
        m = min(degree + 1, coeffs.shape[0])
        out[:m] = coeffs[:m]
        return Expansion(params, out), 0.0
    deg = coeffs.shape[0] - 1
    f = lambda x: np.polynomial.polynomial.polyval(x, coeffs)
    d = expand(params, f, deg, quad_order, n_max=degree)
    tail = 0.0
    if deg > degree:
        full = expand(params, f, deg, n_max=deg)
        tail = math.fsum(full.coeffs[degree + 1:] ** 2)
    return d, tail


def cmd_frame_analyze(args):
    frame = serialize.load_frame(args.frame)
    params = frame.params
    degree = frame.max_degree if args.degree is None else args.degree
    if degree > frame.max_degree:
        raise UsageError(f"--degree {degree} exceeds {frame.max_degree}, the largest "
                         f"degree this frame reproduces exactly",
                         f"rebuild with --levels {levels_for_degree(degree)} or lower --degree")
    if args.poly:
        d, tail = _polynomial_expansion(params, serialize.read_vector(args.poly),
                                        args.basis, degree, args.quad_order)
    else:
        xs, fs = serialize.read_samples(args.input)
        f = lambda x: np.interp(x, xs, fs)
        order = args.quad_order or 2 * (degree + 1)
        d = expand(params, f, degree, order, polynomial=False)
        tail = tail_energy(params, f, degree, order)
    c = analyze(frame, d)
    doc = serialize.coefficients_to_dict(frame, c)
    doc["expansion"] = {"degree": d.degree, "norm_sq": d.norm_sq(), "tail_energy": tail}
    serialize.write_json(args.out, _with_config(doc, args))
    gap = abs(c.norm_sq() - d.norm_sq()) / max(d.norm_sq(), np.finfo(float).tiny)
    print(f"degree {d.degree}: ||d||^2 = {d.norm_sq():.15g}, sum c^2 = {c.norm_sq():.15g}, "
          f"relative gap {gap:.3e}, tail energy {tail:.3e}")
    return EXIT_OK


def cmd_frame_synthesize(args):
    frame = serialize.load_frame(args.frame)
    c = serialize.load_coefficients(args.coeffs)
    if c.params != frame.params or c.J != frame.J:
        raise UsageError("coefficients do not belong to this frame",
                         "pass the frame used by 'frame analyze'")
    d = synthesize(frame, c)
    _emit_csv(args.out, ("nu", "d"), serialize.expansion_rows(d))
    return EXIT_OK


def cmd_frame_verify(args):
    frame = serialize.load_frame(args.frame)
    rep = frame_suite(frame, args.trials, args.seed, args.tolerance)
    for name, r in rep.items():
        print(f"{name:26s} {r['value']:.3e}  (tol {r['tolerance']:g})  {_status(r['ok'])}")
    if args.out:
        serialize.write_json(args.out, _with_config(
            {"format": serialize.FORMAT, "kind": "frame-verify", "checks": rep}, args))
    return EXIT_OK if all(r["ok"] for r in rep.values()) else EXIT_FAIL


def cmd_estimates(args):
    params = _params(args)
    cutoff = default_cutoff()
    scan = args.scan
    if scan == "thm31":
        rep = theorem31_scan(params, cutoff, args.n, args.sigma, args.density, args.threads)
    elif scan == "thm29":
        rep = theorem29_scan(params, cutoff, args.n, args.k, args.density, args.threads)
    elif scan == "lp":
        rep = lp_ratio_scan(params, cutoff, args.n, args.p, grid_density=args.density,
                            threads=args.threads)
    elif scan == "quad":
        rep = node_weight_equivalence_scan(params, args.n, args.threads)
    else:
        rep = needlet_localization_scan(params, cutoff, args.levels, args.k, args.density,
                                        args.threads)
    threshold = args.tolerance or rep.threshold
    ok = rep.spread < threshold
    sizes = ",".join(str(n) for n in rep.n_values)
    consts = ", ".join(f"{v:.6g}" for v in rep.constants)
    print(f"{scan} alpha={params.alpha:g} beta={params.beta:g} probe={rep.probe}")
    print(f"  n = {sizes}: constants [{consts}]")
    good, bad = ("stable", "unstable") if scan == "quad" else ("bounded", "growing")
    print(f"  spread {rep.spread:.4f} (threshold {threshold:g}) {good if ok else bad}")
    if args.out:
        doc = {"format": serialize.FORMAT, "kind": "envelope-report", "report": rep.to_dict()}
        serialize.write_json(args.out, _with_config(doc, args))
    return EXIT_OK if ok else EXIT_FAIL


def demo_function(name, coeffs=None, omega=10.0, seed=0):
    """``(f, polynomial degree or None)`` for a built-in test function."""
    if name == "abs":
        return np.abs, None
    if name == "sign":
        return np.sign, None
    if name == "cos":
        return (lambda x: np.cos(omega * x)), None
    if coeffs is None:
        coeffs = np.random.default_rng(seed).uniform(-1.0, 1.0, 8)
    coeffs = np.asarray(coeffs, dtype=np.float64)
    return (lambda x: np.polynomial.polynomial.polyval(x, coeffs)), coeffs.shape[0] - 1


def cmd_demo(args):
    params = _params(args)
    degree = 2 ** args.levels - 1
    frame = build_frame(params, J=levels_for_degree(degree))
    f, deg = demo_function(args.function, args.coeffs, args.omega, args.seed)
    order = 2 ** (args.levels + 1)
    if deg is not None:
        d = expand(params, f, deg, max(order, (deg + degree + 2) // 2), n_max=degree)
    else:
        d = expand(params, f, degree, order, polynomial=False)
    tail = tail_energy(params, f, degree, 2 * order)
    c = analyze(frame, d)
    back = synthesize(frame, c)
    gap = abs(c.norm_sq() - d.norm_sq()) / d.norm_sq()
    err = float(np.max(np.abs(back.coeffs - d.coeffs)))
    tol = args.tolerance or 1e-10
    ok = gap <= tol and err <= 10 * tol
    print(f"f = {args.function}, alpha={params.alpha:g}, beta={params.beta:g}, "
          f"truncated to degree {degree}")
    print(f"frame levels 0..{frame.J}, {frame.n_atoms} atoms")
    print(f"||d||^2          {d.norm_sq():.15g}")
    print(f"sum |c|^2        {c.norm_sq():.15g}")
    print(f"Parseval gap     {gap:.3e}  {_status(gap <= tol)}")
    print(f"reconstruction   {err:.3e}  {_status(err <= 10 * tol)}")
    print(f"tail energy      {tail:.3e}  (degrees {degree + 1}..{2 * order - 1})")
    level_energy = ", ".join(f"{float(np.dot(v, v)):.2e}" for v in c.levels)
    print(f"energy by level  [{level_energy}]")
    return EXIT_OK if ok else EXIT_FAIL


def run(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        print(f"remedy: {exc.remedy or 'see --help'}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ConvergenceError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE if isinstance(exc, OSError) else EXIT_FAIL
    except (NeedletError, ValueError, KeyError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        print("remedy: check the flag values against --help", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
