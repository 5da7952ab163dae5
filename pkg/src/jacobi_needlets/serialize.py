"""JSON and CSV storage for frames, coefficients, expansions and reports.

Every JSON document carries ``"format": "needlet/1"`` and a ``"kind"``.
Floats are written with ``repr`` (shortest round-trip), so a stored frame
reloads bit for bit.  Keys are sorted and the layout is fixed, which makes
outputs byte-identical across runs.
"""
import csv
import json
import math

import numpy as np

from .cutoff import STEP_SCALE, default_cutoff
from .errors import ParameterError
from .frame import Expansion, NeedletCoefficients, build_frame
from .jacobi import JacobiParams
from .quadrature import QuadratureRule

FORMAT = "needlet/1"


def _floats(arr):
    return [float(v) for v in np.asarray(arr, dtype=np.float64).reshape(-1)]


def _clean(obj):
    # numpy scalars/arrays -> plain python so json emits repr floats
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def dumps(doc):
    return json.dumps(_clean(doc), sort_keys=True, indent=1) + "\n"


def write_json(path, doc):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(doc))


def read_json(path, kind=None):
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format") != FORMAT:
        raise ParameterError(f"{path}: unsupported format {doc.get('format')!r}, "
                             f"expected {FORMAT!r}")
    if kind is not None and doc.get("kind") != kind:
        raise ParameterError(f"{path}: expected a {kind} document, got {doc.get('kind')!r}")
    return doc


def frame_to_dict(frame):
    return {
        "format": FORMAT,
        "kind": "frame",
        "alpha": frame.params.alpha,
        "beta": frame.params.beta,
        "J": frame.J,
        "cutoff": {"name": frame.cutoff.name, "step_scale": STEP_SCALE,
                   "support": list(frame.cutoff.support)},
        "levels": [{"j": j, "n": r.n, "nodes": _floats(r.nodes),
                    "weights": _floats(r.weights)}
                   for j, r in enumerate(frame.levels)],
    }


def frame_from_dict(doc):
    params = JacobiParams(doc["alpha"], doc["beta"])
    cutoff = default_cutoff()
    stored = doc.get("cutoff", {})
    if stored.get("name", cutoff.name) != cutoff.name or \
            stored.get("step_scale", STEP_SCALE) != STEP_SCALE:
        raise ParameterError(f"frame was built with cutoff {stored!r}, which this "
                             f"version does not provide")
    rules = []
    for level in doc["levels"]:
        nodes = np.array(level["nodes"], dtype=np.float64)
        weights = np.array(level["weights"], dtype=np.float64)
        thetas = np.arccos(np.clip(nodes, -1.0, 1.0))
        for arr in (nodes, weights, thetas):
            arr.setflags(write=False)
        rules.append(QuadratureRule(params, int(level["n"]), nodes, weights, thetas))
    return build_frame(params, cutoff, int(doc["J"]), rules=rules)


def save_frame(path, frame):
    write_json(path, frame_to_dict(frame))


def load_frame(path):
    return frame_from_dict(read_json(path, "frame"))


def coefficients_to_dict(frame, c):
    levels = []
    for j, vals in enumerate(c.levels):
        th = frame.levels[j].thetas
        levels.append({"j": j, "atoms": [[nu + 1, float(th[nu]), float(v)]
                                         for nu, v in enumerate(vals)]})
    return {"format": FORMAT, "kind": "coefficients", "alpha": c.params.alpha,
            "beta": c.params.beta, "J": c.J, "degree": c.degree, "levels": levels}


def coefficients_from_dict(doc):
    params = JacobiParams(doc["alpha"], doc["beta"])
    levels = []
    for level in sorted(doc["levels"], key=lambda lv: lv["j"]):
        atoms = sorted(level["atoms"], key=lambda a: a[0])
        levels.append(np.array([a[2] for a in atoms], dtype=np.float64))
    return NeedletCoefficients(params, tuple(levels), doc.get("degree"))


def save_coefficients(path, frame, c):
    write_json(path, coefficients_to_dict(frame, c))


def load_coefficients(path):
    return coefficients_from_dict(read_json(path, "coefficients"))


def _rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                yield [float(v) for v in row]
            except ValueError:
                continue  # header line


def read_samples(path):
    """``x,f(x)`` rows sorted by x."""
    rows = list(_rows(path))
    if not rows or any(len(r) < 2 for r in rows):
        raise ParameterError(f"{path}: expected rows 'x,f(x)'")
    data = np.array([r[:2] for r in rows])
    data = data[np.argsort(data[:, 0], kind="stable")]
    if np.any(np.abs(data[:, 0]) > 1.0):
        raise ParameterError(f"{path}: sample abscissae must lie in [-1, 1]")
    return data[:, 0], data[:, 1]


def read_vector(path):
    """One number per row, or ``index,value`` rows."""
    rows = list(_rows(path))
    if not rows:
        raise ParameterError(f"{path}: no coefficients found")
    if all(len(r) == 1 for r in rows):
        return np.array([r[0] for r in rows])
    out = np.zeros(int(max(r[0] for r in rows)) + 1)
    for r in rows:
        out[int(r[0])] = r[1]
    return out


def write_csv(path_or_file, header, rows):
    def emit(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v
                        for v in row])
    if hasattr(path_or_file, "write"):
        emit(path_or_file)
    else:
        with open(path_or_file, "w", newline="", encoding="utf-8") as fh:
            emit(fh)


def expansion_rows(d):
    return [(nu, float(v)) for nu, v in enumerate(d.coeffs)]


def read_expansion(path, params):
    return Expansion(params, read_vector(path))
