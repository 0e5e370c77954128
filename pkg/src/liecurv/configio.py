"""Configuration-file parsing and deterministic output writers.

Input files use a flat INI grammar (sections of key = value, multi-line
values indented).  Numbers in every output are written with Python's
shortest round-trip float representation, so identical runs are
byte-identical.

Grammar summary (see README for the full description):

* algebra file: section ``[algebra]`` with ``dim``, ``gram`` (``identity``,
  ``diag: d1, d2, ...`` or ``rows: r11 r12; r21 r22``) and ``structure``
  (lines ``i j k value``, 1-based, i < j; the antisymmetric completion is
  applied).
* semidirect file: sections ``[g]`` and ``[h]`` shaped like ``[algebra]``
  plus ``[action]`` with ``entries`` lines ``g-index h-row h-col value``.
* plane file: section ``[plane]``; keys ``x``/``y`` for a plain algebra,
  ``x_g``/``x_h``/``y_g``/``y_h`` for semidirect backends (omitted parts are
  zero).  Finite elements are whitespace-separated coordinates; torus
  functions are lines ``parity k1 k2 coeff``; torus fields are lines
  ``parity k1 k2 coeff component``.
* state file: section ``[state]``; key ``u`` (plus ``alpha`` on semidirect
  backends) in the same element syntax.
"""

from __future__ import annotations

import configparser
import json

import numpy as np

from .algebra import DenseBackend, MetricAlgebraSpec
from .backend import Pair
from .errors import ConfigError
from .semidirect import ActionSpec, SemidirectAlgebra, build_semidirect
from . import torus


# ---------------------------------------------------------------------------
# reading
# ---------------------------------------------------------------------------


def load_config(path: str) -> configparser.ConfigParser:
    cp = configparser.ConfigParser()
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    return cp


def _parse_floats(text: str, what: str):
    try:
        return [float(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise ConfigError(f"cannot parse numbers in {what}: {text!r}") from None


def _parse_gram(text: str, dim: int) -> np.ndarray:
    text = text.strip()
    if text == "identity":
        return np.eye(dim)
    if text.startswith("diag:"):
        entries = _parse_floats(text[len("diag:"):], "gram diagonal")
        if len(entries) != dim:
            raise ConfigError(f"gram diagonal needs {dim} entries, got {len(entries)}")
        return np.diag(entries)
    if text.startswith("rows:"):
        text = text[len("rows:"):]
    rows = [r for r in text.split(";") if r.strip()]
    matrix = [_parse_floats(r, "gram row") for r in rows]
    if len(matrix) != dim or any(len(r) != dim for r in matrix):
        raise ConfigError(f"gram must be a {dim}x{dim} matrix")
    return np.asarray(matrix)


def parse_algebra_section(cp: configparser.ConfigParser, section: str) -> MetricAlgebraSpec:
    if not cp.has_section(section):
        raise ConfigError(f"missing section [{section}]")
    try:
        dim = cp.getint(section, "dim")
    except (configparser.NoOptionError, ValueError):
        raise ConfigError(f"[{section}] needs an integer 'dim'") from None
    gram = _parse_gram(cp.get(section, "gram", fallback="identity"), dim)
    structure = np.zeros((dim, dim, dim))
    for line in cp.get(section, "structure", fallback="").splitlines():
        line = line.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ConfigError(f"structure line needs 'i j k value': {line!r}")
        try:
            i, j, k = (int(p) - 1 for p in parts[:3])
            value = float(parts[3])
        except ValueError:
            raise ConfigError(f"bad structure line: {line!r}") from None
        if not all(0 <= idx < dim for idx in (i, j, k)):
            raise ConfigError(f"structure index out of range in: {line!r}")
        if i == j:
            raise ConfigError(f"diagonal structure entry forbidden: {line!r}")
        structure[i, j, k] = value
        structure[j, i, k] = -value
    name = cp.get(section, "name", fallback="")
    return MetricAlgebraSpec(structure=structure, gram=gram, name=name)


def load_algebra_file(path: str) -> MetricAlgebraSpec:
    return parse_algebra_section(load_config(path), "algebra")


def load_semidirect_file(path: str) -> SemidirectAlgebra:
    cp = load_config(path)
    g = parse_algebra_section(cp, "g")
    h = parse_algebra_section(cp, "h")
    if not cp.has_section("action"):
        raise ConfigError("missing section [action]")
    mats = np.zeros((g.dim, h.dim, h.dim))
    for line in cp.get("action", "entries", fallback="").splitlines():
        line = line.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ConfigError(f"action line needs 'g-index h-row h-col value': {line!r}")
        try:
            i, r, c = (int(p) - 1 for p in parts[:3])
            value = float(parts[3])
        except ValueError:
            raise ConfigError(f"bad action line: {line!r}") from None
        if not (0 <= i < g.dim and 0 <= r < h.dim and 0 <= c < h.dim):
            raise ConfigError(f"action index out of range in: {line!r}")
        mats[i, r, c] = value
    return build_semidirect(g, h, ActionSpec(mats))


def parse_trig_function(text: str) -> torus.TrigFunction:
    modes = {}
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ConfigError(f"function mode line needs 'parity k1 k2 coeff': {line!r}")
        parity, k1, k2, coeff = parts
        if parity not in (torus.COS, torus.SIN):
            raise ConfigError(f"parity must be cos or sin: {line!r}")
        try:
            key = (int(k1), int(k2), parity)
            modes[key] = modes.get(key, 0.0) + float(coeff)
        except ValueError:
            raise ConfigError(f"bad function mode line: {line!r}") from None
    return torus.TrigFunction({k: v for k, v in modes.items()})


def parse_trig_field(text: str) -> torus.TrigVectorField:
    comps = ({}, {})
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 5:
            raise ConfigError(f"field mode line needs 'parity k1 k2 coeff component': {line!r}")
        parity, k1, k2, coeff, comp = parts
        if parity not in (torus.COS, torus.SIN):
            raise ConfigError(f"parity must be cos or sin: {line!r}")
        if comp not in ("1", "2"):
            raise ConfigError(f"component must be 1 or 2: {line!r}")
        try:
            key = (int(k1), int(k2), parity)
            target = comps[int(comp) - 1]
            target[key] = target.get(key, 0.0) + float(coeff)
        except ValueError:
            raise ConfigError(f"bad field mode line: {line!r}") from None
    return torus.TrigVectorField(torus.TrigFunction(comps[0]), torus.TrigFunction(comps[1]))


def parse_element(backend_part, text: str):
    """Parse one element in the syntax matching the backend factor."""
    if isinstance(backend_part, DenseBackend):
        coords = _parse_floats(text, "element coordinates")
        if len(coords) != backend_part.dim:
            raise ConfigError(f"expected {backend_part.dim} coordinates, got {len(coords)}")
        return np.asarray(coords)
    if isinstance(backend_part, torus.FunctionSpaceBackend):
        return parse_trig_function(text)
    if isinstance(
        backend_part,
        (torus.VolumeFieldBackend, torus.FullFieldBackend, torus.FieldRepSpaceBackend),
    ):
        return parse_trig_field(text)
    raise ConfigError(f"no element syntax for backend {type(backend_part).__name__}")


def _pair_from_section(cp, section, prefix, backend):
    def part(key, factor):
        if cp.has_option(section, key):
            return parse_element(factor, cp.get(section, key))
        return factor.zero()

    if hasattr(backend, "h_map"):
        return Pair(part(f"{prefix}_g", backend.g), part(f"{prefix}_h", backend.h))
    if not cp.has_option(section, prefix):
        raise ConfigError(f"missing key {prefix!r} in [{section}]")
    return parse_element(backend, cp.get(section, prefix))


def load_plane_file(path: str, backend):
    cp = load_config(path)
    if not cp.has_section("plane"):
        raise ConfigError("missing section [plane]")
    from .curvature import Plane

    return Plane(
        _pair_from_section(cp, "plane", "x", backend),
        _pair_from_section(cp, "plane", "y", backend),
    )


def load_state_file(path: str, backend):
    cp = load_config(path)
    if not cp.has_section("state"):
        raise ConfigError("missing section [state]")
    if hasattr(backend, "h_map"):
        def part(key, factor):
            if cp.has_option("state", key):
                return parse_element(factor, cp.get("state", key))
            return factor.zero()

        return Pair(part("u", backend.g), part("alpha", backend.h))
    if not cp.has_option("state", "u"):
        raise ConfigError("missing key 'u' in [state]")
    return parse_element(backend, cp.get("state", "u"))


# ---------------------------------------------------------------------------
# writing
# ---------------------------------------------------------------------------


def fmt(value: float) -> str:
    """Shortest round-trip decimal representation."""
    return repr(float(value))


def sign_of(k: float, zero_tol: float) -> str:
    if k != k or abs(k) <= zero_tol:  # nan counts as the zero band
        return "0"
    return "+" if k > 0 else "-"


def element_to_jsonable(element):
    """Serialize an element in the same shape the reader accepts."""
    if isinstance(element, Pair):
        return {"g": element_to_jsonable(element.x), "h": element_to_jsonable(element.y)}
    if isinstance(element, torus.TrigFunction):
        return [[p, k1, k2, v] for (k1, k2, p), v in sorted(element.modes.items())]
    if isinstance(element, torus.TrigVectorField):
        rows = [[p, k1, k2, v, 1] for (k1, k2, p), v in sorted(element.comp1.modes.items())]
        rows += [[p, k1, k2, v, 2] for (k1, k2, p), v in sorted(element.comp2.modes.items())]
        return rows
    return [float(v) for v in np.asarray(element).ravel()]


def dumps_json(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), allow_nan=True)


def breakdown_csv_lines(records, zero_tol: float):
    """CSV for curvature breakdowns: one record is (plane_id, breakdown)."""
    lines = []
    for plane_id, br in records:
        if not lines:
            labels = ",".join(label for label, _ in br.terms)
            lines.append(f"plane_id,numerator,denominator,sectional,sign,{labels}")
        cells = [
            str(plane_id),
            fmt(br.numerator),
            fmt(br.denominator),
            fmt(br.sectional),
            sign_of(br.sectional, zero_tol),
        ]
        cells.extend(fmt(v) for _, v in br.terms)
        lines.append(",".join(cells))
    return lines


def breakdown_jsonl_lines(records, zero_tol: float):
    lines = []
    for plane_id, br in records:
        obj = {
            "plane_id": plane_id,
            "numerator": br.numerator,
            "denominator": br.denominator,
            "sectional": br.sectional,
            "sign": sign_of(br.sectional, zero_tol),
            "terms": {label: value for label, value in br.terms},
        }
        lines.append(dumps_json(obj))
    return lines


def scan_csv_lines(records, summary):
    lines = ["plane_id,numerator,denominator,sectional,sign"]
    for rec in records:
        lines.append(
            ",".join(
                [
                    str(rec["plane_id"]),
                    fmt(rec["numerator"]),
                    fmt(rec["denominator"]),
                    fmt(rec["sectional"]),
                    rec["sign"],
                ]
            )
        )
    lines.append(
        "# summary: count={count} negative={negative} zero={zero} positive={positive} "
        "min_k={min_k} max_k={max_k}".format(
            count=summary["count"],
            negative=summary["negative"],
            zero=summary["zero"],
            positive=summary["positive"],
            min_k=fmt(summary["min_k"]) if summary["count"] else "nan",
            max_k=fmt(summary["max_k"]) if summary["count"] else "nan",
        )
    )
    return lines


def scan_jsonl_lines(records, summary):
    lines = [dumps_json(rec) for rec in records]
    lines.append(dumps_json({"summary": summary}))
    return lines


def trajectory_csv_lines(traj, backend):
    """CSV for finite-dimensional trajectories: t, coordinates, energy."""
    first = traj.states[0]
    if isinstance(first, Pair):
        if not isinstance(first.x, np.ndarray):
            raise ConfigError("CSV trajectories need finite coordinates; use jsonl for torus runs")
        nu, na = len(first.x), len(first.y)
        header = ["t"] + [f"u{i+1}" for i in range(nu)] + [f"alpha{i+1}" for i in range(na)]
    elif isinstance(first, np.ndarray):
        nu, na = len(first), 0
        header = ["t"] + [f"u{i+1}" for i in range(nu)]
    else:
        raise ConfigError("CSV trajectories need finite coordinates; use jsonl for torus runs")
    header.append("energy")
    lines = [",".join(header)]
    for t, state, energy in zip(traj.times, traj.states, traj.energy):
        if isinstance(state, Pair):
            coords = list(state.x) + list(state.y)
        else:
            coords = list(state)
        lines.append(",".join([fmt(t)] + [fmt(c) for c in coords] + [fmt(energy)]))
    return lines


def trajectory_jsonl_lines(traj, backend):
    lines = []
    for t, state, energy in zip(traj.times, traj.states, traj.energy):
        if isinstance(state, Pair):
            obj = {
                "t": t,
                "u": element_to_jsonable(state.x),
                "alpha": element_to_jsonable(state.y),
                "energy": energy,
            }
        else:
            obj = {"t": t, "u": element_to_jsonable(state), "energy": energy}
        lines.append(dumps_json(obj))
    return lines
