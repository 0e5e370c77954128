"""Command-line interface: validate, curvature, scan, geodesic.

Exit codes: 0 success, 1 validation failure (including degenerate planes and
divergence violations), 2 numerical failure, 3 configuration error.  All
outputs are deterministic for identical invocations; random sampling is
seeded PCG64 with no global state.
"""

from __future__ import annotations

import argparse
import sys

from . import catalog, configio, torus
from .algebra import DenseBackend, ValidationReport, validate
from .curvature import (
    Plane,
    curvature_numerator_generic,
    curvature_numerator_semidirect,
    plane_gram2,
)
from .errors import (
    ConfigError,
    DegeneratePlane,
    DimensionMismatch,
    LiecurvError,
    MidpointDivergence,
    NotAdInvariant,
    NotDivergenceFree,
    NotIsometric,
    SamplingExhausted,
    ValidationFailure,
)
from .geodesic import IntegratorConfig, geodesic_rhs, integrate
from .sampling import FAMILIES, sample_planes
from .semidirect import SemidirectAlgebra, validate_action

_TORUS_BACKENDS = (
    torus.VolumeFieldBackend,
    torus.FullFieldBackend,
    torus.PassiveScalarBackend,
    torus.CompressibleScalarBackend,
    torus.MhdBackend,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); route to the config code
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="liecurv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="task", required=True, parser_class=_Parser)

    def backend_flags(sp):
        sp.add_argument("--algebra", help="builtin algebra selector, e.g. so3 or so3:1,2,3")
        sp.add_argument("--algebra-file", help="inline algebra spec file")
        sp.add_argument("--semidirect", help="builtin semidirect selector, e.g. conjugation:so3")
        sp.add_argument("--semidirect-file", help="inline semidirect spec file")

    def output_flags(sp):
        sp.add_argument("--output", help="write results to this file instead of stdout")
        sp.add_argument("--format", choices=("csv", "jsonl"), default="csv")

    sp = sub.add_parser("validate", help="validate an algebra or semidirect spec")
    backend_flags(sp)
    sp.add_argument("--tol", type=float, default=1e-10, help="validation tolerance")

    sp = sub.add_parser("curvature", help="evaluate the curvature of one plane")
    backend_flags(sp)
    sp.add_argument("--plane-file", required=True)
    sp.add_argument("--zero-tol", type=float, default=1e-12)
    output_flags(sp)

    sp = sub.add_parser("scan", help="sectional-curvature sign statistics over random planes")
    backend_flags(sp)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--count", type=int, required=True)
    sp.add_argument("--family", choices=FAMILIES, default="full")
    sp.add_argument("--band", type=int, default=2, help="torus sampling band |k|_inf")
    sp.add_argument("--zero-tol", type=float, default=1e-12)
    output_flags(sp)

    sp = sub.add_parser("geodesic", help="integrate the geodesic equation")
    backend_flags(sp)
    sp.add_argument("--state-file", required=True)
    sp.add_argument("--dt", type=float, required=True)
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--scheme", choices=("rk4", "implicit_midpoint"), default="rk4")
    sp.add_argument("--support-cap", type=int, default=16,
                    help="torus runs: drop modes with |k|_inf above this (experimental)")
    output_flags(sp)
    return parser


def _resolve_backend(args):
    chosen = [
        name for name in ("algebra", "algebra_file", "semidirect", "semidirect_file")
        if getattr(args, name, None)
    ]
    if len(chosen) != 1:
        raise ConfigError("choose exactly one of --algebra/--algebra-file/--semidirect/--semidirect-file")
    kind = chosen[0]
    if kind == "algebra":
        return catalog.resolve_algebra(args.algebra)
    if kind == "algebra_file":
        return DenseBackend(configio.load_algebra_file(args.algebra_file))
    if kind == "semidirect":
        return catalog.resolve_semidirect(args.semidirect)
    return configio.load_semidirect_file(args.semidirect_file)


def _is_torus(backend) -> bool:
    return isinstance(backend, _TORUS_BACKENDS)


def _emit(lines, args):
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _relative_residual(lhs: float, rhs: float) -> float:
    return abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))


def _torus_spot_report(backend, tol: float) -> ValidationReport:
    """Adjointness and h-relation spot checks over the band-1 mode family."""
    report = ValidationReport(subject=getattr(backend, "name", "torus backend"))
    if hasattr(backend, "h_map"):
        report.checked = ["g_adjointness", "h_defining_relation", "b_adjointness"]
        gmodes = backend.g.sample_basis(1)
        hmodes = backend.h.sample_basis(1)
        worst = 0.0
        for x in gmodes:
            for z in gmodes:
                for y in gmodes:
                    lhs = backend.g.inner(backend.g.bracket(x, z), y)
                    rhs = backend.g.inner(z, backend.g.ad_transpose(x, y))
                    worst = max(worst, _relative_residual(lhs, rhs))
        if worst > tol:
            report.add("g_adjointness", (), worst)
        worst_h = 0.0
        worst_b = 0.0
        for x in gmodes:
            for y1 in hmodes:
                for y2 in hmodes:
                    lhs = backend.h.inner(backend.b(x, y1), y2)
                    rhs = backend.g.inner(backend.h_map(y1, y2), x)
                    worst_h = max(worst_h, _relative_residual(lhs, rhs))
                    rhs = backend.h.inner(y1, backend.b_transpose(x, y2))
                    worst_b = max(worst_b, _relative_residual(lhs, rhs))
        if worst_h > tol:
            report.add("h_defining_relation", (), worst_h)
        if worst_b > tol:
            report.add("b_adjointness", (), worst_b)
    else:
        report.checked = ["adjointness"]
        modes = backend.sample_basis(1)
        worst = 0.0
        for x in modes:
            for z in modes:
                for y in modes:
                    lhs = backend.inner(backend.bracket(x, z), y)
                    rhs = backend.inner(z, backend.ad_transpose(x, y))
                    worst = max(worst, _relative_residual(lhs, rhs))
        if worst > tol:
            report.add("adjointness", (), worst)
    return report


def _run_validate(args) -> int:
    try:
        backend = _resolve_backend(args)
    except ValidationFailure as exc:
        print(exc.report)
        return 1
    reports = []
    if isinstance(backend, SemidirectAlgebra):
        reports.append(validate(backend.g_spec, jacobi_tol=args.tol))
        reports.append(validate(backend.h_spec, jacobi_tol=args.tol))
        reports.append(validate_action(backend.g_spec, backend.h_spec, backend.action, tol=args.tol))
        reports.append(validate(backend.product_spec, jacobi_tol=args.tol))
    elif isinstance(backend, DenseBackend):
        reports.append(validate(backend.spec, jacobi_tol=args.tol))
    else:
        reports.append(_torus_spot_report(backend, args.tol))
    for report in reports:
        print(report)
    return 0 if all(r.passed for r in reports) else 1


def _breakdown_for(backend, plane: Plane):
    if hasattr(backend, "h_map"):
        return curvature_numerator_semidirect(backend, plane.x, plane.y)
    return curvature_numerator_generic(backend, plane.x, plane.y)


def _run_curvature(args) -> int:
    backend = _resolve_backend(args)
    plane = configio.load_plane_file(args.plane_file, backend)
    denom = plane_gram2(backend, plane.x, plane.y)
    scale = backend.inner(plane.x, plane.x) * backend.inner(plane.y, plane.y)
    if not denom > 1e-12 * max(scale, 0.0):
        raise DegeneratePlane(f"plane Gram determinant {denom:.3e} below tolerance")
    breakdown = _breakdown_for(backend, plane)
    records = [(0, breakdown)]
    if args.format == "csv":
        lines = configio.breakdown_csv_lines(records, args.zero_tol)
    else:
        lines = configio.breakdown_jsonl_lines(records, args.zero_tol)
    _emit(lines, args)
    return 0


def _run_scan(args) -> int:
    backend = _resolve_backend(args)
    planes = sample_planes(backend, args.seed, args.count, family=args.family, band=args.band)
    records = []
    for plane_id, plane in enumerate(planes):
        br = _breakdown_for(backend, plane)
        k = br.numerator / br.denominator
        records.append(
            {
                "plane_id": plane_id,
                "numerator": br.numerator,
                "denominator": br.denominator,
                "sectional": k,
                "sign": configio.sign_of(k, args.zero_tol),
            }
        )
    summary = {
        "count": len(records),
        "negative": sum(r["sign"] == "-" for r in records),
        "zero": sum(r["sign"] == "0" for r in records),
        "positive": sum(r["sign"] == "+" for r in records),
        "min_k": min((r["sectional"] for r in records), default=float("nan")),
        "max_k": max((r["sectional"] for r in records), default=float("nan")),
    }
    if args.format == "csv":
        lines = configio.scan_csv_lines(records, summary)
    else:
        lines = configio.scan_jsonl_lines(records, summary)
    _emit(lines, args)
    return 0


def _run_geodesic(args) -> int:
    backend = _resolve_backend(args)
    state = configio.load_state_file(args.state_file, backend)
    rhs = geodesic_rhs(backend)
    if _is_torus(backend):
        rhs = torus.capped_rhs(rhs, args.support_cap)
        print(
            f"note: torus run truncated at |k|_inf <= {args.support_cap}; "
            "experimental, not the exact geodesic flow",
            file=sys.stderr,
        )
    config = IntegratorConfig(dt=args.dt, steps=args.steps, scheme=args.scheme)
    traj = integrate(rhs, state, config, backend)
    if args.format == "csv":
        lines = configio.trajectory_csv_lines(traj, backend)
    else:
        lines = configio.trajectory_jsonl_lines(traj, backend)
    _emit(lines, args)
    return 0


_TASKS = {
    "validate": _run_validate,
    "curvature": _run_curvature,
    "scan": _run_scan,
    "geodesic": _run_geodesic,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _TASKS[args.task](args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 3
    except (MidpointDivergence, SamplingExhausted) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (
        ValidationFailure,
        DegeneratePlane,
        NotDivergenceFree,
        NotAdInvariant,
        NotIsometric,
        DimensionMismatch,
    ) as exc:
        print(f"validation failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except LiecurvError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 3


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
